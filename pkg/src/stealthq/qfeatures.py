"""
Seven-dimensional hybrid features read off the encoded three-qubit state.

Two readings of the interaction terms are supported:

``FeatureMode.PRODUCT``
    Products of single-qubit expectations, e.g. ``<Z0> * <Z1>``.
``FeatureMode.CORRELATION``
    Multi-qubit expectations of the same state, e.g. ``<Z0 Z1>``.

The two coincide on product states and differ once the CNOT ladder
entangles the register.
"""
from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from . import qsim
from .encoding import NUM_QUBITS, NormalizationStats, encode_state, to_angles
from .errors import InvalidArgumentError

COLUMNS = ("z1", "z2", "z3", "w12", "w13", "w23", "w123")

# qubit subsets, in column order
_SUBSETS = ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
_OBSERVABLES = tuple(qsim.ZString.on(NUM_QUBITS, s) for s in _SUBSETS)


class FeatureMode(str, enum.Enum):
    PRODUCT = "product"
    CORRELATION = "correlation"


class HybridFeatureVector(NamedTuple):
    z1: float
    z2: float
    z3: float
    w12: float
    w13: float
    w23: float
    w123: float


def base_from_state(state: qsim.Statevector) -> np.ndarray:
    """Single-qubit ``<Z_j>`` for j = 0, 1, 2; shape ``batch + (3,)``."""
    return np.stack(
        [np.asarray(qsim.expectation_zstring(state, obs)) for obs in _OBSERVABLES[:3]],
        axis=-1,
    )


def features_from_state(state: qsim.Statevector, mode=FeatureMode.CORRELATION) -> np.ndarray:
    """Hybrid feature array of shape ``batch + (7,)`` for an encoded state."""
    mode = FeatureMode(mode)
    if state.num_qubits != NUM_QUBITS:
        raise InvalidArgumentError(f"expected a {NUM_QUBITS}-qubit state")
    if mode is FeatureMode.CORRELATION:
        return np.stack(
            [np.asarray(qsim.expectation_zstring(state, obs)) for obs in _OBSERVABLES],
            axis=-1,
        )
    z = base_from_state(state)
    z1, z2, z3 = z[..., 0], z[..., 1], z[..., 2]
    return np.stack([z1, z2, z3, z1 * z2, z1 * z3, z2 * z3, z1 * z2 * z3], axis=-1)


def extract_base(rows, stats: NormalizationStats) -> np.ndarray:
    """``(z1, z2, z3)`` for one sample, or an ``(n, 3)`` array for many."""
    return base_from_state(encode_state(to_angles(rows, stats)))


def extract_hybrid(rows, stats: NormalizationStats, mode=FeatureMode.CORRELATION) -> np.ndarray:
    """Seven hybrid features per sample; shape ``(7,)`` or ``(n, 7)``."""
    return features_from_state(encode_state(to_angles(rows, stats)), mode)


def as_vector(features) -> HybridFeatureVector:
    return HybridFeatureVector(*(float(v) for v in np.asarray(features).reshape(7)))
