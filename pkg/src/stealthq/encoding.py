"""
Feature derivation, train-only normalization and angle encoding.

The three classifier features are, in order, reactive power at the DG unit
(``q_dg1``), frequency deviation from nominal (``f_dev``) and terminal voltage
magnitude (``v1``). Each one drives a Y-rotation on its own qubit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import qsim
from .errors import DegenerateFeatureError, InvalidArgumentError, NotFittedError

FEATURES = ("q_dg1", "f_dev", "v1")
NUM_QUBITS = len(FEATURES)
NOMINAL_FREQUENCY = 50.0  # Hz


class RawSample(NamedTuple):
    q_dg1: float
    f_dev: float
    v1: float
    label: int = 0


def as_feature_matrix(rows) -> np.ndarray:
    """Coerce RawSamples, a single sample, or an array to float features.

    Returns shape ``(3,)`` for one sample and ``(n, 3)`` for a collection.
    A trailing label column, if present, is dropped.
    """
    if isinstance(rows, RawSample):
        X = np.array(rows[:3], dtype=float)
    else:
        X = np.asarray(rows, dtype=float)
        if X.ndim == 0 or X.shape[-1] not in (3, 4):
            raise InvalidArgumentError(f"expected 3 feature columns, got shape {X.shape}")
        X = X[..., :3]
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("features must be finite")
    return X


def compute_f_dev(f_meas, f0: float = NOMINAL_FREQUENCY):
    """Frequency deviation ``f_meas - f0`` in Hz."""
    f_meas = np.asarray(f_meas, dtype=float)
    if not (np.all(np.isfinite(f_meas)) and np.isfinite(f0)):
        raise InvalidArgumentError("frequencies must be finite")
    if f0 <= 0:
        raise InvalidArgumentError(f"nominal frequency must be positive, got {f0}")
    out = f_meas - f0
    return float(out) if out.ndim == 0 else out


def first_diff(series: Sequence[float]) -> np.ndarray:
    """Consecutive differences ``series[k+1] - series[k]``.

    Only used for exploratory analysis; classifiers never see these.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidArgumentError("first_diff needs a 1-D series of length >= 2")
    return np.diff(x)


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature z-score parameters plus the z-scored training range.

    Standard deviations use the population convention (divide by N).
    """

    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    z_min: np.ndarray | None = None
    z_max: np.ndarray | None = None

    @property
    def fitted(self) -> bool:
        return all(v is not None for v in (self.mean, self.std, self.z_min, self.z_max))

    def _require_fitted(self):
        if not self.fitted:
            raise NotFittedError("normalization statistics have not been fitted")

    def zscore(self, rows) -> np.ndarray:
        self._require_fitted()
        return (as_feature_matrix(rows) - self.mean) / self.std

    def to_dict(self) -> dict:
        self._require_fitted()
        return {
            name: {
                "mean": float(self.mean[i]),
                "std": float(self.std[i]),
                "z_min": float(self.z_min[i]),
                "z_max": float(self.z_max[i]),
            }
            for i, name in enumerate(FEATURES)
        }


def fit_normalizer(train_rows) -> NormalizationStats:
    """Fit z-score and min-max statistics on training rows only."""
    X = as_feature_matrix(train_rows)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidArgumentError("need at least two training rows")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    for name, s in zip(FEATURES, std):
        if not s > 0:
            raise DegenerateFeatureError(name)
    Z = (X - mean) / std
    z_min, z_max = Z.min(axis=0), Z.max(axis=0)
    for name, lo, hi in zip(FEATURES, z_min, z_max):
        if not hi > lo:
            raise DegenerateFeatureError(name)
    arrays = [mean, std, z_min, z_max]
    for a in arrays:
        a.setflags(write=False)
    return NormalizationStats(*arrays)


def to_angles(rows, stats: NormalizationStats) -> np.ndarray:
    """Map raw features to Y-rotation angles in ``[-pi/2, pi/2]``.

    z-scores outside the training range are clamped to it first, so unseen
    samples still produce valid angles.
    """
    z = stats.zscore(rows)
    z = np.clip(z, stats.z_min, stats.z_max)
    return (z - stats.z_min) / (stats.z_max - stats.z_min) * np.pi - np.pi / 2


def entangle(state: qsim.Statevector) -> qsim.Statevector:
    """CNOT ladder: qubit 0 -> 1, then qubit 1 -> 2."""
    state = qsim.apply_cnot(state, 0, 1)
    return qsim.apply_cnot(state, 1, 2)


def encode_state(angles, entangled: bool = True) -> qsim.Statevector:
    """Angle-encode one sample (shape ``(3,)``) or a batch (``(n, 3)``).

    Each angle rotates its qubit away from |000>, then the CNOT ladder is
    applied. ``entangled=False`` stops after the rotations (a product state),
    which is only useful for analysis.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape[-1:] != (NUM_QUBITS,):
        raise InvalidArgumentError(f"expected {NUM_QUBITS} angles, got shape {angles.shape}")
    state = qsim.init_zero(NUM_QUBITS, angles.shape[:-1])
    for q in range(NUM_QUBITS):
        state = qsim.apply_ry(state, q, angles[..., q])
    return entangle(state) if entangled else state
