"""
Dense statevector simulator for small registers.

Only the gates the detectors need are provided: Y-rotations, CNOT, and
expectation values of tensor products of I and Z.

Layout conventions
------------------
* Amplitude index bit ``i`` is the computational value of qubit ``i``
  (qubit 0 is the least significant bit).
* ``Ry(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]``.
* ``Statevector.amplitudes`` has shape ``(..., 2**num_qubits)``; any leading
  axes are a batch of independent registers (one per data sample). Every
  operation acts on the last axis and broadcasts over the rest.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidArgumentError

MAX_QUBITS = 12


def _check_num_qubits(num_qubits: int) -> int:
    if isinstance(num_qubits, bool) or int(num_qubits) != num_qubits:
        raise InvalidArgumentError(f"num_qubits must be an integer, got {num_qubits!r}")
    num_qubits = int(num_qubits)
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise InvalidArgumentError(
            f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}"
        )
    return num_qubits


def _check_qubit(qubit: int, num_qubits: int, name: str = "qubit") -> int:
    if isinstance(qubit, bool) or int(qubit) != qubit:
        raise InvalidArgumentError(f"{name} must be an integer index, got {qubit!r}")
    qubit = int(qubit)
    if not 0 <= qubit < num_qubits:
        raise InvalidArgumentError(
            f"{name} index {qubit} out of range for {num_qubits} qubits"
        )
    return qubit


@dataclass(frozen=True)
class Statevector:
    """Immutable amplitude vector (or batch of vectors) of an n-qubit register."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = _check_num_qubits(self.num_qubits)
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim == 0 or amps.shape[-1] != 2**n:
            raise InvalidArgumentError(
                f"expected trailing dimension {2**n}, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "num_qubits", n)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.amplitudes.shape[:-1]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> np.ndarray | float:
        out = self.probabilities().sum(axis=-1)
        return float(out) if out.ndim == 0 else out

    def __len__(self) -> int:
        return self.amplitudes.shape[-1]


@dataclass(frozen=True)
class ZString:
    """Tensor product of I and Z; bit ``i`` of ``z_mask`` puts Z on qubit ``i``."""

    num_qubits: int
    z_mask: int

    def __post_init__(self):
        n = _check_num_qubits(self.num_qubits)
        mask = int(self.z_mask)
        if mask < 0 or mask >> n:
            raise InvalidArgumentError(
                f"z_mask {mask:#b} has bits outside {n} qubits"
            )
        object.__setattr__(self, "num_qubits", n)
        object.__setattr__(self, "z_mask", mask)

    @classmethod
    def on(cls, num_qubits: int, qubits: Iterable[int]) -> "ZString":
        """Z on each listed qubit, identity elsewhere."""
        mask = 0
        for q in qubits:
            mask |= 1 << _check_qubit(q, num_qubits)
        return cls(num_qubits, mask)

    def label(self) -> str:
        # Written qubit 0 first, e.g. "ZII" for Z on qubit 0 of three.
        return "".join(
            "Z" if self.z_mask >> q & 1 else "I" for q in range(self.num_qubits)
        )

    def signs(self) -> np.ndarray:
        """Eigenvalue (+1 or -1) of the observable on each basis state."""
        idx = np.arange(2**self.num_qubits)
        parity = np.zeros_like(idx)
        masked = idx & self.z_mask
        while masked.any():
            parity ^= masked & 1
            masked >>= 1
        return 1.0 - 2.0 * parity


def init_zero(num_qubits: int, batch_shape: tuple[int, ...] = ()) -> Statevector:
    """All-zero computational basis state |0...0>, optionally repeated over a batch."""
    n = _check_num_qubits(num_qubits)
    amps = np.zeros(tuple(batch_shape) + (2**n,), dtype=np.complex128)
    amps[..., 0] = 1.0
    return Statevector(n, amps)


def apply_ry(state: Statevector, qubit: int, angle) -> Statevector:
    """Rotate ``qubit`` about Y by ``angle`` radians.

    ``angle`` may be a scalar or an array matching ``state.batch_shape``.
    """
    n = state.num_qubits
    q = _check_qubit(qubit, n)
    angle = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(angle)):
        raise InvalidArgumentError("rotation angle must be finite")
    half = angle[..., None, None] / 2.0
    c, s = np.cos(half), np.sin(half)

    batch = state.batch_shape
    amps = state.amplitudes.reshape(batch + (2 ** (n - 1 - q), 2, 2**q))
    a0 = amps[..., 0, :]
    a1 = amps[..., 1, :]
    out = np.empty(np.broadcast_shapes(amps.shape, c.shape[:-2] + (1, 1, 1)),
                   dtype=np.complex128)
    out[..., 0, :] = c * a0 - s * a1
    out[..., 1, :] = s * a0 + c * a1
    return Statevector(n, out.reshape(out.shape[:-3] + (2**n,)))


def _cnot_permutation(num_qubits: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(2**num_qubits)
    flip = (idx >> control) & 1
    return idx ^ (flip << target)


def apply_cnot(state: Statevector, control: int, target: int) -> Statevector:
    """Flip ``target`` on every basis state whose ``control`` bit is 1."""
    n = state.num_qubits
    c = _check_qubit(control, n, "control")
    t = _check_qubit(target, n, "target")
    if c == t:
        raise InvalidArgumentError("control and target must differ")
    perm = _cnot_permutation(n, c, t)
    return Statevector(n, state.amplitudes[..., perm])


def expectation_zstring(state: Statevector, obs: ZString):
    """Exact <psi|obs|psi>; a float for a single register, an array for a batch."""
    if obs.num_qubits != state.num_qubits:
        raise InvalidArgumentError(
            f"observable acts on {obs.num_qubits} qubits, state has {state.num_qubits}"
        )
    out = state.probabilities() @ obs.signs()
    return float(out) if np.ndim(out) == 0 else out
