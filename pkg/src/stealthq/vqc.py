"""
Variational quantum classifier on the angle-encoded three-qubit state.

Each ansatz layer applies ``Ry(theta[l, i])`` to every qubit, then the CNOT
ladder 0 -> 1 -> 2. The decision score is ``<Z>`` on qubit 0 after all
layers; scores at or above the threshold (default 0) predict an attack.
Training minimizes the mean squared error between the score and a target
per label. With ``labels="signed"`` (the default) the targets are -1 for
normal and +1 for attack, matching the score range and the threshold at 0.
``labels="binary"`` uses the raw 0/1 labels as targets; its optimum sits at
scores near 0.5 for every sample, so thresholding at 0 predicts almost
everything as an attack.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .encoding import NUM_QUBITS, NormalizationStats, encode_state, entangle, to_angles
from .errors import InvalidArgumentError
from .optim import OptResult, SpsaConfig, simplex_minimize, spsa_minimize

DEPTHS = (1, 2, 3)
OPTIMIZERS = ("spsa", "simplex")
LABEL_TARGETS = ("signed", "binary")
DEFAULT_OBSERVABLE = qsim.ZString.on(NUM_QUBITS, [0])


@dataclass(frozen=True)
class AnsatzParams:
    depth: int
    theta: np.ndarray

    def __post_init__(self):
        if int(self.depth) != self.depth or self.depth < 1:
            raise InvalidArgumentError(f"depth must be a positive integer, got {self.depth}")
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size != NUM_QUBITS * self.depth:
            raise InvalidArgumentError(
                f"depth {self.depth} needs {NUM_QUBITS * self.depth} angles, got {theta.size}"
            )
        if not np.all(np.isfinite(theta)):
            raise InvalidArgumentError("ansatz angles must be finite")
        theta.setflags(write=False)
        object.__setattr__(self, "depth", int(self.depth))
        object.__setattr__(self, "theta", theta)

    @property
    def layers(self) -> np.ndarray:
        """Angles as a ``(depth, 3)`` array, one row per layer."""
        return self.theta.reshape(self.depth, NUM_QUBITS)

    @classmethod
    def random(cls, depth: int, rng: np.random.Generator) -> "AnsatzParams":
        return cls(depth, rng.uniform(-np.pi / 2, np.pi / 2, size=NUM_QUBITS * depth))


@dataclass(frozen=True)
class VqcModel:
    params: AnsatzParams
    stats: NormalizationStats
    observable: qsim.ZString = DEFAULT_OBSERVABLE
    threshold: float = 0.0

    def __post_init__(self):
        if self.observable.num_qubits != NUM_QUBITS:
            raise InvalidArgumentError(f"observable must act on {NUM_QUBITS} qubits")


@dataclass
class TrainingRun:
    model: VqcModel
    result: OptResult
    optimizer: str
    initial_params: AnsatzParams = field(repr=False)

    @property
    def trace(self) -> list[tuple[int, float]]:
        return self.result.trace

    def __iter__(self):
        # unpacks as (model, loss_trace)
        return iter((self.model, self.trace))


def apply_ansatz(state: qsim.Statevector, params: AnsatzParams) -> qsim.Statevector:
    if state.num_qubits != NUM_QUBITS:
        raise InvalidArgumentError(f"ansatz acts on {NUM_QUBITS} qubits, got {state.num_qubits}")
    for row in params.layers:
        for q in range(NUM_QUBITS):
            state = qsim.apply_ry(state, q, row[q])
        state = entangle(state)
    return state


def score_states(encoded: qsim.Statevector, params: AnsatzParams,
                 observable: qsim.ZString = DEFAULT_OBSERVABLE):
    """Decision scores for already-encoded states."""
    return qsim.expectation_zstring(apply_ansatz(encoded, params), observable)


def score(model: VqcModel, rows):
    """Continuous score in [-1, 1]; scalar for one sample, array for many."""
    encoded = encode_state(to_angles(rows, model.stats))
    return score_states(encoded, model.params, model.observable)


def predict(model: VqcModel, rows):
    s = np.asarray(score(model, rows))
    out = (s >= model.threshold).astype(int)
    return int(out) if out.ndim == 0 else out


def targets(y, labels: str = "signed") -> np.ndarray:
    """Regression targets for 0/1 labels: +/-1 (``"signed"``) or 0/1 (``"binary"``)."""
    if labels not in LABEL_TARGETS:
        raise InvalidArgumentError(f"labels must be one of {LABEL_TARGETS}, got {labels!r}")
    y = np.asarray(y, dtype=float)
    return 2.0 * y - 1.0 if labels == "signed" else y


def mse_from_scores(t, s) -> float:
    """Mean of ``(t_k - s_k)**2`` for targets ``t`` and scores ``s``."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    return float(np.mean((t - s) ** 2))


def mse_loss(params: AnsatzParams, rows, y, stats: NormalizationStats,
             labels: str = "signed") -> float:
    """Mean squared error between decision scores and the label targets."""
    y = targets(np.asarray(y).reshape(-1), labels)
    if y.size == 0:
        raise InvalidArgumentError("loss needs at least one sample")
    encoded = encode_state(to_angles(rows, stats))
    s = np.asarray(score_states(encoded, params)).reshape(-1)
    if s.size != y.size:
        raise InvalidArgumentError("one label per sample required")
    return mse_from_scores(y, s)


def train_vqc(rows, y, stats: NormalizationStats, depth: int = 2, optimizer: str = "spsa",
              optimizer_config: dict | SpsaConfig | None = None, seed: int = 42,
              labels: str = "signed") -> TrainingRun:
    """Fit ansatz angles from a seeded uniform start in ``[-pi/2, pi/2]``.

    ``optimizer_config`` is a :class:`SpsaConfig` (or its keyword dict) for
    SPSA, or ``{"max_iter": ..., "step": ...}`` for the simplex method. The
    best-seen parameters are kept.
    """
    if depth not in DEPTHS:
        raise InvalidArgumentError(f"depth must be one of {DEPTHS}, got {depth}")
    if optimizer not in OPTIMIZERS:
        raise InvalidArgumentError(f"unknown optimizer {optimizer!r}; choose from {OPTIMIZERS}")
    y = targets(np.asarray(y).reshape(-1), labels)
    if y.size == 0:
        raise InvalidArgumentError("training data is empty")
    encoded = encode_state(to_angles(rows, stats))
    if encoded.batch_shape != (y.size,):
        raise InvalidArgumentError("one label per training row required")

    rng = np.random.default_rng(seed)
    init = AnsatzParams.random(depth, rng)

    def loss_fn(theta: np.ndarray) -> float:
        return mse_from_scores(y, score_states(encoded, AnsatzParams(depth, theta)))

    if optimizer == "spsa":
        if isinstance(optimizer_config, SpsaConfig):
            cfg = optimizer_config
        else:
            cfg = SpsaConfig(**{"seed": seed, **(optimizer_config or {})})
        result = spsa_minimize(loss_fn, init.theta, cfg)
    else:
        opts = {"max_iter": 80, **(optimizer_config or {})}
        result = simplex_minimize(loss_fn, init.theta, seed=seed, **opts)

    model = VqcModel(AnsatzParams(depth, result.best_params), stats)
    return TrainingRun(model, result, optimizer, init)
