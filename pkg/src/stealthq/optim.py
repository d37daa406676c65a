"""
Gradient-free minimizers for the variational classifier.

``spsa_minimize`` implements simultaneous perturbation stochastic
approximation with the usual power-law gain sequences. ``simplex_minimize``
is a Nelder-Mead simplex search used where a deterministic local optimizer
is wanted for shallow circuits.

Both record the loss at the nominal iterate once per iteration, so traces
are comparable between the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergenceError, InvalidArgumentError

LossFn = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class SpsaConfig:
    max_iter: int = 200
    a: float = 2.0
    c: float = 0.1
    A: float | None = None  # defaults to max_iter / 10
    alpha: float = 0.602
    gamma: float = 0.101
    seed: int = 0

    def __post_init__(self):
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidArgumentError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not (self.a > 0 and self.c > 0):
            raise InvalidArgumentError("gains a and c must be positive")
        if self.A is not None and self.A < 0:
            raise InvalidArgumentError("stability offset A must be non-negative")
        if not 0 < self.gamma < self.alpha < 1:
            raise InvalidArgumentError("need 0 < gamma < alpha < 1")

    @property
    def stability(self) -> float:
        return self.max_iter / 10 if self.A is None else float(self.A)

    def step_gain(self, k) -> np.ndarray | float:
        """a_k = a / (A + k + 1)**alpha."""
        return self.a / (self.stability + np.asarray(k) + 1) ** self.alpha

    def perturbation_gain(self, k) -> np.ndarray | float:
        """c_k = c / (k + 1)**gamma."""
        return self.c / (np.asarray(k) + 1) ** self.gamma


@dataclass
class OptResult:
    best_params: np.ndarray
    best_loss: float
    trace: list[tuple[int, float]] = field(default_factory=list)
    n_evals: int = 0

    @property
    def losses(self) -> np.ndarray:
        return np.array([loss for _, loss in self.trace])


def _checked(loss_fn: LossFn, theta: np.ndarray, iteration: int) -> float:
    value = float(loss_fn(theta))
    if not math.isfinite(value):
        raise DivergenceError(iteration, value)
    return value


def bernoulli_perturbation(rng: np.random.Generator, size: int) -> np.ndarray:
    """Independent symmetric +/-1 entries."""
    return 2.0 * rng.integers(0, 2, size=size) - 1.0


def spsa_gradient(loss_fn: LossFn, theta: np.ndarray, ck: float, delta: np.ndarray,
                  iteration: int = 0) -> np.ndarray:
    """Two-sided simultaneous-perturbation gradient estimate along ``delta``."""
    plus = _checked(loss_fn, theta + ck * delta, iteration)
    minus = _checked(loss_fn, theta - ck * delta, iteration)
    return (plus - minus) / (2.0 * ck * delta)


def spsa_minimize(loss_fn: LossFn, theta0, config: SpsaConfig = SpsaConfig()) -> OptResult:
    """Minimize ``loss_fn`` with SPSA.

    Each iteration spends two probe evaluations on the gradient estimate and
    one on the nominal loss that goes into the trace. After the last update
    the final iterate is evaluated too, so the trace has ``max_iter + 1``
    entries. The best nominal iterate is returned.
    """
    theta = np.array(theta0, dtype=float)
    if theta.ndim != 1 or not np.all(np.isfinite(theta)):
        raise InvalidArgumentError("theta0 must be a finite 1-D vector")
    rng = np.random.default_rng(config.seed)

    trace: list[tuple[int, float]] = []
    best_theta, best_loss = theta.copy(), math.inf
    n_evals = 0
    for k in range(config.max_iter + 1):
        loss = _checked(loss_fn, theta, k)
        n_evals += 1
        trace.append((k, loss))
        if loss < best_loss:
            best_theta, best_loss = theta.copy(), loss
        if k == config.max_iter:
            break
        delta = bernoulli_perturbation(rng, theta.size)
        ghat = spsa_gradient(loss_fn, theta, float(config.perturbation_gain(k)), delta, k)
        n_evals += 2
        theta = theta - config.step_gain(k) * ghat
    return OptResult(best_theta, best_loss, trace, n_evals)


def simplex_minimize(loss_fn: LossFn, theta0, max_iter: int = 80, seed: int = 0,
                     step: float = 0.5) -> OptResult:
    """Nelder-Mead simplex search.

    The initial simplex is ``theta0`` plus one vertex per coordinate at
    distance ``step`` (jittered by up to 10% from ``seed``). Standard
    coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
    The trace holds the best vertex loss after each iteration.
    """
    x0 = np.array(theta0, dtype=float)
    if x0.ndim != 1 or not np.all(np.isfinite(x0)):
        raise InvalidArgumentError("theta0 must be a finite 1-D vector")
    if int(max_iter) != max_iter or max_iter < 0:
        raise InvalidArgumentError(f"max_iter must be a non-negative integer, got {max_iter}")

    f0 = _checked(loss_fn, x0, 0)
    trace = [(0, f0)]
    if max_iter == 0:
        return OptResult(x0, f0, trace, 1)

    n = x0.size
    rng = np.random.default_rng(seed)
    jitter = 1.0 + 0.1 * rng.uniform(-1.0, 1.0, size=n)
    simplex = np.vstack([x0, x0 + np.diag(step * jitter)])
    fvals = np.empty(n + 1)
    fvals[0] = f0
    for i in range(1, n + 1):
        fvals[i] = _checked(loss_fn, simplex[i], 0)
    n_evals = n + 1

    for it in range(1, max_iter + 1):
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]

        xr = centroid + (centroid - worst)
        fr = _checked(loss_fn, xr, it)
        n_evals += 1
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = _checked(loss_fn, xe, it)
            n_evals += 1
            simplex[-1], fvals[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (worst - centroid)
            fc = _checked(loss_fn, xc, it)
            n_evals += 1
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                for i in range(1, n + 1):
                    fvals[i] = _checked(loss_fn, simplex[i], it)
                n_evals += n
        trace.append((it, float(fvals.min())))

    best = int(np.argmin(fvals))
    return OptResult(simplex[best].copy(), float(fvals[best]), trace, n_evals)
