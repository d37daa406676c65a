"""Binary logistic regression trained by full-batch gradient descent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray
    bias: float
    lr: float = 0.1
    iters: int = 1000
    l2: float = 0.0

    def decision_function(self, X) -> np.ndarray:
        X = _check_X(X, self.weights.size)
        return X @ self.weights + self.bias


def _check_X(X, dim: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidArgumentError(f"X must be 2-D, got shape {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise InvalidArgumentError(f"model expects {dim} features, got {X.shape[1]}")
    return X


def _check_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y)
    if y.shape != (n,) or not np.isin(y, (0, 1)).all():
        raise InvalidArgumentError("y must hold one 0/1 label per row")
    if np.unique(y).size < 2:
        raise InvalidArgumentError("training data must contain both classes")
    return y.astype(float)


def _sigmoid(t: np.ndarray) -> np.ndarray:
    # split by sign so exp never overflows
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float = 0.0) -> float:
    """Mean binary cross-entropy plus ``l2/2 * ||w||^2``."""
    t = X @ w + b
    # log(1 + e^t) - y t, computed stably
    ce = np.logaddexp(0.0, t) - y * t
    return float(ce.mean() + 0.5 * l2 * w @ w)


def gradient(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
             l2: float = 0.0) -> tuple[np.ndarray, float]:
    """Analytic gradient of :func:`loss` with respect to ``(w, b)``."""
    r = _sigmoid(X @ w + b) - y
    return X.T @ r / X.shape[0] + l2 * w, float(r.mean())


def train_logreg(X, y, lr: float = 0.1, iters: int = 1000, l2: float = 0.0) -> LogRegModel:
    X = _check_X(X)
    if X.shape[0] < 2:
        raise InvalidArgumentError("need at least two rows")
    y = _check_labels(y, X.shape[0])
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(int(iters)):
        gw, gb = gradient(w, b, X, y, l2)
        w = w - lr * gw
        b = b - lr * gb
    return LogRegModel(w, b, lr, int(iters), l2)


def predict_proba(model: LogRegModel, X) -> np.ndarray:
    return _sigmoid(model.decision_function(X))


def predict_logreg(model: LogRegModel, X) -> np.ndarray:
    """Class 1 when the attack probability is at least one half."""
    return (predict_proba(model, X) >= 0.5).astype(int)
