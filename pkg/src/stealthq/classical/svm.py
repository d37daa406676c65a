"""
RBF-kernel support vector machine trained with SMO.

The solver works on the standard dual

    min_a  1/2 a^T Q a - sum(a),   Q_ij = y_i y_j k(x_i, x_j)
    s.t.   0 <= a_i <= C,  sum(y_i a_i) = 0

choosing the working pair by maximal violation for ``i`` and second-order
gain for ``j`` (Fan, Chen and Lin, 2005). It stops when the KKT violation
gap drops below ``tol``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError

_TAU = 1e-12


@dataclass(frozen=True)
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i, y in {-1, +1}
    bias: float
    gamma: float
    C: float
    # diagnostics from training
    alpha: np.ndarray | None = None
    kkt_gap: float = np.nan
    n_iter: int = 0

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.support_vectors.shape[1]:
            raise InvalidArgumentError(
                f"model expects {self.support_vectors.shape[1]} features, got shape {X.shape}"
            )
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.dual_coef + self.bias


def rbf_kernel(A, B, gamma: float) -> np.ndarray:
    """``exp(-gamma * ||a - b||^2)`` for every row pair."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def scale_gamma(X) -> float:
    """``1 / (n_features * Var(X))``, the usual "scale" heuristic."""
    X = np.asarray(X, dtype=float)
    var = X.var()
    return 1.0 / (X.shape[1] * var) if var > 0 else 1.0


def dual_objective(alpha, y_pm, K) -> float:
    """Dual objective to maximize: ``sum(a) - 1/2 (a*y)^T K (a*y)``."""
    ay = np.asarray(alpha) * np.asarray(y_pm)
    return float(np.sum(alpha) - 0.5 * ay @ K @ ay)


def _violation_sets(alpha, y, C):
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
    return up, low


def kkt_gap(alpha, y_pm, K, C) -> float:
    """``max_{I_up} -y G - min_{I_low} -y G``; zero at an exact optimum."""
    y = np.asarray(y_pm, dtype=float)
    G = y * (K @ (alpha * y)) - 1.0
    up, low = _violation_sets(alpha, y, C)
    score = -y * G
    return float(score[up].max(initial=-np.inf) - score[low].min(initial=np.inf))


def train_svm_smo(X, y, C: float = 1.0, gamma="scale", tol: float = 1e-3,
                  max_passes: int = 100) -> SvmModel:
    """Fit a binary RBF SVM. ``y`` holds 0/1 labels.

    ``max_passes`` bounds the work at ``max_passes * n`` pair updates.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(y)
    if X.ndim != 2 or labels.shape != (X.shape[0],):
        raise InvalidArgumentError("X must be 2-D with one label per row")
    if not np.isin(labels, (0, 1)).all():
        raise InvalidArgumentError("labels must be 0 or 1")
    if np.unique(labels).size < 2:
        raise InvalidArgumentError("training data must contain both classes")
    if not C > 0:
        raise InvalidArgumentError("C must be positive")
    g = scale_gamma(X) if gamma == "scale" else float(gamma)
    if not g > 0:
        raise InvalidArgumentError("gamma must be positive")

    n = X.shape[0]
    ypm = np.where(labels == 1, 1.0, -1.0)
    K = rbf_kernel(X, X, g)
    diag = np.diag(K).copy()
    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient of the minimization objective

    n_iter = 0
    max_iter = int(max_passes) * max(n, 1)
    gap = np.inf
    while n_iter < max_iter:
        up, low = _violation_sets(alpha, ypm, C)
        score = -ypm * G
        i_cand = np.flatnonzero(up)
        i = i_cand[np.argmax(score[i_cand])]
        m = score[i]
        gap = m - score[low].min()
        if gap < tol:
            break

        j_cand = np.flatnonzero(low & (score < m))
        b = m - score[j_cand]
        a = np.maximum(diag[i] + diag[j_cand] - 2.0 * K[i, j_cand], _TAU)
        j = j_cand[np.argmin(-(b * b) / a)]

        eta = max(diag[i] + diag[j] - 2.0 * K[i, j], _TAU)
        t = (score[i] - score[j]) / eta
        t = min(t,
                C - alpha[i] if ypm[i] > 0 else alpha[i],
                alpha[j] if ypm[j] > 0 else C - alpha[j])
        alpha[i] += ypm[i] * t
        alpha[j] -= ypm[j] * t
        # snap round-off onto the box
        for k in (i, j):
            if alpha[k] < 1e-14 * C:
                alpha[k] = 0.0
            elif alpha[k] > C * (1 - 1e-14):
                alpha[k] = C
        G += ypm * (K[:, i] - K[:, j]) * t
        n_iter += 1
    else:
        up, low = _violation_sets(alpha, ypm, C)
        score = -ypm * G
        gap = score[up].max(initial=-np.inf) - score[low].min(initial=np.inf)

    rho = _rho(alpha, ypm, G, C)
    sv = alpha > 0
    return SvmModel(
        support_vectors=X[sv].copy(),
        dual_coef=(alpha * ypm)[sv],
        bias=-rho,
        gamma=g,
        C=float(C),
        alpha=alpha,
        kkt_gap=float(gap),
        n_iter=n_iter,
    )


def _rho(alpha, y, G, C) -> float:
    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yG[free].mean())
    at_upper = alpha >= C
    at_lower = alpha <= 0
    # bounds on rho from the variables stuck at 0 or C
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    ub = yG[ub_mask].min(initial=np.inf)
    lb = yG[lb_mask].max(initial=-np.inf)
    return float((ub + lb) / 2)


def predict_svm(model: SvmModel, X) -> np.ndarray:
    """0/1 labels; a decision value of exactly zero maps to class 1."""
    return (model.decision_function(X) >= 0).astype(int)
