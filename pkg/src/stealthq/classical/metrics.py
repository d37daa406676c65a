"""Confusion-matrix metrics and windowed aggregation."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import InvalidArgumentError


@dataclass(frozen=True)
class MetricsReport:
    """Binary confusion counts with attack (1) as the positive class."""

    tn: int
    fp: int
    fn: int
    tp: int
    accuracy: float
    f1: float

    @property
    def n(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    @property
    def confusion(self) -> list[list[int]]:
        """``[[TN, FP], [FN, TP]]``."""
        return [[self.tn, self.fp], [self.fn, self.tp]]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["confusion"] = self.confusion
        return d


def accuracy_from_counts(tn: int, fp: int, fn: int, tp: int) -> float:
    return (tp + tn) / (tp + tn + fp + fn)


def f1_from_counts(tn: int, fp: int, fn: int, tp: int) -> float:
    # Zero when there are no positives predicted or present.
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def compute_metrics(y_true, y_pred) -> MetricsReport:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise InvalidArgumentError(
            f"label arrays must be 1-D and equal length, got {y_true.shape} and {y_pred.shape}"
        )
    if y_true.size == 0:
        raise InvalidArgumentError("cannot score an empty evaluation set")
    for arr in (y_true, y_pred):
        if not np.isin(arr, (0, 1)).all():
            raise InvalidArgumentError("labels must be 0 or 1")
    t, p = y_true == 1, y_pred == 1
    tp = int(np.sum(t & p))
    tn = int(np.sum(~t & ~p))
    fp = int(np.sum(~t & p))
    fn = int(np.sum(t & ~p))
    return MetricsReport(tn, fp, fn, tp,
                         accuracy_from_counts(tn, fp, fn, tp),
                         f1_from_counts(tn, fp, fn, tp))


def windowed_mean_abs(series, win: int, step: int) -> np.ndarray:
    """Mean of ``|x|`` over each full window starting at 0, step, 2*step, ..."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError("series must be 1-D")
    if int(win) != win or win < 1 or int(step) != step or step < 1:
        raise InvalidArgumentError("win and step must be positive integers")
    if win > x.size:
        raise InvalidArgumentError(f"window {win} longer than series ({x.size})")
    windows = np.lib.stride_tricks.sliding_window_view(np.abs(x), win)[::step]
    return windows.mean(axis=1)
