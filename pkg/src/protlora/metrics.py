"""Evaluation metrics (plain numpy, no gradients)."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


class DegenerateMetricError(ValueError):
    """The metric is undefined for this input (no positives, zero variance, ...)."""


F1_THRESHOLDS = np.arange(101) / 100.0


def f1_at(p: np.ndarray, y: np.ndarray, t: float) -> float:
    pred = p >= t
    truth = y.astype(bool)
    tp = int(np.sum(pred & truth))
    fp = int(np.sum(pred & ~truth))
    fn = int(np.sum(~pred & truth))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def f1_max(p, y, thresholds: np.ndarray = F1_THRESHOLDS) -> float:
    """Best micro-pooled F1 over the threshold grid (predict 1 iff p >= t)."""
    p = np.asarray(p, dtype=np.float64)
    y = np.asarray(y)
    if p.shape != y.shape:
        raise ValueError(f"f1_max: predictions {p.shape} vs labels {y.shape}")
    if not y.astype(bool).any():
        raise DegenerateMetricError("f1_max undefined: no positive labels")
    if p.min() < 0.0 or p.max() > 1.0:
        raise ValueError("f1_max expects probabilities in [0, 1]")
    truth = y.astype(bool).reshape(-1)
    flat = p.reshape(-1)
    pred = flat[None, :] >= np.asarray(thresholds)[:, None]
    tp = (pred & truth).sum(axis=1)
    fp = (pred & ~truth).sum(axis=1)
    fn = (~pred & truth).sum(axis=1)
    f1 = 2 * tp / (2 * tp + fp + fn)
    return float(f1.max())


def accuracy(pred, y, valid: np.ndarray | None = None) -> float:
    pred = np.asarray(pred)
    y = np.asarray(y)
    if pred.shape != y.shape:
        raise ValueError(f"accuracy: predictions {pred.shape} vs labels {y.shape}")
    if valid is not None:
        pred, y = pred[valid], y[valid]
    if y.size == 0:
        raise ValueError("accuracy of an empty set")
    return float(np.mean(pred == y))


def spearman_rho(p, y) -> float:
    """Pearson correlation of average ranks (ties share their mean rank)."""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if p.size != y.size:
        raise ValueError(f"spearman_rho: {p.size} predictions vs {y.size} labels")
    if p.size < 2:
        raise ValueError("spearman_rho needs at least two samples")
    rp = rankdata(p) - (p.size + 1) / 2.0
    ry = rankdata(y) - (y.size + 1) / 2.0
    denom = np.sqrt(np.sum(rp * rp) * np.sum(ry * ry))
    if denom == 0.0:
        raise DegenerateMetricError("spearman_rho undefined: a ranking has zero variance")
    return float(np.sum(rp * ry) / denom)


def r_squared(p, y) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if p.size != y.size:
        raise ValueError(f"r_squared: {p.size} predictions vs {y.size} labels")
    if y.size < 2:
        raise ValueError("r_squared needs at least two samples")
    ss_tot = np.sum((y - y.mean()) ** 2)
    if ss_tot == 0.0:
        raise DegenerateMetricError("r_squared undefined: constant targets")
    return float(1.0 - np.sum((y - p) ** 2) / ss_tot)


METRICS = {"f1max": f1_max, "accuracy": accuracy, "spearman": spearman_rho, "r2": r_squared}
