"""Training losses on :class:`Tensor` inputs (differentiable)."""

from __future__ import annotations

import numpy as np

from .numerics import ShapeError, Tensor, as_tensor, clip, log, log_softmax, tsum

BCE_EPS = 1e-7


def ml_bce(p, y) -> Tensor:
    """Multi-label binary cross entropy, averaged over classes then samples.

    ``p`` are probabilities, clamped to [eps, 1 - eps] before the logs.
    """
    p = as_tensor(p)
    y = np.asarray(y, dtype=np.float64)
    if p.shape != y.shape:
        raise ShapeError(f"ml_bce: predictions {p.shape} vs targets {y.shape}")
    p = clip(p, BCE_EPS, 1.0 - BCE_EPS)
    per_class = log(p) * y + log(1.0 - p) * (1.0 - y)
    return -per_class.mean()


def cross_entropy(logits, y, valid: np.ndarray | None = None) -> Tensor:
    """Mean of ``-log softmax(logits)[y]`` over (valid) rows.

    ``logits`` is (..., C) and ``y`` the matching integer array (...).
    """
    logits = as_tensor(logits)
    y = np.asarray(y)
    n_classes = logits.shape[-1]
    if n_classes < 2:
        raise ValueError("cross_entropy needs at least two classes")
    if logits.shape[:-1] != y.shape:
        raise ShapeError(f"cross_entropy: logits {logits.shape} vs targets {y.shape}")
    if valid is None:
        valid = np.ones(y.shape, dtype=bool)
    yv = y[valid]
    if yv.size == 0:
        raise ValueError("cross_entropy got no valid targets")
    if yv.min() < 0 or yv.max() >= n_classes:
        raise IndexError(f"class index out of range [0, {n_classes})")
    onehot = np.zeros(logits.shape)
    idx = np.nonzero(valid)
    onehot[(*idx, y[idx])] = 1.0
    return -tsum(log_softmax(logits, axis=-1) * onehot) * (1.0 / yv.size)


def mse(p, y) -> Tensor:
    p = as_tensor(p)
    y = np.asarray(y, dtype=np.float64)
    if p.shape != y.shape:
        raise ShapeError(f"mse: predictions {p.shape} vs targets {y.shape}")
    if y.size == 0:
        raise ValueError("mse needs at least one sample")
    diff = p - y
    return (diff * diff).mean()
