"""Regularizers: values, proximal maps, conjugates and conjugate gradients.

Supported kinds:

* ``none``              r(w) = 0
* ``l2``                r(w) = 0.5 ||w||^2
* ``l1``                r(w) = ||w||_1
* ``l2_plus_scaled_l1`` r(w) = 0.5 ||w||^2 + k ||w||_1  (k = ratio)

The last form is the 1-strongly-convex surrogate that makes l1 training
amenable to dual coordinate ascent; its conjugate gradient is the
soft-threshold map sign(v) * max(|v| - k, 0) and its conjugate value is
0.5 * sum_j max(|v_j| - k, 0)^2.
"""

from __future__ import annotations

import numpy as np

from .data import REG_KINDS


def _check_kind(kind: str) -> str:
    if kind not in REG_KINDS:
        raise ValueError(f"unknown regularizer {kind!r}")
    return kind


def soft_threshold(x: np.ndarray, thresh: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def regularizer_value(kind: str, w: np.ndarray, ratio: float = 0.0) -> float:
    _check_kind(kind)
    if kind == "none":
        return 0.0
    if kind == "l2":
        return 0.5 * float(np.dot(w, w))
    if kind == "l1":
        return float(np.abs(w).sum())
    return 0.5 * float(np.dot(w, w)) + ratio * float(np.abs(w).sum())


def prox(kind: str, scale: float, x: np.ndarray, ratio: float = 0.0) -> np.ndarray:
    """argmin_w scale * r(w) + 0.5 ||w - x||^2 (closed form for every kind)."""
    _check_kind(kind)
    if scale < 0:
        raise ValueError("prox scale must be nonnegative")
    if scale == 0.0 or kind == "none":
        return np.array(x, dtype=np.float64, copy=True)
    if kind == "l2":
        return x / (1.0 + scale)
    if kind == "l1":
        return soft_threshold(x, scale)
    # combined form: soft-threshold by scale*ratio, then shrink by 1/(1+scale)
    return soft_threshold(x, scale * ratio) / (1.0 + scale)


def conjugate_gradient(kind: str, v: np.ndarray, ratio: float = 0.0) -> np.ndarray:
    """w = grad r*(v); defined for the 1-strongly-convex kinds only."""
    _check_kind(kind)
    if kind == "l2":
        return np.array(v, dtype=np.float64, copy=True)
    if kind == "l2_plus_scaled_l1":
        return soft_threshold(v, ratio)
    raise ValueError(f"regularizer {kind!r} is not strongly convex; no conjugate gradient")


def conjugate_value(kind: str, v: np.ndarray, ratio: float = 0.0) -> float:
    """r*(v) = sup_w <v, w> - r(w), for the 1-strongly-convex kinds."""
    _check_kind(kind)
    if kind == "l2":
        return 0.5 * float(np.dot(v, v))
    if kind == "l2_plus_scaled_l1":
        clipped = np.maximum(np.abs(v) - ratio, 0.0)
        return 0.5 * float(np.dot(clipped, clipped))
    raise ValueError(f"regularizer {kind!r} has no tractable conjugate here")


__all__ = [
    "regularizer_value",
    "prox",
    "conjugate_gradient",
    "conjugate_value",
    "soft_threshold",
]
