"""Margin losses: values, subgradients, convex conjugates, per-example constants.

Two families are first class: the hinge max(0, 1-m) and the squared hinge
max(0, 1-m)^2, where m = y * <w, x> is the margin.  Both conjugates are
parameterized through the scalar alpha of the dual vector alpha * y * x:
hinge has conjugate -alpha on alpha in [0, 1]; squared hinge has
-alpha + alpha^2/4 on alpha >= 0.

The subgradient at the hinge kink (m == 1) is taken to be 0, which keeps the
map deterministic and matches the sign-of-positive-part convention used by
the solvers.
"""

from __future__ import annotations

import numpy as np

from .data import LabeledDataset, ProblemSpec, SparseVector

HINGE = "hinge"
SQUARED_HINGE = "squared_hinge"

_ALIASES = {"hinge": HINGE, "sqhinge": SQUARED_HINGE, "squared_hinge": SQUARED_HINGE}


def canonical_kind(kind: str) -> str:
    try:
        return _ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown loss kind {kind!r}") from None


def loss_value(kind: str, margin: float) -> float:
    kind = canonical_kind(kind)
    gap = max(0.0, 1.0 - margin)
    return gap if kind == HINGE else gap * gap


def loss_values(kind: str, margins: np.ndarray) -> np.ndarray:
    kind = canonical_kind(kind)
    gap = np.maximum(0.0, 1.0 - margins)
    return gap if kind == HINGE else gap * gap


def subgradient_coef(kind: str, margin: float, label: float) -> float:
    """Scalar c with dphi(w) = c * x, for the pure (regularizer-free) loss."""
    kind = canonical_kind(kind)
    if margin >= 1.0:
        return 0.0
    if kind == HINGE:
        return -label
    return -2.0 * (1.0 - margin) * label


def subgradient_coefs(kind: str, margins: np.ndarray, labels: np.ndarray) -> np.ndarray:
    kind = canonical_kind(kind)
    active = margins < 1.0
    if kind == HINGE:
        return np.where(active, -labels, 0.0)
    return np.where(active, -2.0 * (1.0 - margins) * labels, 0.0)


def loss_subgradient(kind: str, example, w: np.ndarray) -> SparseVector:
    """Subgradient of the pure loss at w, as a sparse vector c * x."""
    from .data import dot as sparse_dot

    x = example.features
    m = example.label * sparse_dot(x, w)
    c = subgradient_coef(kind, m, example.label)
    if c == 0.0 or x.nnz == 0:
        return SparseVector(np.zeros(0, dtype=np.int64), np.zeros(0), x.dim)
    return SparseVector(x.indices.copy(), c * x.values, x.dim)


def conjugate_value(kind: str, alpha: float) -> float:
    """phi*(-theta) for theta = alpha*y*x, enforcing the dual domain."""
    kind = canonical_kind(kind)
    if kind == HINGE:
        if not (-1e-12 <= alpha <= 1.0 + 1e-12):
            raise ValueError(f"hinge dual coordinate {alpha} outside [0, 1]")
        return -alpha
    if alpha < -1e-12:
        raise ValueError(f"squared-hinge dual coordinate {alpha} must be nonnegative")
    return -alpha + 0.25 * alpha * alpha


def conjugate_values(kind: str, alpha: np.ndarray) -> np.ndarray:
    kind = canonical_kind(kind)
    if kind == HINGE:
        if np.any(alpha < -1e-12) or np.any(alpha > 1.0 + 1e-12):
            raise ValueError("hinge dual coordinates must lie in [0, 1]")
        return -alpha
    if np.any(alpha < -1e-12):
        raise ValueError("squared-hinge dual coordinates must be nonnegative")
    return -alpha + 0.25 * alpha * alpha


def check_dual_feasible(kind: str, alpha: np.ndarray) -> None:
    conjugate_values(kind, alpha)


def per_example_constants(kind: str, dataset: LabeledDataset):
    """(L, gamma) vectors: gradient-norm bounds and curvature per example.

    Hinge: L_i = ||x_i||, gamma undefined (returned as None).  Squared hinge:
    1/gamma_i = 2||x_i||^2 (gamma_i = +inf on empty rows), L undefined
    without an iterate-radius bound (returned as None).
    """
    kind = canonical_kind(kind)
    if kind == HINGE:
        return dataset.norms.copy(), None
    with np.errstate(divide="ignore"):
        gamma = np.where(dataset.norms_sq > 0, 1.0 / (2.0 * dataset.norms_sq), np.inf)
    return None, gamma


def sgd_gradient_bounds(problem: ProblemSpec, dataset: LabeledDataset) -> np.ndarray:
    """Per-example bounds G_i >= ||grad phi_i(w)|| valid on the projection ball.

    Composite hinge:         ||x_i|| + sqrt(lam)
    Composite squared hinge: 2(1 + ||x_i||/sqrt(lam))||x_i|| + sqrt(lam)
    Split l1 squared hinge:  2(1 + ||x_i||/lam)||x_i||   (radius 1/lam)
    Split hinge:             ||x_i||
    """
    kind = canonical_kind(problem.loss)
    norms = dataset.norms
    lam = problem.lam
    if problem.composite:
        root = np.sqrt(lam)
        if kind == HINGE:
            return norms + root
        return 2.0 * (1.0 + norms / root) * norms + root
    if kind == HINGE:
        return norms.copy()
    radius = problem.radius if problem.radius is not None else 1.0 / lam
    return 2.0 * (1.0 + norms * radius) * norms


def sgd_smoothness_constants(problem: ProblemSpec, dataset: LabeledDataset) -> np.ndarray:
    """gamma_i of the sampled term phi_i for the curvature-based distribution."""
    kind = canonical_kind(problem.loss)
    if kind != SQUARED_HINGE:
        raise ValueError("smoothness-based sampling requires a smooth loss")
    curv = 2.0 * dataset.norms_sq + (problem.lam if problem.composite else 0.0)
    with np.errstate(divide="ignore"):
        return np.where(curv > 0, 1.0 / curv, np.inf)


__all__ = [
    "HINGE",
    "SQUARED_HINGE",
    "canonical_kind",
    "loss_value",
    "loss_values",
    "subgradient_coef",
    "subgradient_coefs",
    "loss_subgradient",
    "conjugate_value",
    "conjugate_values",
    "check_dual_feasible",
    "per_example_constants",
    "sgd_gradient_bounds",
    "sgd_smoothness_constants",
]
