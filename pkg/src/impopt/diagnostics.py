"""Objective values, gradient-variance estimates, error rates, bound ratios."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import losses, regularizers
from .data import LabeledDataset, ProblemSpec
from .sampling import SamplingDistribution


@dataclass
class TraceRecord:
    """Per-checkpoint metrics; ``epoch`` is steps/n and may be fractional."""

    epoch: float
    primal: float
    dual: float | None
    gap: float | None
    variance: float
    test_error: float | None
    wall_time: float
    primal_avg: float | None = None

    def __post_init__(self):
        if self.gap is not None and self.gap < -1e-10:
            raise ValueError(f"negative duality gap {self.gap:.3e}")


def primal_objective(w: np.ndarray, dataset: LabeledDataset,
                     problem: ProblemSpec) -> float:
    """(1/n) sum_i phi_i(w) + lam * r(w), composite ridge folded in if set."""
    margins = dataset.margins(w)
    value = float(losses.loss_values(problem.loss, margins).mean())
    if problem.composite:
        return value + 0.5 * problem.lam * float(np.dot(w, w))
    return value + problem.lam * regularizers.regularizer_value(
        problem.regularizer, w, problem.reg_ratio
    )


def _gradient_pieces(w: np.ndarray, dataset: LabeledDataset, problem: ProblemSpec):
    """coefs c_i with grad phi_i = c_i x_i (+ lam*w if composite), plus scores."""
    scores = dataset.scores(w)
    coefs = losses.subgradient_coefs(problem.loss, dataset.labels * scores, dataset.labels)
    return coefs, scores


def mean_gradient(w: np.ndarray, dataset: LabeledDataset,
                  problem: ProblemSpec) -> np.ndarray:
    """grad of the sampled average: (1/n) sum_i grad phi_i(w)."""
    coefs, _ = _gradient_pieces(w, dataset, problem)
    grad = np.asarray(dataset.matrix.T @ (coefs / dataset.n)).ravel()
    if problem.composite:
        grad += problem.lam * w
    return grad


def gradient_norms(w: np.ndarray, dataset: LabeledDataset,
                   problem: ProblemSpec) -> np.ndarray:
    """||grad phi_i(w)|| for every example."""
    coefs, scores = _gradient_pieces(w, dataset, problem)
    if not problem.composite:
        return np.abs(coefs) * dataset.norms
    lam = problem.lam
    sq = (
        coefs * coefs * dataset.norms_sq
        + 2.0 * lam * coefs * scores
        + lam * lam * float(np.dot(w, w))
    )
    return np.sqrt(np.maximum(sq, 0.0))


def gradient_variance(w: np.ndarray, dataset: LabeledDataset, problem: ProblemSpec,
                      dist: SamplingDistribution) -> float:
    """Enumerated variance of the importance-weighted stochastic gradient.

    sum_i p_i || (n p_i)^{-1} grad phi_i(w) - grad f(w) ||^2, with each
    squared distance expanded through the sparse structure of x_i.
    """
    if np.any(dist.p <= 0):
        raise ValueError("sampling distribution must be strictly positive")
    n = dataset.n
    coefs, scores = _gradient_pieces(w, dataset, problem)
    full = mean_gradient(w, dataset, problem)
    weights = 1.0 / (n * dist.p)
    x_dot_full = np.asarray(dataset.matrix @ full).ravel()
    full_sq = float(np.dot(full, full))
    if problem.composite:
        lam = problem.lam
        w_sq = float(np.dot(w, w))
        w_dot_full = float(np.dot(w, full))
        grad_sq = coefs * coefs * dataset.norms_sq + 2.0 * lam * coefs * scores + lam * lam * w_sq
        cross = coefs * x_dot_full + lam * w_dot_full
    else:
        grad_sq = coefs * coefs * dataset.norms_sq
        cross = coefs * x_dot_full
    per_i = weights * weights * grad_sq - 2.0 * weights * cross + full_sq
    return float(np.dot(dist.p, per_i))


def gradient_variance_identity(w: np.ndarray, dataset: LabeledDataset,
                               problem: ProblemSpec, dist: SamplingDistribution) -> float:
    """Same quantity via E||z||^2 - ||E z||^2 = (1/n^2) sum_i ||grad phi_i||^2 / p_i - ||grad f||^2."""
    norms = gradient_norms(w, dataset, problem)
    full = mean_gradient(w, dataset, problem)
    n = dataset.n
    return float((norms * norms / dist.p).sum() / (n * n) - np.dot(full, full))


def test_error(w: np.ndarray, dataset: LabeledDataset) -> float:
    """Fraction of sign mismatches; a zero score counts as an error."""
    if dataset is None or dataset.n == 0:
        raise ValueError("test set must be nonempty")
    return float((dataset.margins(w) <= 0).mean())


def constant_ratio_sgd(bounds) -> float:
    """n * sum(G^2) / (sum G)^2 >= 1; the variance headroom of uniform sampling."""
    g = np.asarray(bounds, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("bounds must be a nonempty vector")
    if np.any(g < 0):
        raise ValueError("bounds must be nonnegative")
    top = g.max()
    if top <= 0:
        raise ValueError("all bounds are zero")
    u = g / top  # scale-invariant; keeps the equal-input case exactly 1.0
    total = u.sum()
    return float(g.size * np.dot(u, u) / (total * total))


def constant_ratio_sdca(gamma, lam: float, n: int, rnorm: float = 1.0) -> float:
    """(n lam g_min + R^2) / (n lam g_min + (R^2/n) sum g_min/g_i) >= 1."""
    g = np.asarray(gamma, dtype=np.float64)
    if g.ndim != 1 or g.size != n or n < 1:
        raise ValueError("gamma must be a vector of length n")
    if np.any(g <= 0) or not (lam > 0 and rnorm > 0):
        raise ValueError("inputs must be positive")
    gmin = g.min()
    base = n * lam * gmin
    r_sq = rnorm * rnorm
    # mean-of-ratios keeps the equal-input case exactly 1.0
    return float((base + r_sq) / (base + r_sq * (gmin / g).mean()))


__all__ = [
    "TraceRecord",
    "primal_objective",
    "mean_gradient",
    "gradient_norms",
    "gradient_variance",
    "gradient_variance_identity",
    "test_error",
    "constant_ratio_sgd",
    "constant_ratio_sdca",
]
