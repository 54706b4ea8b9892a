"""Brute-force reference computations used by the test suite.

Nothing here is called from the production solvers or the CLI: these are slow,
independent re-derivations (grid searches, golden-section maximizers, a tiny
full-gradient solver) that the fast closed forms are checked against.
"""

from __future__ import annotations

import math

import numpy as np

from . import losses, regularizers
from .data import DualState, LabeledDataset, ProblemSpec
from .diagnostics import primal_objective
from .sdca import dual_objective

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def dual_step_objective(loss: str, alpha_i: float, margin: float, normsq: float,
                        lam_n: float, d_alpha: float) -> float:
    """Ascent value of moving one coordinate by d_alpha (scalar parameterization)."""
    a = alpha_i + d_alpha
    kind = losses.canonical_kind(loss)
    if kind == losses.HINGE:
        if a < 0.0 or a > 1.0:
            return -math.inf
        head = a
    else:
        if a < 0.0:
            return -math.inf
        head = a - 0.25 * a * a
    return head - margin * d_alpha - 0.5 * d_alpha * d_alpha * normsq / lam_n


def _golden_max(fn, lo: float, hi: float, tol: float):
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _parabolic_polish(fn, x: float, lo: float, hi: float, h: float):
    """One fit-a-parabola step around x using well-separated probes.

    Value comparisons go blind once the objective is flat to machine
    precision, but a three-point quadratic fit still recovers the vertex
    (exactly so when the objective is itself quadratic, as here).
    """
    half = min(h, 0.5 * (hi - lo))
    if half <= 0.0:
        return x
    p1 = max(lo, x - half)
    p3 = min(hi, x + half)
    if p3 - p1 < half:  # cramped against a boundary; re-center the stencil
        if p1 <= lo:
            p3 = min(hi, p1 + 2.0 * half)
        else:
            p1 = max(lo, p3 - 2.0 * half)
    p2 = 0.5 * (p1 + p3)
    if not p1 < p2 < p3:
        return x
    f1, f2, f3 = fn(p1), fn(p2), fn(p3)
    d1, d3 = p2 - p1, p2 - p3
    num = d1 * d1 * (f2 - f3) - d3 * d3 * (f2 - f1)
    den = d1 * (f2 - f3) - d3 * (f2 - f1)
    if den == 0.0 or not math.isfinite(num / den):
        return x
    cand = max(lo, min(hi, p2 - 0.5 * num / den))
    slack = 64.0 * np.finfo(float).eps * max(1.0, abs(f2))
    return cand if fn(cand) >= max(fn(x), f2) - slack else x


def maximize_1d_dual(loss: str, alpha_i: float, margin: float, normsq: float,
                     lam_n: float, grid: int = 1001, tol: float = 1e-12):
    """Numerically maximize the one-coordinate ascent objective.

    Returns (d_alpha, objective).  Coarse grid over the feasible interval,
    then golden-section refinement around the best cell.
    """
    kind = losses.canonical_kind(loss)
    lo = -alpha_i
    if kind == losses.HINGE:
        hi = 1.0 - alpha_i
    else:
        vertex = (1.0 - margin - 0.5 * alpha_i) / (0.5 + normsq / lam_n)
        hi = max(1.0, 2.0 * abs(vertex) + 1.0)
    if hi <= lo:
        return lo, dual_step_objective(loss, alpha_i, margin, normsq, lam_n, lo)
    xs = np.linspace(lo, hi, grid)
    vals = [dual_step_objective(loss, alpha_i, margin, normsq, lam_n, x) for x in xs]
    best = int(np.argmax(vals))
    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, grid - 1)]
    fn = lambda x: dual_step_objective(loss, alpha_i, margin, normsq, lam_n, x)  # noqa: E731
    x, _ = _golden_max(fn, a, b, tol)
    width = hi - lo
    for h in (0.25 * width, 1e-2 * width, 1e-4 * width):
        x = _parabolic_polish(fn, x, lo, hi, h)
    return x, fn(x)


def maximize_dual_step(state: DualState, dataset: LabeledDataset,
                       problem: ProblemSpec, i: int, tol: float = 1e-12):
    """Same maximizer, reading margin/norm data from a live solver state."""
    lo, hi = dataset.indptr[i], dataset.indptr[i + 1]
    margin = dataset.labels[i] * float(
        np.dot(state.w[dataset.indices[lo:hi]], dataset.values[lo:hi])
    )
    return maximize_1d_dual(
        problem.loss, float(state.alpha[i]), margin, float(dataset.norms_sq[i]),
        problem.lam * dataset.n, tol=tol,
    )


def numeric_conjugate(fn, v: float, lo: float, hi: float,
                      grid: int = 2001, passes: int = 4) -> float:
    """sup_w (v*w - fn(w)) over [lo, hi] by repeated grid refinement."""
    a, b = lo, hi
    best_x = a
    for _ in range(passes):
        xs = np.linspace(a, b, grid)
        vals = v * xs - np.array([fn(x) for x in xs])
        k = int(np.argmax(vals))
        best_x = xs[k]
        step = (b - a) / (grid - 1)
        a, b = best_x - step, best_x + step
    return v * best_x - fn(best_x)


def _dual_certificate(w: np.ndarray, dataset: LabeledDataset, problem: ProblemSpec):
    """Feasible dual point induced by w: alpha_i = 2 * max(0, 1 - m_i)."""
    margins = dataset.margins(w)
    alpha = 2.0 * np.maximum(0.0, 1.0 - margins)
    coef = alpha * dataset.labels / (problem.lam * dataset.n)
    v = np.asarray(dataset.matrix.T @ coef).ravel()
    state = DualState(alpha, v, regularizers.conjugate_gradient(
        problem.regularizer, v, problem.reg_ratio), 0)
    return dual_objective(state, dataset, problem)


def _split_form(problem: ProblemSpec) -> ProblemSpec:
    if not problem.composite:
        return problem
    return ProblemSpec(loss=problem.loss, regularizer="l2", lam=problem.lam)


def solve_exact_tiny(dataset: LabeledDataset, problem: ProblemSpec,
                     tol: float = 1e-12, max_iter: int = 500_000):
    """High-accuracy reference optimum for small instances.

    Smooth losses: accelerated full-gradient proximal descent with a duality
    certificate; hinge: deterministic cyclic exact coordinate maximization of
    the dual.  Returns (w, primal value, certified gap).  Raises if the gap
    target is not reached within the iteration cap.
    """
    prob = _split_form(problem)
    kind = losses.canonical_kind(prob.loss)
    n, d = dataset.n, dataset.dim
    if kind == losses.SQUARED_HINGE:
        lipschitz = 2.0 * dataset.norms_sq.sum() / n
        if lipschitz == 0.0:
            w = np.zeros(d)
            return w, primal_objective(w, dataset, prob), 0.0
        eta = 1.0 / lipschitz
        w = np.zeros(d)
        z = w.copy()
        t_momentum = 1.0
        last = primal_objective(w, dataset, prob)
        for it in range(max_iter):
            margins = dataset.margins(z)
            coefs = losses.subgradient_coefs(prob.loss, margins, dataset.labels)
            grad = np.asarray(dataset.matrix.T @ (coefs / n)).ravel()
            w_new = regularizers.prox(prob.regularizer, eta * prob.lam,
                                      z - eta * grad, prob.reg_ratio)
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_momentum * t_momentum))
            z = w_new + (t_momentum - 1.0) / t_next * (w_new - w)
            w, t_momentum = w_new, t_next
            if it % 20 == 0:
                p = primal_objective(w, dataset, prob)
                if p > last:  # momentum overshoot: restart
                    z = w.copy()
                    t_momentum = 1.0
                last = p
                gap = p - _dual_certificate(w, dataset, prob)
                if gap <= tol:
                    return w, p, gap
        raise RuntimeError(f"no convergence to gap <= {tol} within {max_iter} iterations")

    # hinge: exact coordinate maximization swept cyclically
    from .sdca import sdca_step

    state = DualState.zeros(n, d)
    for _ in range(max_iter // n + 1):
        for i in range(n):
            sdca_step(state, dataset, prob, i, option="I")
        p = primal_objective(state.w, dataset, prob)
        gap = p - dual_objective(state, dataset, prob)
        if gap <= tol:
            return state.w.copy(), p, gap
    raise RuntimeError(f"no convergence to gap <= {tol} within {max_iter} iterations")


__all__ = [
    "dual_step_objective",
    "maximize_1d_dual",
    "maximize_dual_step",
    "numeric_conjugate",
    "solve_exact_tiny",
]
