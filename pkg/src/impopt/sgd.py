"""Importance-weighted proximal stochastic gradient descent.

Each step samples an example index i from the configured distribution p,
takes the subgradient of the sampled term scaled by the unbiasing weight
1/(n * p_i), applies the regularizer's proximal map, and optionally projects
back onto an l2 ball.  With uniform sampling the weight is 1 and the method
reduces to plain proximal SGD.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, diagnostics, losses, sampling
from .data import LabeledDataset, PrimalState, ProblemSpec


@dataclass(frozen=True)
class Schedule:
    """Step-size rule eta_t.

    * ``constant``:         eta_t = eta
    * ``inverse_lambda_t``:  eta_t = 1 / (lam * t)
    * ``inverse_strong``:    eta_t = 1 / (alpha + mu * t); requires
      alpha >= 1/gamma_f - mu when the global curvature gamma_f is supplied,
      which also guarantees eta_t <= gamma_f for all t.
    """

    kind: str
    eta: float = 0.0
    lam: float = 0.0
    alpha: float = 0.0
    mu: float = 0.0
    gamma_f: float | None = None

    def __post_init__(self):
        if self.kind == "constant":
            if not self.eta > 0:
                raise ValueError("constant schedule needs eta > 0")
        elif self.kind == "inverse_lambda_t":
            if not self.lam > 0:
                raise ValueError("inverse_lambda_t schedule needs lam > 0")
        elif self.kind == "inverse_strong":
            if not self.alpha + self.mu > 0:
                raise ValueError("inverse_strong schedule needs alpha + mu > 0")
            if self.gamma_f is not None:
                if not self.gamma_f > 0:
                    raise ValueError("gamma_f must be positive when supplied")
                if self.alpha < 1.0 / self.gamma_f - self.mu:
                    raise ValueError(
                        "inverse_strong schedule requires alpha >= 1/gamma_f - mu"
                    )
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    def tags(self):
        if self.kind == "constant":
            return _kernels.SCHED_CONSTANT, self.eta, 0.0
        if self.kind == "inverse_lambda_t":
            return _kernels.SCHED_INV_LAMBDA_T, self.lam, 0.0
        return _kernels.SCHED_INV_STRONG, self.alpha, self.mu


def step_size(schedule: Schedule, t: int) -> float:
    """eta_t for 1-based iteration t."""
    if t < 1:
        raise ValueError("iteration counter is 1-based")
    if schedule.kind == "constant":
        return schedule.eta
    if schedule.kind == "inverse_lambda_t":
        return 1.0 / (schedule.lam * t)
    eta = 1.0 / (schedule.alpha + schedule.mu * t)
    if schedule.gamma_f is not None and eta > schedule.gamma_f + 1e-15:
        raise AssertionError("step size exceeded the curvature bound gamma_f")
    return eta


@dataclass
class SgdConfig:
    schedule: Schedule
    epochs: int
    sampling: object = "uniform"  # kind name or a prebuilt SamplingDistribution
    seed: int = 0
    uniform_first_epoch: bool = True
    averaging: str = "none"  # none | full_average
    projection_radius: float | None = None  # overrides problem.radius when set

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.averaging not in ("none", "full_average"):
            raise ValueError("averaging must be 'none' or 'full_average'")


@dataclass
class SgdResult:
    state: PrimalState
    w_last: np.ndarray
    w_avg: np.ndarray
    trace: list = field(default_factory=list)
    distribution: sampling.SamplingDistribution | None = None
    steps: int = 0


def sgd_step(state: PrimalState, dataset: LabeledDataset, problem: ProblemSpec,
             i: int, p_i: float, eta: float) -> PrimalState:
    """One proximal step on example i sampled with probability p_i.

    Returns a new state; the input state is left untouched.
    """
    if p_i <= 0:
        raise ValueError("sampled probability must be positive (unbiasedness)")
    if eta <= 0:
        raise ValueError("step size must be positive")
    w = state.w.copy()
    lo, hi = dataset.indptr[i], dataset.indptr[i + 1]
    idx = dataset.indices[lo:hi]
    val = dataset.values[lo:hi]
    label = dataset.labels[i]
    m = label * float(np.dot(w[idx], val))
    coef = losses.subgradient_coef(problem.loss, m, label)
    scale = eta / (dataset.n * p_i)
    if problem.composite:
        w *= 1.0 - scale * problem.lam
        if coef != 0.0:
            w[idx] -= scale * coef * val
    else:
        if coef != 0.0:
            w[idx] -= scale * coef * val
        from .regularizers import prox
        w = prox(problem.regularizer, eta * problem.lam, w, problem.reg_ratio)
    radius = problem.radius
    if radius is not None:
        nrm = float(np.linalg.norm(w))
        if nrm > radius:
            w *= radius / nrm
    return PrimalState(w, state.t + 1)


def _resolve_distribution(spec, problem: ProblemSpec, dataset: LabeledDataset):
    """Returns (distribution or None, oracle_mode flag)."""
    if isinstance(spec, sampling.SamplingDistribution):
        if spec.n != dataset.n:
            raise ValueError(f"distribution over {spec.n} indices, dataset has {dataset.n}")
        return spec, False
    if spec in ("oracle", "gradient_norm"):
        return None, True
    if spec == "uniform":
        return sampling.build_uniform(dataset.n), False
    if spec == "lipschitz":
        return sampling.build_lipschitz(losses.sgd_gradient_bounds(problem, dataset)), False
    if spec == "smoothness":
        return sampling.build_smoothness(
            losses.sgd_smoothness_constants(problem, dataset)
        ), False
    raise ValueError(f"unknown sampling spec {spec!r}")


def run_sgd(dataset: LabeledDataset, problem: ProblemSpec, config: SgdConfig,
            test_set: LabeledDataset | None = None, kernels=None) -> SgdResult:
    """Train for ``config.epochs`` passes; one trace record per epoch plus t=0."""
    kern = kernels if kernels is not None else _kernels
    n = dataset.n
    dist_main, oracle_mode = _resolve_distribution(config.sampling, problem, dataset)
    if config.projection_radius is not None:
        problem = ProblemSpec(
            loss=problem.loss, regularizer=problem.regularizer, lam=problem.lam,
            reg_ratio=problem.reg_ratio, composite=problem.composite,
            radius=config.projection_radius,
        )
    radius = problem.radius if problem.radius is not None else -1.0
    uniform = sampling.build_uniform(n)
    rng = np.random.default_rng(config.seed)
    sched_kind, sched_a, sched_b = config.schedule.tags()
    loss_tag = _kernels.LOSS_TAGS[problem.loss]
    reg_tag = _kernels.REG_TAGS[problem.regularizer]

    w = np.zeros(dataset.dim)
    w_sum = np.zeros(dataset.dim)
    steps_done = 0
    trace: list[diagnostics.TraceRecord] = []
    start = time.perf_counter()

    def dist_for_epoch(epoch: int):
        if epoch == 0 and config.uniform_first_epoch:
            return uniform
        if oracle_mode:
            norms = diagnostics.gradient_norms(w, dataset, problem)
            if norms.max() == 0.0:
                return uniform
            return sampling.build_gradient_norm(norms)
        return dist_main

    def checkpoint():
        upcoming = dist_for_epoch(min(steps_done // n, max(config.epochs - 1, 0)))
        primal = diagnostics.primal_objective(w, dataset, problem)
        primal_avg = (
            diagnostics.primal_objective(w_sum / steps_done, dataset, problem)
            if steps_done else primal
        )
        record = diagnostics.TraceRecord(
            epoch=steps_done / n,
            primal=primal,
            dual=None,
            gap=None,
            variance=diagnostics.gradient_variance(w, dataset, problem, upcoming),
            test_error=diagnostics.test_error(w, test_set) if test_set is not None else None,
            wall_time=time.perf_counter() - start,
            primal_avg=primal_avg,
        )
        trace.append(record)
        PrimalState(w, steps_done + 1).check_radius(problem.radius)

    checkpoint()
    for epoch in range(config.epochs):
        if oracle_mode:
            # the exact distribution changes every step; no batched kernel here
            state = PrimalState(w, steps_done + 1)
            for _ in range(n):
                dist = dist_for_epoch(epoch)
                eta = step_size(config.schedule, state.t)
                i = sampling.draw(dist, rng)
                state = sgd_step(state, dataset, problem, i, float(dist.p[i]), eta)
                w = state.w
                w_sum += w
            steps_done += n
        else:
            dist = dist_for_epoch(epoch)
            order = sampling.draw_many(dist, rng, n)
            weights = 1.0 / (n * dist.p[order])
            kern.sgd_epoch(
                w, w_sum, dataset.indptr, dataset.indices, dataset.values,
                dataset.labels, order, weights,
                steps_done, sched_kind, sched_a, sched_b,
                loss_tag, problem.composite, problem.lam, reg_tag,
                problem.reg_ratio, radius,
            )
            steps_done += n
        checkpoint()

    w_avg = w_sum / steps_done if steps_done else w.copy()
    final = w_avg if config.averaging == "full_average" else w
    return SgdResult(
        state=PrimalState(final.copy(), steps_done + 1),
        w_last=w.copy(),
        w_avg=w_avg,
        trace=trace,
        distribution=dist_main if dist_main is not None else None,
        steps=steps_done,
    )


__all__ = ["Schedule", "SgdConfig", "SgdResult", "step_size", "sgd_step", "run_sgd"]
