"""Importance-sampled proximal stochastic dual coordinate ascent.

The dual objective over coordinates theta_i = alpha_i * y_i * x_i is

    D(alpha) = (1/n) sum_i -phi_i*(-theta_i) - lam * r*(v),
    v = 1/(lam*n) sum_i theta_i,      w = grad r*(v).

One step draws a coordinate from the configured distribution and increases it
by one of five update rules (see :func:`impopt._kernels.delta_alpha`); the
primal iterate ``w`` is refreshed from ``v`` after every step.  Sampling only
biases which coordinate is touched; the update itself needs no reweighting.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, diagnostics, losses, regularizers, sampling
from .data import DualState, LabeledDataset, ProblemSpec

OPTIONS = {"I": 1, "II": 2, "III": 3, "IV": 4, "V": 5}


@dataclass(frozen=True)
class StepContext:
    """Run-level constants: norm ratio, fixed step fraction, Lipschitz headroom."""

    rnorm: float = 1.0
    s: float | None = None       # fixed fraction for the smooth rule
    rho: float | None = None     # n * L_min / sum(L) in Lipschitz mode


@dataclass
class SdcaConfig:
    option: str = "I"
    sampling: object = "uniform"  # uniform | smooth | lipschitz | prebuilt distribution
    epochs: int = 1
    seed: int = 0
    uniform_first_epoch: bool = True
    gap_tol: float | None = None     # stop at the first checkpoint with gap <= tol
    max_steps: int | None = None     # cap total steps below epochs * n
    averaging: bool | None = None    # default: on for Lipschitz-style runs
    avg_t0: int | None = None        # window start; default T - T//2... see run_sdca
    rnorm: float = 1.0

    def __post_init__(self):
        if self.option not in OPTIONS:
            raise ValueError(f"option must be one of {sorted(OPTIONS)}")
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")


@dataclass
class SdcaResult:
    state: DualState
    trace: list = field(default_factory=list)
    distribution: sampling.SamplingDistribution | None = None
    context: StepContext = StepContext()
    steps: int = 0
    stopped_early: bool = False
    t0_theory: int | None = None
    avg: dict | None = None  # window-averaged iterates and their objectives


def validate_sdca(problem: ProblemSpec, config: SdcaConfig) -> None:
    if problem.composite:
        raise ValueError("dual ascent needs an explicit strongly convex regularizer")
    if problem.regularizer not in ("l2", "l2_plus_scaled_l1"):
        raise ValueError(
            f"regularizer {problem.regularizer!r} is not strongly convex; "
            "use l2 or the l2_plus_scaled_l1 surrogate"
        )
    loss = losses.canonical_kind(problem.loss)
    if config.option == "V" and loss != losses.SQUARED_HINGE:
        raise ValueError("option V requires a smooth loss")
    if config.option == "IV" and loss != losses.HINGE:
        raise ValueError("option IV requires Lipschitz (hinge) losses")
    if config.sampling == "smooth" and loss != losses.SQUARED_HINGE:
        raise ValueError("smooth-loss sampling requires a smooth loss")
    if config.sampling == "lipschitz" and loss != losses.HINGE:
        raise ValueError("Lipschitz sampling requires the hinge loss")


def _constants(problem: ProblemSpec, dataset: LabeledDataset):
    """(gammas, lips) arrays for the kernels; zeros where not applicable."""
    if losses.canonical_kind(problem.loss) == losses.SQUARED_HINGE:
        _, gammas = losses.per_example_constants(problem.loss, dataset)
        lips = np.zeros(dataset.n)
    else:
        lips, _ = losses.per_example_constants(problem.loss, dataset)
        gammas = np.zeros(dataset.n)
    return gammas, lips


def smooth_step_fraction(problem: ProblemSpec, dataset: LabeledDataset,
                         rnorm: float = 1.0) -> float:
    _, s = sampling.build_sdca_smooth(
        losses.per_example_constants(problem.loss, dataset)[1],
        problem.lam, dataset.n, rnorm,
    )
    return s


def dual_objective(state: DualState, dataset: LabeledDataset,
                   problem: ProblemSpec) -> float:
    """Exact D(alpha); raises if any coordinate is dual-infeasible."""
    conj = losses.conjugate_values(problem.loss, state.alpha)
    return float((-conj).mean()) - problem.lam * regularizers.conjugate_value(
        problem.regularizer, state.v, problem.reg_ratio
    )


def coordinate_fractions(p: np.ndarray, n: int, s: float) -> np.ndarray:
    """Per-coordinate shares s/(n p_i) of the global step constant, in [0, 1].

    Under the smooth-loss distribution this equals
    lam*n*gamma_i / (rnorm^2 + lam*n*gamma_i) coordinate by coordinate.
    """
    return np.minimum(s / (n * p), 1.0)


def _gamma_fraction(gamma_i: float, lam_n: float, rnorm: float) -> float:
    c = lam_n * gamma_i
    return c / (rnorm * rnorm + c) if np.isfinite(c) else 1.0


def sdca_step(state: DualState, dataset: LabeledDataset, problem: ProblemSpec,
              i: int, option: str = "I", s_frac: float | None = None,
              rnorm: float = 1.0) -> DualState:
    """Apply one coordinate update in place and return the state.

    ``s_frac`` is the fraction moved toward the negative gradient for the
    fixed-fraction rule (option V); it defaults to this coordinate's
    curvature-determined share, which matches sampling from the smooth-loss
    distribution.
    """
    nsq = dataset.norms_sq[i]
    if nsq <= 0.0:
        state.t += 1
        return state
    lo, hi = dataset.indptr[i], dataset.indptr[i + 1]
    idx = dataset.indices[lo:hi]
    val = dataset.values[lo:hi]
    label = dataset.labels[i]
    m = label * float(np.dot(state.w[idx], val))
    loss_tag = _kernels.LOSS_TAGS[problem.loss]
    if loss_tag == _kernels.LOSS_SQHINGE:
        gamma_i = 1.0 / (2.0 * nsq)
        lip_i = 0.0
    else:
        gamma_i = 0.0
        lip_i = dataset.norms[i]
    if option == "V" and s_frac is None:
        s_frac = _gamma_fraction(gamma_i, problem.lam * dataset.n, rnorm)
    d_a = _kernels.delta_alpha(
        OPTIONS[option], loss_tag, float(state.alpha[i]), m, float(nsq),
        problem.lam * dataset.n, gamma_i, lip_i,
        0.0 if s_frac is None else s_frac, rnorm,
    )
    if d_a != 0.0:
        state.alpha[i] += d_a
        upd = d_a * label / (problem.lam * dataset.n)
        state.v[idx] += upd * val
        if problem.regularizer == "l2":
            state.w[idx] = state.v[idx]
        else:
            state.w[idx] = regularizers.soft_threshold(state.v[idx], problem.reg_ratio)
    state.t += 1
    return state


def lipschitz_warmup_steps(dataset: LabeledDataset, lam: float, rnorm: float = 1.0):
    """(rho, t0): step-fraction ceiling and the reference burn-in length."""
    lips = dataset.norms
    total = lips.sum()
    if total <= 0:
        return 0.0, None
    rho = dataset.n * lips.min() / total
    if rho <= 0:
        return 0.0, None
    g_bound = 4.0 * rnorm * rnorm * (total / dataset.n) ** 2
    arg = 2.0 * lam * dataset.n / (rho * g_bound)
    t0 = max(0, math.ceil(dataset.n / rho * math.log(arg))) if arg > 1.0 else 0
    return float(rho), int(t0)


def run_sdca(dataset: LabeledDataset, problem: ProblemSpec, config: SdcaConfig,
             test_set: LabeledDataset | None = None, kernels=None) -> SdcaResult:
    """Run epochs * n coordinate steps (capped by max_steps) with per-epoch traces."""
    kern = kernels if kernels is not None else _kernels
    validate_sdca(problem, config)
    n = dataset.n
    gammas, lips = _constants(problem, dataset)

    s_prop = None
    if config.option == "V" or config.sampling == "smooth":
        dist_smooth, s_prop = sampling.build_sdca_smooth(
            losses.per_example_constants(problem.loss, dataset)[1],
            problem.lam, n, config.rnorm,
        )
    rho = t0_theory = None
    if config.sampling == "smooth":
        dist_main = dist_smooth
    elif config.sampling == "lipschitz":
        dist_main = sampling.build_lipschitz(lips)
        rho, t0_theory = lipschitz_warmup_steps(dataset, problem.lam, config.rnorm)
    elif config.sampling == "uniform":
        dist_main = sampling.build_uniform(n)
    elif isinstance(config.sampling, sampling.SamplingDistribution):
        dist_main = config.sampling
        if dist_main.n != n:
            raise ValueError(f"distribution over {dist_main.n} indices, dataset has {n}")
    else:
        raise ValueError(f"unknown sampling spec {config.sampling!r}")

    total_steps = config.epochs * n
    if config.max_steps is not None:
        total_steps = min(total_steps, config.max_steps)

    averaging = config.averaging
    if averaging is None:
        averaging = config.sampling == "lipschitz"
    if averaging:
        t0 = config.avg_t0 if config.avg_t0 is not None else total_steps - (total_steps + 1) // 2
        avg_from = t0 + 1
    else:
        t0 = None
        avg_from = 0
    alpha_sum = np.zeros(n)
    v_sum = np.zeros(dataset.dim)
    w_sum = np.zeros(dataset.dim)

    uniform = sampling.build_uniform(n)
    rng = np.random.default_rng(config.seed)
    loss_tag = _kernels.LOSS_TAGS[problem.loss]
    reg_tag = _kernels.REG_TAGS[problem.regularizer]
    state = DualState.zeros(n, dataset.dim)
    trace: list[diagnostics.TraceRecord] = []
    start = time.perf_counter()
    stopped = False

    def dist_for_epoch(epoch: int):
        if epoch == 0 and config.uniform_first_epoch:
            return uniform
        return dist_main

    def checkpoint():
        primal = diagnostics.primal_objective(state.w, dataset, problem)
        dual = dual_objective(state, dataset, problem)
        gap = primal - dual
        if gap < -1e-10:
            raise AssertionError(f"weak duality violated: gap={gap:.3e}")
        losses.check_dual_feasible(problem.loss, state.alpha)
        state.check_v(dataset, problem.lam)
        n_epochs_total = max(1, -(-total_steps // n))
        upcoming = dist_for_epoch(min(state.t // n, n_epochs_total - 1))
        trace.append(diagnostics.TraceRecord(
            epoch=state.t / n,
            primal=primal,
            dual=dual,
            gap=gap,
            variance=diagnostics.gradient_variance(state.w, dataset, problem, upcoming),
            test_error=diagnostics.test_error(state.w, test_set) if test_set is not None else None,
            wall_time=time.perf_counter() - start,
        ))
        return gap

    zero_fracs = np.zeros(n)
    gap = checkpoint()
    epoch = 0
    while state.t < total_steps:
        if config.gap_tol is not None and gap <= config.gap_tol:
            stopped = True
            break
        steps = min(n, total_steps - state.t)
        dist = dist_for_epoch(epoch)
        if config.option == "V":
            s_fracs = coordinate_fractions(dist.p, n, s_prop)
        else:
            s_fracs = zero_fracs
        order = sampling.draw_many(dist, rng, steps)
        kern.sdca_epoch(
            state.alpha, state.v, state.w,
            dataset.indptr, dataset.indices, dataset.values, dataset.labels,
            dataset.norms_sq, order, problem.lam, n,
            OPTIONS[config.option], s_fracs,
            gammas, lips, config.rnorm, loss_tag, reg_tag, problem.reg_ratio,
            state.t, avg_from, alpha_sum, v_sum, w_sum,
        )
        state.t += steps
        epoch += 1
        gap = checkpoint()
    if config.gap_tol is not None and gap <= config.gap_tol:
        stopped = True

    avg = None
    if averaging and state.t > t0:
        count = state.t - t0
        avg_state = DualState(alpha_sum / count, v_sum / count, w_sum / count, state.t)
        avg_primal = diagnostics.primal_objective(avg_state.w, dataset, problem)
        avg_dual = dual_objective(avg_state, dataset, problem)
        avg = {
            "w": avg_state.w, "alpha": avg_state.alpha, "v": avg_state.v,
            "primal": avg_primal, "dual": avg_dual, "gap": avg_primal - avg_dual,
            "t0": t0,
        }
    return SdcaResult(
        state=state,
        trace=trace,
        distribution=dist_main,
        context=StepContext(rnorm=config.rnorm, s=s_prop, rho=rho),
        steps=state.t,
        stopped_early=stopped,
        t0_theory=t0_theory,
        avg=avg,
    )


__all__ = [
    "OPTIONS",
    "StepContext",
    "coordinate_fractions",
    "SdcaConfig",
    "SdcaResult",
    "validate_sdca",
    "dual_objective",
    "sdca_step",
    "smooth_step_fraction",
    "lipschitz_warmup_steps",
    "run_sdca",
]
