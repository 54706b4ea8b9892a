"""Importance-sampled stochastic solvers for regularized linear models.

Two solver families share the same data model: an importance-weighted
proximal stochastic (sub)gradient method and a stochastic dual coordinate
ascent method, each with sampling distributions built from per-example
gradient-norm bounds or curvature constants, plus full diagnostics
(objectives, duality gap, gradient variance, bound-constant ratios).
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .data import (
    DualState,
    LabeledDataset,
    LabeledExample,
    PrimalState,
    ProblemSpec,
    SparseVector,
    axpy_sparse,
    dot,
    project_l2_ball,
    smoothed_l1_problem,
)
from .dataio import SyntheticSpec, generate_synthetic, parse_libsvm, split, write_libsvm
from .diagnostics import (
    TraceRecord,
    constant_ratio_sdca,
    constant_ratio_sgd,
    gradient_variance,
    primal_objective,
    test_error,
)
from .sampling import (
    SamplingDistribution,
    build_gradient_norm,
    build_lipschitz,
    build_sdca_smooth,
    build_smoothness,
    build_uniform,
    draw,
    draw_many,
)
from .sdca import SdcaConfig, SdcaResult, dual_objective, run_sdca, sdca_step
from .sgd import Schedule, SgdConfig, SgdResult, run_sgd, sgd_step, step_size

__all__ = [
    "BACKEND",
    "__version__",
    "SparseVector",
    "LabeledExample",
    "LabeledDataset",
    "ProblemSpec",
    "PrimalState",
    "DualState",
    "dot",
    "axpy_sparse",
    "project_l2_ball",
    "smoothed_l1_problem",
    "SamplingDistribution",
    "build_uniform",
    "build_lipschitz",
    "build_smoothness",
    "build_sdca_smooth",
    "build_gradient_norm",
    "draw",
    "draw_many",
    "Schedule",
    "SgdConfig",
    "SgdResult",
    "run_sgd",
    "sgd_step",
    "step_size",
    "SdcaConfig",
    "SdcaResult",
    "run_sdca",
    "sdca_step",
    "dual_objective",
    "TraceRecord",
    "primal_objective",
    "gradient_variance",
    "test_error",
    "constant_ratio_sgd",
    "constant_ratio_sdca",
    "SyntheticSpec",
    "generate_synthetic",
    "parse_libsvm",
    "write_libsvm",
    "split",
]
