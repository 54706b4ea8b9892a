import numpy as np
import pytest

from impopt import (
    ProblemSpec,
    Schedule,
    SdcaConfig,
    SgdConfig,
    SyntheticSpec,
    generate_synthetic,
    run_sdca,
    run_sgd,
)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger jit compilation once so timed tests measure algorithm work."""
    data = generate_synthetic(SyntheticSpec(n=20, d=5, nnz_per_example=3, seed=0))
    run_sgd(
        data,
        ProblemSpec(loss="hinge", regularizer="none", lam=0.1, composite=True, radius=4.0),
        SgdConfig(schedule=Schedule("inverse_lambda_t", lam=0.1), epochs=1, seed=0),
    )
    run_sgd(
        data,
        ProblemSpec(loss="squared_hinge", regularizer="l1", lam=0.1),
        SgdConfig(schedule=Schedule("constant", eta=0.05), epochs=1, seed=0),
    )
    for option in ("I", "II", "III", "V"):
        run_sdca(
            data,
            ProblemSpec(loss="squared_hinge", regularizer="l2", lam=0.1),
            SdcaConfig(option=option, sampling="smooth", epochs=1, seed=0),
        )
    run_sdca(
        data,
        ProblemSpec(loss="hinge", regularizer="l2", lam=0.1),
        SdcaConfig(option="IV", sampling="lipschitz", epochs=1, seed=0),
    )


@pytest.fixture
def small_dataset():
    return generate_synthetic(
        SyntheticSpec(n=60, d=12, nnz_per_example=6, norm_skew="lognormal", sigma=1.0,
                      noise_rate=0.1, seed=314)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
