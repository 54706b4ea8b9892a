import numpy as np
import pytest

from impopt import diagnostics, sampling
from impopt.data import LabeledDataset, LabeledExample, ProblemSpec, SparseVector


def sv(entries, dim):
    return SparseVector.from_dict(entries, dim)


def dataset_with_unit_gradients():
    # two hinge-active examples with orthogonal unit gradients at w = 0
    return LabeledDataset.from_examples([
        LabeledExample(sv({0: 1.0}, 2), -1.0),
        LabeledExample(sv({1: 1.0}, 2), -1.0),
    ])


class TestPrimalObjective:
    @pytest.mark.parametrize("loss", ["hinge", "squared_hinge"])
    def test_at_zero_is_one(self, small_dataset, loss):
        prob = ProblemSpec(loss=loss, regularizer="l2", lam=0.37)
        w = np.zeros(small_dataset.dim)
        assert diagnostics.primal_objective(w, small_dataset, prob) == pytest.approx(1.0)

    def test_fully_fit_example_leaves_only_penalty(self):
        ds = LabeledDataset.from_examples([LabeledExample(sv({0: 1.0}, 1), 1.0)])
        prob = ProblemSpec(loss="hinge", regularizer="l2", lam=0.4)
        w = np.array([2.0])  # margin 2 >= 1
        assert diagnostics.primal_objective(w, ds, prob) == pytest.approx(0.4 * 0.5 * 4.0)

    def test_composite_value_matches_split(self, small_dataset, rng):
        lam = 0.21
        composite = ProblemSpec(loss="squared_hinge", regularizer="none", lam=lam,
                                composite=True)
        explicit = ProblemSpec(loss="squared_hinge", regularizer="l2", lam=lam)
        for _ in range(20):
            w = rng.standard_normal(small_dataset.dim)
            a = diagnostics.primal_objective(w, small_dataset, composite)
            b = diagnostics.primal_objective(w, small_dataset, explicit)
            assert a == pytest.approx(b, rel=1e-14)


class TestGradientVariance:
    def test_orthogonal_unit_gradients_uniform(self):
        ds = dataset_with_unit_gradients()
        prob = ProblemSpec(loss="hinge", regularizer="l2", lam=0.1)
        w = np.zeros(2)
        v = diagnostics.gradient_variance(w, ds, prob, sampling.build_uniform(2))
        assert v == pytest.approx(0.5, abs=1e-12)

    def test_zero_variance_iff_weighted_gradients_coincide(self, rng):
        # identical raw gradients: the importance-weighted copies coincide
        # exactly when p is uniform
        ds = LabeledDataset.from_examples(
            [LabeledExample(sv({0: 1.0}, 1), -1.0) for _ in range(4)]
        )
        prob = ProblemSpec(loss="hinge", regularizer="l2", lam=0.1)
        w = np.zeros(1)
        uniform = sampling.build_uniform(4)
        assert diagnostics.gradient_variance(w, ds, prob, uniform) == pytest.approx(0.0, abs=1e-14)
        skewed = sampling.build_lipschitz(np.array([1.0, 2.0, 3.0, 4.0]))
        assert diagnostics.gradient_variance(w, ds, prob, skewed) > 1e-3

    def test_two_outcome_enumeration(self):
        # gradient norms (1, 3): variance is 4 - ||F||^2 at p = (1/4, 3/4)
        # and 5 - ||F||^2 at uniform
        ds = LabeledDataset.from_examples([
            LabeledExample(sv({0: 1.0}, 2), -1.0),
            LabeledExample(sv({1: 3.0}, 2), -1.0),
        ])
        prob = ProblemSpec(loss="hinge", regularizer="l2", lam=0.1)
        w = np.zeros(2)
        full = diagnostics.mean_gradient(w, ds, prob)
        f_sq = float(np.dot(full, full))
        v_opt = diagnostics.gradient_variance(
            w, ds, prob, sampling.build_gradient_norm([1.0, 3.0]))
        v_unif = diagnostics.gradient_variance(w, ds, prob, sampling.build_uniform(2))
        assert v_opt == pytest.approx(4.0 - f_sq, abs=1e-12)
        assert v_unif == pytest.approx(5.0 - f_sq, abs=1e-12)
        assert v_opt < v_unif

    def test_two_forms_agree(self, small_dataset, rng):
        for composite in (False, True):
            prob = ProblemSpec(
                loss="squared_hinge",
                regularizer="none" if composite else "l2",
                lam=0.07, composite=composite,
            )
            for _ in range(10):
                w = rng.standard_normal(small_dataset.dim)
                dist = sampling.build_lipschitz(rng.random(small_dataset.n) + 0.02)
                a = diagnostics.gradient_variance(w, small_dataset, prob, dist)
                b = diagnostics.gradient_variance_identity(w, small_dataset, prob, dist)
                assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_matches_dense_enumeration(self, small_dataset, rng):
        from impopt import losses

        prob = ProblemSpec(loss="squared_hinge", regularizer="l2", lam=0.07)
        w = rng.standard_normal(small_dataset.dim)
        dist = sampling.build_lipschitz(rng.random(small_dataset.n) + 0.02)
        full = diagnostics.mean_gradient(w, small_dataset, prob)
        total = 0.0
        for i in range(small_dataset.n):
            g = losses.loss_subgradient(prob.loss, small_dataset.example(i), w).to_dense()
            z = g / (small_dataset.n * dist.p[i])
            total += dist.p[i] * float(np.dot(z - full, z - full))
        got = diagnostics.gradient_variance(w, small_dataset, prob, dist)
        assert got == pytest.approx(total, rel=1e-12, abs=1e-14)

    def test_nonnegative(self, small_dataset, rng):
        prob = ProblemSpec(loss="hinge", regularizer="l2", lam=0.1)
        for _ in range(20):
            w = rng.standard_normal(small_dataset.dim)
            dist = sampling.build_lipschitz(rng.random(small_dataset.n) + 0.01)
            assert diagnostics.gradient_variance(w, small_dataset, prob, dist) >= 0.0


class TestConstantRatios:
    def test_equal_inputs_exactly_one(self):
        for n in (2, 3, 17, 100):
            assert diagnostics.constant_ratio_sgd(np.full(n, 0.7)) == 1.0
            assert diagnostics.constant_ratio_sdca(np.full(n, 0.3), 0.05, n) == 1.0

    def test_skewed_two_point(self):
        # one zero entry (plus floor downstream) doubles the sgd ratio at n=2
        assert diagnostics.constant_ratio_sgd(np.array([1.0, 1e-9])) == pytest.approx(2.0)

    def test_always_at_least_one(self, rng):
        for _ in range(2000):
            n = int(rng.integers(1, 40))
            g = rng.random(n) + 1e-9
            assert diagnostics.constant_ratio_sgd(g) >= 1.0 - 1e-12
            assert diagnostics.constant_ratio_sdca(g, float(rng.uniform(1e-4, 1.0)), n) >= 1.0 - 1e-12

    def test_input_validation(self):
        with pytest.raises(ValueError):
            diagnostics.constant_ratio_sgd(np.zeros(3))
        with pytest.raises(ValueError):
            diagnostics.constant_ratio_sdca(np.array([1.0, 0.0]), 0.1, 2)


class TestTestError:
    def test_zero_weights_all_errors(self, small_dataset):
        assert diagnostics.test_error(np.zeros(small_dataset.dim), small_dataset) == 1.0

    def test_perfect_separator(self):
        ds = LabeledDataset.from_examples([
            LabeledExample(sv({0: 1.0}, 1), 1.0),
            LabeledExample(sv({0: -2.0}, 1), -1.0),
        ])
        assert diagnostics.test_error(np.array([1.0]), ds) == 0.0

    def test_half_wrong(self):
        ds = LabeledDataset.from_examples([
            LabeledExample(sv({0: 1.0}, 1), 1.0),
            LabeledExample(sv({0: 1.0}, 1), -1.0),
        ])
        assert diagnostics.test_error(np.array([1.0]), ds) == 0.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            diagnostics.test_error(np.zeros(2), None)
