import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from impopt import sampling
from impopt.diagnostics import constant_ratio_sgd


class TestBuilders:
    def test_uniform(self):
        assert np.allclose(sampling.build_uniform(4).p, 0.25)
        assert np.array_equal(sampling.build_uniform(1).p, [1.0])
        assert np.allclose(sampling.build_uniform(3).p, 1 / 3)

    def test_uniform_rejects_zero(self):
        with pytest.raises(ValueError):
            sampling.build_uniform(0)

    def test_lipschitz_proportional(self):
        assert np.allclose(sampling.build_lipschitz([1, 2, 3]).p, [1 / 6, 1 / 3, 1 / 2])
        assert np.allclose(sampling.build_lipschitz([5, 5]).p, [0.5, 0.5])

    def test_lipschitz_zero_floor(self):
        p = sampling.build_lipschitz([0.0, 1.0]).p
        assert p[0] == pytest.approx(1e-9, rel=1e-3)
        assert p[1] == pytest.approx(1.0 - 1e-9, rel=1e-12)
        assert p.min() > 0

    def test_lipschitz_all_zero_rejected(self):
        with pytest.raises(ValueError):
            sampling.build_lipschitz([0.0, 0.0])

    def test_smoothness(self):
        assert np.allclose(sampling.build_smoothness([1.0, 1.0]).p, 0.5)
        assert np.allclose(sampling.build_smoothness([1.0, 2.0]).p, [2 / 3, 1 / 3])
        assert np.allclose(sampling.build_smoothness([1.0, 1.0, 0.5]).p, [0.25, 0.25, 0.5])

    def test_smoothness_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            sampling.build_smoothness([1.0, 0.0])

    def test_gradient_norm(self):
        assert np.allclose(sampling.build_gradient_norm([1.0, 3.0]).p, [0.25, 0.75])
        assert np.allclose(sampling.build_gradient_norm([2.0, 2.0, 2.0]).p, 1 / 3)
        p = sampling.build_gradient_norm([0.0, 0.0, 1.0]).p
        assert p[0] == pytest.approx(1e-9, rel=1e-3) and p.min() > 0


class TestSdcaSmooth:
    def test_symmetric(self):
        dist, s = sampling.build_sdca_smooth(np.array([1.0, 1.0]), 1.0, 2, 1.0)
        assert np.allclose(dist.p, 0.5)
        assert s == pytest.approx(2 / 3)

    def test_direct_evaluation(self):
        dist, s = sampling.build_sdca_smooth(np.array([1.0, 2.0]), 0.5, 2, 1.0)
        assert np.allclose(dist.p, [4 / 7, 3 / 7])
        assert s == pytest.approx(4 / 7)

    def test_equal_gamma_gives_uniform(self):
        for c in (0.3, 2.0, 11.0):
            dist, _ = sampling.build_sdca_smooth(np.full(5, c), 0.2, 5, 1.0)
            assert np.allclose(dist.p, 0.2)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            sampling.build_sdca_smooth(np.array([1.0, -1.0]), 1.0, 2, 1.0)
        with pytest.raises(ValueError):
            sampling.build_sdca_smooth(np.array([1.0, 1.0]), 0.0, 2, 1.0)

    def test_step_fraction_feasible(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 40))
            gamma = rng.uniform(0.01, 10.0, n)
            lam = float(rng.uniform(1e-4, 1.0))
            dist, s = sampling.build_sdca_smooth(gamma, lam, n, 1.0)
            s_i = s / (n * dist.p)
            cap = lam * n * gamma / (1.0 + lam * n * gamma)
            assert np.all(s_i <= cap + 1e-12)
            assert np.all(s_i >= 0) and np.all(s_i <= 1.0)
            # boundary of the ascent guarantee: s_i R^2 - gamma (1 - s_i) lam n = 0
            residual = s_i - gamma * (1.0 - s_i) * lam * n
            assert np.abs(residual).max() < 1e-10


class TestDistributionInvariants:
    @given(st.integers(min_value=1, max_value=1000), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_sums_to_one_with_positive_mass(self, n, seed):
        weights = np.random.default_rng(seed).random(n) + 1e-12
        dist = sampling.build_lipschitz(weights)
        assert abs(dist.p.sum() - 1.0) <= 1e-12
        assert dist.p.min() > 0

    @given(st.integers(min_value=1, max_value=1000), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_alias_table_reproduces_p(self, n, seed):
        weights = np.random.default_rng(seed).random(n) + 1e-9
        dist = sampling.build_lipschitz(weights)
        assert np.abs(dist.implied_mass() - dist.p).max() <= 1e-12

    def test_variance_minimality(self, rng):
        # (1/n^2) sum g_i^2 / p_i is smallest at p proportional to g
        for _ in range(40):
            n = int(rng.integers(2, 50))
            g = rng.random(n) * (rng.random(n) < 0.8)  # allow zeros
            if g.max() == 0:
                continue
            opt = sampling.build_gradient_norm(g)
            objective = lambda p: float((g * g / p).sum() / (n * n))  # noqa: E731
            best = objective(opt.p)
            assert best <= objective(sampling.build_uniform(n).p) + 1e-12
            for _ in range(20):
                q = rng.random(n) + 1e-6
                assert best <= objective(q / q.sum()) + 1e-12

    def test_gain_ratio_at_least_one(self, rng):
        for _ in range(200):
            gamma = rng.uniform(0.01, 20.0, int(rng.integers(1, 60)))
            radius = float(rng.uniform(0.1, 10.0))
            assert constant_ratio_sgd(radius / gamma) >= 1.0 - 1e-12


class TestDraw:
    def test_single_index_always_zero(self):
        dist = sampling.build_uniform(1)
        rng = np.random.default_rng(0)
        assert all(sampling.draw(dist, rng) == 0 for _ in range(100))

    def test_seeded_determinism(self):
        dist = sampling.build_lipschitz([1.0, 2.0, 3.0, 4.0])
        a = sampling.draw_many(dist, np.random.default_rng(123), 5000)
        b = sampling.draw_many(dist, np.random.default_rng(123), 5000)
        assert np.array_equal(a, b)
        seq1 = [sampling.draw(dist, np.random.default_rng(9)) for _ in range(50)]
        seq2 = [sampling.draw(dist, np.random.default_rng(9)) for _ in range(50)]
        assert seq1 == seq2

    def test_empirical_frequencies_within_four_se(self):
        p = np.array([0.1, 0.2, 0.3, 0.4])
        dist = sampling.build_lipschitz(p)
        draws = sampling.draw_many(dist, np.random.default_rng(1), 10**6)
        freq = np.bincount(draws, minlength=4) / 1e6
        se = np.sqrt(p * (1 - p) / 1e6)
        assert np.all(np.abs(freq - p) <= 4 * se)

    @pytest.mark.parametrize("n,seed", [(10, 0), (100, 1), (1000, 2)])
    def test_chi_square_not_rejected(self, n, seed):
        weights = np.random.default_rng(seed).random(n) + 0.01
        dist = sampling.build_lipschitz(weights)
        draws = sampling.draw_many(dist, np.random.default_rng(1000 + seed), 10**6)
        counts = np.bincount(draws, minlength=n)
        result = stats.chisquare(counts, f_exp=dist.p * 10**6)
        assert result.pvalue >= 1e-4
