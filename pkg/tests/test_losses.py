import numpy as np
import pytest

from impopt import losses
from impopt.data import LabeledDataset, LabeledExample, SparseVector
from impopt.oracle import numeric_conjugate


def sv(entries, dim):
    return SparseVector.from_dict(entries, dim)


class TestValues:
    def test_hinge(self):
        assert losses.loss_value("hinge", 2.0) == 0.0
        assert losses.loss_value("hinge", 0.0) == 1.0

    def test_squared_hinge(self):
        assert losses.loss_value("squared_hinge", -1.0) == 4.0
        assert losses.loss_value("sqhinge", 1.5) == 0.0

    def test_vectorized_matches_scalar(self, rng):
        margins = rng.normal(0, 2, 100)
        for kind in ("hinge", "squared_hinge"):
            vec = losses.loss_values(kind, margins)
            assert np.allclose(vec, [losses.loss_value(kind, m) for m in margins])


class TestSubgradients:
    def test_inactive_hinge_is_zero(self):
        ex = LabeledExample(sv({0: 1.0}, 2), 1.0)
        g = losses.loss_subgradient("hinge", ex, np.array([2.0, 0.0]))  # margin 2
        assert g.nnz == 0

    def test_squared_hinge_formula(self):
        ex = LabeledExample(sv({0: 1.0}, 1), 1.0)
        g = losses.loss_subgradient("squared_hinge", ex, np.array([0.0]))  # margin 0
        assert np.array_equal(g.to_dense(), [-2.0])

    def test_hinge_negative_label(self):
        ex = LabeledExample(sv({1: 2.0}, 2), -1.0)
        w = np.array([0.0, -0.25])  # margin = -1 * (2 * -0.25) = 0.5
        g = losses.loss_subgradient("hinge", ex, w)
        assert np.array_equal(g.to_dense(), [0.0, 2.0])

    def test_kink_convention_returns_zero(self):
        ex = LabeledExample(sv({0: 1.0}, 1), 1.0)
        g = losses.loss_subgradient("hinge", ex, np.array([1.0]))  # margin exactly 1
        assert g.nnz == 0

    def test_finite_differences(self, rng):
        h = 1e-6
        checked = 0
        while checked < 300:
            d = int(rng.integers(2, 6))
            x_dense = rng.standard_normal(d)
            x_dense[np.abs(x_dense) < 0.05] = 0.3
            label = float(rng.choice([-1.0, 1.0]))
            w = rng.standard_normal(d)
            margin = label * float(np.dot(x_dense, w))
            if abs(1.0 - margin) < 1e-3:
                continue
            entries = {j: x_dense[j] for j in range(d)}
            ex = LabeledExample(sv(entries, d), label)
            for kind in ("hinge", "squared_hinge"):
                grad = losses.loss_subgradient(kind, ex, w).to_dense()
                fd = np.zeros(d)
                for j in range(d):
                    wp, wm = w.copy(), w.copy()
                    wp[j] += h
                    wm[j] -= h
                    fd[j] = (
                        losses.loss_value(kind, label * float(np.dot(x_dense, wp)))
                        - losses.loss_value(kind, label * float(np.dot(x_dense, wm)))
                    ) / (2 * h)
                scale = max(np.linalg.norm(grad), 1e-8)
                assert np.linalg.norm(fd - grad) / scale <= 1e-5
            checked += 1


class TestConjugates:
    def test_closed_forms(self):
        assert losses.conjugate_value("hinge", 1.0) == -1.0
        assert losses.conjugate_value("squared_hinge", 2.0) == -1.0
        assert losses.conjugate_value("hinge", 0.0) == 0.0
        assert losses.conjugate_value("squared_hinge", 0.0) == 0.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            losses.conjugate_value("hinge", 1.5)
        with pytest.raises(ValueError):
            losses.conjugate_value("hinge", -0.5)
        with pytest.raises(ValueError):
            losses.conjugate_value("squared_hinge", -0.5)

    def test_against_numeric_conjugate(self):
        # scalar restriction with y = x = 1: theta = alpha, phi*(-alpha)
        hinge = lambda w: max(0.0, 1.0 - w)  # noqa: E731
        sqh = lambda w: max(0.0, 1.0 - w) ** 2  # noqa: E731
        for alpha in (0.1, 0.5, 0.9):
            num = numeric_conjugate(hinge, -alpha, -50.0, 50.0)
            assert num == pytest.approx(losses.conjugate_value("hinge", alpha), abs=1e-6)
        for alpha in (0.25, 1.0, 2.5):
            num = numeric_conjugate(sqh, -alpha, -50.0, 50.0)
            assert num == pytest.approx(losses.conjugate_value("squared_hinge", alpha), abs=1e-6)

    def test_fenchel_young_summand_nonnegative(self, rng):
        # phi(w) + phi*(-theta) + theta' w >= 0 with theta = alpha y x
        for _ in range(500):
            margin = float(rng.normal(0, 3))
            for kind, alpha in (("hinge", float(rng.uniform(0, 1))),
                                ("squared_hinge", float(rng.uniform(0, 4)))):
                summand = (
                    losses.loss_value(kind, margin)
                    + losses.conjugate_value(kind, alpha)
                    + alpha * margin
                )
                assert summand >= -1e-12


class TestConstants:
    def test_hinge_norm(self):
        ds = LabeledDataset.from_examples([LabeledExample(sv({0: 3.0, 1: 4.0}, 2), 1.0)])
        lips, gamma = losses.per_example_constants("hinge", ds)
        assert lips[0] == 5.0 and gamma is None

    def test_squared_hinge_curvature(self):
        ds = LabeledDataset.from_examples([LabeledExample(sv({0: 1.0}, 1), 1.0)])
        lips, gamma = losses.per_example_constants("squared_hinge", ds)
        assert lips is None
        assert 1.0 / gamma[0] == 2.0

    def test_empty_example_degenerate(self):
        ds = LabeledDataset.from_examples(
            [LabeledExample(sv({}, 2), 1.0), LabeledExample(sv({0: 1.0}, 2), -1.0)]
        )
        lips, _ = losses.per_example_constants("hinge", ds)
        assert lips[0] == 0.0
        _, gamma = losses.per_example_constants("squared_hinge", ds)
        assert np.isinf(gamma[0])

    def test_smoothness_certificate(self, rng):
        # phi(u) <= phi(v) + <grad phi(v), u - v> + (1/(2 gamma)) ||u - v||^2
        for _ in range(300):
            d = 4
            x = rng.standard_normal(d)
            label = float(rng.choice([-1.0, 1.0]))
            ex = LabeledExample(sv({j: x[j] for j in range(d) if x[j] != 0.0}, d), label)
            gamma = 1.0 / (2.0 * float(np.dot(x, x)))
            u, v = rng.standard_normal(d), rng.standard_normal(d)
            phi = lambda w: losses.loss_value("squared_hinge", label * float(np.dot(x, w)))  # noqa: E731
            grad_v = losses.loss_subgradient("squared_hinge", ex, v).to_dense()
            bound = phi(v) + float(np.dot(grad_v, u - v)) + np.dot(u - v, u - v) / (2 * gamma)
            assert phi(u) <= bound + 1e-10
