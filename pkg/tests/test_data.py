import numpy as np
import pytest

from impopt.data import (
    DualState,
    LabeledDataset,
    LabeledExample,
    ProblemSpec,
    SparseVector,
    axpy_sparse,
    dot,
    project_l2_ball,
    smoothed_l1_problem,
)


def sv(entries, dim):
    return SparseVector.from_dict(entries, dim)


class TestSparseVector:
    def test_rejects_unsorted_indices(self):
        with pytest.raises(ValueError):
            SparseVector(np.array([2, 1]), np.array([1.0, 1.0]), 5)

    def test_rejects_duplicate_indices(self):
        with pytest.raises(ValueError):
            SparseVector(np.array([1, 1]), np.array([1.0, 2.0]), 5)

    def test_rejects_stored_zeros(self):
        with pytest.raises(ValueError):
            SparseVector(np.array([0]), np.array([0.0]), 2)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SparseVector(np.array([3]), np.array([1.0]), 3)

    def test_dense_roundtrip(self):
        v = sv({0: 1.5, 3: -2.0}, 5)
        assert np.array_equal(v.to_dense(), [1.5, 0, 0, -2.0, 0])


class TestDot:
    def test_basic(self):
        assert dot(sv({0: 1, 2: 2}, 3), np.array([3.0, 9.0, 4.0])) == 11.0

    def test_empty(self):
        assert dot(sv({}, 3), np.array([1.0, 2.0, 3.0])) == 0.0

    def test_single_negative(self):
        assert dot(sv({1: -2}, 3), np.array([0.0, 5.0, 0.0])) == -10.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dot(sv({0: 1}, 2), np.array([1.0, 2.0, 3.0]))


class TestAxpy:
    def test_basic(self):
        b = np.array([1.0, 1.0])
        assert np.array_equal(axpy_sparse(2.0, sv({0: 1}, 2), b), [3.0, 1.0])

    def test_zero_scale_no_change(self):
        b = np.array([5.0, 6.0])
        axpy_sparse(0.0, sv({0: 1, 1: 2}, 2), b)
        assert np.array_equal(b, [5.0, 6.0])

    def test_cancellation(self):
        b = np.array([0.0, 4.0])
        assert np.array_equal(axpy_sparse(-1.0, sv({1: 4}, 2), b), [0.0, 0.0])

    def test_untouched_coordinates(self):
        b = np.array([7.0, 8.0, 9.0])
        axpy_sparse(3.0, sv({1: 1}, 3), b)
        assert b[0] == 7.0 and b[2] == 9.0


class TestProjection:
    def test_inside_ball_unchanged(self):
        w = np.array([3.0, 4.0])
        assert project_l2_ball(w, 10.0) is w

    def test_boundary_unchanged(self):
        assert np.array_equal(project_l2_ball(np.array([3.0, 4.0]), 5.0), [3.0, 4.0])

    def test_radial_scaling(self):
        assert np.allclose(project_l2_ball(np.array([3.0, 4.0]), 1.0), [0.6, 0.8])

    def test_idempotent_and_nonexpansive(self, rng):
        for _ in range(200):
            u = rng.standard_normal(6) * rng.exponential(2.0)
            v = rng.standard_normal(6) * rng.exponential(2.0)
            r = float(rng.uniform(0.1, 3.0))
            pu, pv = project_l2_ball(u, r), project_l2_ball(v, r)
            assert np.allclose(project_l2_ball(pu.copy(), r), pu)
            assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) + 1e-12


class TestDataset:
    def test_norm_cache_matches_recompute(self, small_dataset):
        small_dataset.validate_norms()

    def test_from_examples_and_accessor(self):
        exs = [
            LabeledExample(sv({0: 1.0, 2: 2.0}, 3), 1.0),
            LabeledExample(sv({}, 3), -1.0),
        ]
        ds = LabeledDataset.from_examples(exs)
        assert ds.n == 2 and ds.dim == 3
        assert ds.example(0).features.nnz == 2
        assert ds.example(1).features.nnz == 0
        assert ds.norms[1] == 0.0

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError):
            LabeledDataset.from_examples([])

    def test_arrays_frozen(self, small_dataset):
        with pytest.raises(ValueError):
            small_dataset.values[0] = 99.0


class TestProblemSpec:
    def test_composite_requires_no_regularizer(self):
        with pytest.raises(ValueError):
            ProblemSpec(loss="hinge", regularizer="l2", lam=0.1, composite=True)

    def test_positive_lambda_required(self):
        with pytest.raises(ValueError):
            ProblemSpec(loss="hinge", regularizer="l2", lam=0.0)

    def test_smoothed_l1_construction(self):
        prob = smoothed_l1_problem("squared_hinge", lam=0.1, accuracy=1e-3)
        assert prob.regularizer == "l2_plus_scaled_l1"
        assert prob.lam == pytest.approx(0.1 * 0.1 * 1e-3)
        assert prob.reg_ratio == pytest.approx(0.1 / prob.lam)


class TestDualStateAccumulator:
    def test_incremental_v_matches_recompute_after_1e5_updates(self, rng):
        # model-core invariant: drift after 10^5 incremental updates stays tiny
        from impopt import SyntheticSpec, generate_synthetic

        data = generate_synthetic(SyntheticSpec(n=200, d=15, nnz_per_example=5, seed=8))
        lam = 0.05
        state = DualState.zeros(data.n, data.dim)
        order = rng.integers(0, data.n, size=100_000)
        deltas = rng.uniform(-0.01, 0.01, size=order.size)
        for i, d_a in zip(order, deltas):
            lo, hi = data.indptr[i], data.indptr[i + 1]
            state.alpha[i] += d_a
            state.v[data.indices[lo:hi]] += (
                d_a * data.labels[i] / (lam * data.n) * data.values[lo:hi]
            )
        state.check_v(data, lam, rtol=1e-9)
