"""Core domain types: sparse examples, datasets, problem definitions, iterates.

Datasets are stored in CSR layout (``indptr``/``indices``/``values``) so the
solver kernels can walk rows without object overhead.  All arrays are frozen
after construction; a dataset can safely be shared by concurrent runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

LOSS_KINDS = ("hinge", "squared_hinge")
REG_KINDS = ("none", "l2", "l1", "l2_plus_scaled_l1")


@dataclass(frozen=True)
class SparseVector:
    """Sparse vector as parallel (strictly increasing) index / value arrays."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or val.ndim != 1 or idx.shape != val.shape:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.dim:
                raise ValueError("indices must lie in [0, dim)")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        if np.any(val == 0.0):
            raise ValueError("stored zero values are not allowed")
        idx.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @classmethod
    def from_dict(cls, entries: dict, dim: int) -> "SparseVector":
        items = sorted(entries.items())
        idx = np.array([i for i, _ in items], dtype=np.int64)
        val = np.array([v for _, v in items], dtype=np.float64)
        return cls(idx, val, dim)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out


@dataclass(frozen=True)
class LabeledExample:
    features: SparseVector
    label: float


def dot(a: SparseVector, b: np.ndarray) -> float:
    """Sparse-dense inner product sum_j a_j * b_j."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.shape[0] != a.dim:
        raise ValueError(f"dimension mismatch: vector dim {a.dim}, dense dim {b.shape}")
    return float(np.dot(a.values, b[a.indices]))


def axpy_sparse(scale: float, a: SparseVector, b: np.ndarray) -> np.ndarray:
    """In-place b[j] += scale * a_j on the stored entries of ``a``; returns b."""
    if b.ndim != 1 or b.shape[0] != a.dim:
        raise ValueError(f"dimension mismatch: vector dim {a.dim}, dense dim {b.shape}")
    if scale != 0.0:
        b[a.indices] += scale * a.values
    return b


def project_l2_ball(w: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {v : ||v||_2 <= radius}."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    nrm = float(np.linalg.norm(w))
    if nrm <= radius:
        return w
    return w * (radius / nrm)


class LabeledDataset:
    """Immutable labeled dataset in CSR form with cached per-example norms."""

    def __init__(self, indptr, indices, values, labels, dim):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        values = np.ascontiguousarray(values, dtype=np.float64)
        labels = np.ascontiguousarray(labels, dtype=np.float64)
        n = labels.shape[0]
        if n < 1:
            raise ValueError("dataset must contain at least one example")
        if indptr.shape[0] != n + 1 or indptr[0] != 0 or indptr[-1] != indices.shape[0]:
            raise ValueError("inconsistent CSR structure")
        if indices.shape != values.shape:
            raise ValueError("indices/values length mismatch")
        if dim <= 0:
            raise ValueError("dim must be positive")
        if indices.size and (indices.min() < 0 or indices.max() >= dim):
            raise ValueError("column index out of range")
        for arr in (indptr, indices, values, labels):
            arr.setflags(write=False)
        self.indptr = indptr
        self.indices = indices
        self.values = values
        self.labels = labels
        self.dim = int(dim)
        self.n = int(n)
        row_nnz = np.diff(indptr)
        norms_sq = np.zeros(n)
        nonempty = row_nnz > 0
        if values.size:
            # empty rows have zero width, so reducing at the non-empty starts
            # still yields one contiguous segment per non-empty row
            norms_sq[nonempty] = np.add.reduceat(values * values, indptr[:-1][nonempty])
        self.norms_sq = norms_sq
        self.norms = np.sqrt(norms_sq)
        self.norms.setflags(write=False)
        self.norms_sq.setflags(write=False)
        self._matrix = None

    @classmethod
    def from_examples(cls, examples, dim=None) -> "LabeledDataset":
        if not examples:
            raise ValueError("dataset must contain at least one example")
        if dim is None:
            dim = max(ex.features.dim for ex in examples)
        indptr = np.zeros(len(examples) + 1, dtype=np.int64)
        idx_parts, val_parts, labels = [], [], []
        for k, ex in enumerate(examples):
            if ex.features.dim > dim:
                raise ValueError("example dimension exceeds dataset dimension")
            idx_parts.append(ex.features.indices)
            val_parts.append(ex.features.values)
            labels.append(ex.label)
            indptr[k + 1] = indptr[k] + ex.features.nnz
        indices = np.concatenate(idx_parts) if idx_parts else np.zeros(0, dtype=np.int64)
        values = np.concatenate(val_parts) if val_parts else np.zeros(0)
        return cls(indptr, indices, values, np.array(labels), dim)

    def __len__(self) -> int:
        return self.n

    def example(self, i: int) -> LabeledExample:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        vec = SparseVector(self.indices[lo:hi].copy(), self.values[lo:hi].copy(), self.dim)
        return LabeledExample(vec, float(self.labels[i]))

    @property
    def matrix(self) -> sp.csr_matrix:
        """scipy CSR view used for vectorized checkpoint computations."""
        if self._matrix is None:
            self._matrix = sp.csr_matrix(
                (self.values, self.indices, self.indptr), shape=(self.n, self.dim)
            )
        return self._matrix

    def scores(self, w: np.ndarray) -> np.ndarray:
        """X @ w for a dense weight vector."""
        if w.shape[0] != self.dim:
            raise ValueError("weight vector dimension mismatch")
        return self.matrix @ w

    def margins(self, w: np.ndarray) -> np.ndarray:
        return self.labels * self.scores(w)

    def validate_norms(self, rtol: float = 1e-12) -> None:
        fresh = np.sqrt(
            np.array([np.dot(self.values[lo:hi], self.values[lo:hi])
                      for lo, hi in zip(self.indptr[:-1], self.indptr[1:])])
        )
        scale = np.maximum(fresh, 1.0)
        if np.any(np.abs(fresh - self.norms) > rtol * scale):
            raise AssertionError("cached norms disagree with recomputation")

    def subset(self, rows: np.ndarray) -> "LabeledDataset":
        rows = np.asarray(rows, dtype=np.int64)
        nnz = self.indptr[rows + 1] - self.indptr[rows]
        indptr = np.zeros(rows.size + 1, dtype=np.int64)
        np.cumsum(nnz, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        values = np.empty(indptr[-1])
        for k, r in enumerate(rows):
            lo, hi = self.indptr[r], self.indptr[r + 1]
            indices[indptr[k]:indptr[k + 1]] = self.indices[lo:hi]
            values[indptr[k]:indptr[k + 1]] = self.values[lo:hi]
        return LabeledDataset(indptr, indices, values, self.labels[rows], self.dim)

    def equals(self, other: "LabeledDataset") -> bool:
        return (
            self.dim == other.dim
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.labels, other.labels)
        )


@dataclass(frozen=True)
class ProblemSpec:
    """Loss / regularizer / strength triple defining one training objective.

    ``composite=True`` folds the ridge term (lam/2)||w||^2 into every
    per-example loss and sets the explicit regularizer to "none"; the primal
    value is unchanged but the solver treats the whole thing as the sampled
    part.  ``reg_ratio`` is the l1 weight of the "l2_plus_scaled_l1"
    regularizer r(w) = 0.5||w||^2 + reg_ratio * ||w||_1.
    """

    loss: str
    regularizer: str
    lam: float
    reg_ratio: float = 0.0
    composite: bool = False
    radius: float | None = None

    def __post_init__(self):
        if self.loss not in LOSS_KINDS:
            raise ValueError(f"unknown loss {self.loss!r}")
        if self.regularizer not in REG_KINDS:
            raise ValueError(f"unknown regularizer {self.regularizer!r}")
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if self.composite and self.regularizer != "none":
            raise ValueError("composite mode folds the ridge term in; use regularizer='none'")
        if self.regularizer == "l2_plus_scaled_l1" and not self.reg_ratio > 0:
            raise ValueError("l2_plus_scaled_l1 requires a positive reg_ratio")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive when set")


def smoothed_l1_problem(loss: str, lam: float, accuracy: float = 1e-3) -> ProblemSpec:
    """Strongly-convex surrogate for loss + lam*||w||_1.

    The surrogate objective is (1/n) sum_i phi_i(w) + delta * r(w) with
    delta = lam^2 * accuracy and r(w) = 0.5||w||^2 + (lam/delta)||w||_1; an
    accuracy/2-approximate minimizer of the surrogate is accuracy-approximate
    for the original problem.
    """
    if not (lam > 0 and accuracy > 0):
        raise ValueError("lam and accuracy must be positive")
    delta = lam * lam * accuracy
    return ProblemSpec(
        loss=loss,
        regularizer="l2_plus_scaled_l1",
        lam=delta,
        reg_ratio=lam / delta,
    )


@dataclass
class PrimalState:
    """Dense iterate plus 1-based step counter for the gradient solver."""

    w: np.ndarray
    t: int = 1

    def check_radius(self, radius: float | None, slack: float = 1e-10) -> None:
        if radius is not None and np.linalg.norm(self.w) > radius + slack:
            raise AssertionError("iterate escaped the projection ball")


@dataclass
class DualState:
    """Dual coordinates (scalar alpha_i per example), accumulator and primal view.

    The i-th dual vector is alpha[i] * y_i * x_i; ``v`` is their running sum
    scaled by 1/(lam*n) and ``w`` is the conjugate-gradient map of ``v``
    (maintained by the solver after every step).
    """

    alpha: np.ndarray
    v: np.ndarray
    w: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n: int, dim: int) -> "DualState":
        return cls(np.zeros(n), np.zeros(dim), np.zeros(dim), 0)

    def recompute_v(self, dataset: LabeledDataset, lam: float) -> np.ndarray:
        coef = self.alpha * dataset.labels / (lam * dataset.n)
        return np.asarray(dataset.matrix.T @ coef).ravel()

    def check_v(self, dataset: LabeledDataset, lam: float, rtol: float = 1e-9) -> None:
        fresh = self.recompute_v(dataset, lam)
        err = np.linalg.norm(fresh - self.v)
        scale = max(np.linalg.norm(fresh), 1.0)
        if err > rtol * scale:
            raise AssertionError(
                f"incremental accumulator drifted from recomputation: {err / scale:.3e}"
            )


__all__ = [
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
    "LOSS_KINDS",
    "REG_KINDS",
]
