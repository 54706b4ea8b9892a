"""Dataset loading and generation: LIBSVM text files and synthetic problems.

LIBSVM lines look like ``label idx:val idx:val ...`` with 1-based, strictly
ascending indices.  ``#`` starts a comment, blank lines are skipped, and
``.gz`` paths are decompressed transparently.  Files using {0,1} labels are
normalized to {-1,+1}.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import LabeledDataset


class LibsvmFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _open_text(source):
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.suffix == ".gz":
            return gzip.open(path, "rt"), True
        return open(path, "r"), True
    return source, False


def parse_libsvm(source, dim: int | None = None) -> LabeledDataset:
    """Parse a path (gzip by extension) or an open text stream into a dataset."""
    stream, owned = _open_text(source)
    labels: list[float] = []
    indptr = [0]
    col_idx: list[int] = []
    col_val: list[float] = []
    max_index = 0
    try:
        for line_no, raw in enumerate(stream, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                labels.append(float(tokens[0]))
            except ValueError:
                raise LibsvmFormatError(line_no, f"bad label {tokens[0]!r}") from None
            prev = 0
            for token in tokens[1:]:
                idx_s, _, val_s = token.partition(":")
                if not val_s:
                    raise LibsvmFormatError(line_no, f"bad feature token {token!r}")
                try:
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError:
                    raise LibsvmFormatError(line_no, f"bad feature token {token!r}") from None
                if idx < 1:
                    raise LibsvmFormatError(line_no, f"index {idx} must be >= 1")
                if idx <= prev:
                    raise LibsvmFormatError(
                        line_no, f"indices must be strictly ascending (saw {idx} after {prev})"
                    )
                prev = idx
                if val != 0.0:
                    col_idx.append(idx - 1)
                    col_val.append(val)
            max_index = max(max_index, prev)
            indptr.append(len(col_idx))
    finally:
        if owned:
            stream.close()
    if not labels:
        raise ValueError("no examples found")
    if dim is None:
        dim = max(max_index, 1)
    elif dim < max_index:
        raise ValueError(f"dim override {dim} smaller than max index {max_index}")
    label_arr = np.array(labels)
    uniq = set(np.unique(label_arr))
    if uniq <= {0.0, 1.0} and 0.0 in uniq:
        label_arr = np.where(label_arr == 0.0, -1.0, 1.0)
    return LabeledDataset(
        np.array(indptr, dtype=np.int64),
        np.array(col_idx, dtype=np.int64),
        np.array(col_val),
        label_arr,
        dim,
    )


def write_libsvm(dataset: LabeledDataset, target) -> None:
    """Serialize back to LIBSVM text (1-based indices, shortest float repr)."""
    if isinstance(target, (str, Path)):
        path = Path(target)
        stream = gzip.open(path, "wt") if path.suffix == ".gz" else open(path, "w")
        owned = True
    else:
        stream, owned = target, False
    try:
        for i in range(dataset.n):
            lo, hi = dataset.indptr[i], dataset.indptr[i + 1]
            parts = [repr(float(dataset.labels[i]))]
            parts.extend(
                f"{int(dataset.indices[k]) + 1}:{float(dataset.values[k])!r}"
                for k in range(lo, hi)
            )
            stream.write(" ".join(parts) + "\n")
    finally:
        if owned:
            stream.close()


@dataclass(frozen=True)
class SyntheticSpec:
    """Linear-teacher classification data with controllable feature-norm skew."""

    n: int
    d: int
    nnz_per_example: int = 10
    norm_skew: str = "lognormal"  # uniform | lognormal
    sigma: float = 1.0
    noise_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")
        if not 1 <= self.nnz_per_example <= self.d:
            raise ValueError("nnz_per_example must lie in [1, d]")
        if self.norm_skew not in ("uniform", "lognormal"):
            raise ValueError("norm_skew must be 'uniform' or 'lognormal'")
        if not 0.0 <= self.noise_rate < 1.0:
            raise ValueError("noise_rate must lie in [0, 1)")


def generate_synthetic(spec: SyntheticSpec) -> LabeledDataset:
    """Deterministic dataset: unit directions scaled by skewed norms, teacher labels."""
    rng = np.random.default_rng(spec.seed)
    teacher = rng.standard_normal(spec.d)
    nnz = spec.nnz_per_example
    if spec.norm_skew == "uniform":
        norms = rng.uniform(0.5, 1.5, size=spec.n)
    else:
        norms = np.exp(spec.sigma * rng.standard_normal(spec.n))
    indptr = np.arange(spec.n + 1, dtype=np.int64) * nnz
    indices = np.empty(spec.n * nnz, dtype=np.int64)
    values = np.empty(spec.n * nnz)
    labels = np.empty(spec.n)
    for i in range(spec.n):
        cols = np.sort(rng.choice(spec.d, size=nnz, replace=False))
        direction = rng.standard_normal(nnz)
        scale = np.linalg.norm(direction)
        while scale == 0.0:
            direction = rng.standard_normal(nnz)
            scale = np.linalg.norm(direction)
        vals = direction * (norms[i] / scale)
        indices[i * nnz:(i + 1) * nnz] = cols
        values[i * nnz:(i + 1) * nnz] = vals
        score = float(np.dot(teacher[cols], vals))
        labels[i] = 1.0 if score >= 0 else -1.0
    flips = rng.random(spec.n) < spec.noise_rate
    labels[flips] *= -1.0
    return LabeledDataset(indptr, indices, values, labels, spec.d)


def split(dataset: LabeledDataset, test_fraction: float, seed: int = 0):
    """Deterministic shuffle split into (train, test)."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    n_test = int(round(dataset.n * test_fraction))
    if n_test < 1 or n_test >= dataset.n:
        raise ValueError(f"split of {dataset.n} examples at {test_fraction} is degenerate")
    perm = np.random.default_rng(seed).permutation(dataset.n)
    return dataset.subset(perm[n_test:]), dataset.subset(perm[:n_test])


__all__ = [
    "LibsvmFormatError",
    "parse_libsvm",
    "write_libsvm",
    "SyntheticSpec",
    "generate_synthetic",
    "split",
]
