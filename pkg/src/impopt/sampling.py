"""Sampling distributions over training examples with O(1) weighted draws.

Each builder returns an immutable :class:`SamplingDistribution` holding the
probability vector and a precomputed alias table (Vose construction), so a
draw costs two uniforms and two table lookups regardless of n.  All builders
floor exact-zero weights at ``zero_floor`` and renormalize: the importance
weight 1/(n*p_i) must stay finite for every index that can be drawn.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ZERO_FLOOR = 1e-9

KINDS = ("uniform", "lipschitz", "smoothness", "sdca_smooth", "gradient_norm")


@dataclass(frozen=True)
class SamplingDistribution:
    p: np.ndarray
    kind: str
    accept: np.ndarray  # per-slot acceptance probability
    alias: np.ndarray   # per-slot fallback index

    def __post_init__(self):
        for arr in (self.p, self.accept, self.alias):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.p.shape[0])

    def implied_mass(self) -> np.ndarray:
        """Probability of each index as actually realized by the alias table."""
        mass = self.accept.copy()
        np.add.at(mass, self.alias, 1.0 - self.accept)
        return mass / self.n


def _build_alias(p: np.ndarray):
    n = p.shape[0]
    scaled = p * n
    accept = np.ones(n)
    alias = np.arange(n, dtype=np.int64)
    small = [i for i in range(n) if scaled[i] < 1.0]
    large = [i for i in range(n) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        g = large.pop()
        accept[s] = scaled[s]
        alias[s] = g
        scaled[g] -= 1.0 - scaled[s]
        if scaled[g] < 1.0:
            small.append(g)
        else:
            large.append(g)
    # leftovers are 1.0 up to roundoff
    for i in small:
        accept[i] = 1.0
    for i in large:
        accept[i] = 1.0
    return accept, alias


def _finish(weights: np.ndarray, kind: str, zero_floor: float) -> SamplingDistribution:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-d vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValueError("all weights are zero; no distribution can be formed")
    p = w / total
    if zero_floor > 0:
        zero = p == 0.0
        if zero.any():
            p = np.where(zero, zero_floor, p)
            p = p / p.sum()
    accept, alias = _build_alias(p)
    return SamplingDistribution(p=p, kind=kind, accept=accept, alias=alias)


def build_uniform(n: int) -> SamplingDistribution:
    """p_i = 1/n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _finish(np.ones(n), "uniform", 0.0)


def build_lipschitz(bounds, zero_floor: float = ZERO_FLOOR) -> SamplingDistribution:
    """p_i proportional to a per-example gradient-norm bound."""
    return _finish(np.asarray(bounds, dtype=np.float64), "lipschitz", zero_floor)


def build_smoothness(gamma, zero_floor: float = ZERO_FLOOR) -> SamplingDistribution:
    """p_i proportional to 1/gamma_i (the per-example curvature)."""
    g = np.asarray(gamma, dtype=np.float64)
    if np.any(g <= 0):
        raise ValueError("smoothness constants gamma must all be positive")
    return _finish(1.0 / g, "smoothness", zero_floor)


def build_gradient_norm(norms, zero_floor: float = ZERO_FLOOR) -> SamplingDistribution:
    """p_i proportional to the current per-example gradient norm (oracle mode)."""
    return _finish(np.asarray(norms, dtype=np.float64), "gradient_norm", zero_floor)


def build_sdca_smooth(gamma, lam: float, n: int, rnorm: float = 1.0):
    """Distribution and step fraction for the smooth-loss dual ascent.

    Returns ``(dist, s)`` with p_i = (1 + c_i) / (n + sum_j c_j) and
    s = n / (n + sum_j c_j), where c_i = rnorm^2 / (lam * n * gamma_i).
    The induced per-coordinate fraction s/(n*p_i) = lam*n*gamma_i /
    (rnorm^2 + lam*n*gamma_i) always lies in [0, 1].
    """
    g = np.asarray(gamma, dtype=np.float64)
    if g.ndim != 1 or g.shape[0] != n:
        raise ValueError("gamma must be a vector of length n")
    if not (lam > 0 and n >= 1 and rnorm > 0):
        raise ValueError("lam, n and rnorm must be positive")
    if np.any(g <= 0):
        raise ValueError("smoothness constants gamma must all be positive")
    c = (rnorm * rnorm) / (lam * n * g)
    denom = n + c.sum()
    p = (1.0 + c) / denom
    s = n / denom
    accept, alias = _build_alias(p)
    return SamplingDistribution(p=p, kind="sdca_smooth", accept=accept, alias=alias), float(s)


def draw(dist: SamplingDistribution, rng: np.random.Generator) -> int:
    """Sample one index i with probability p_i."""
    n = dist.n
    slot = min(int(rng.random() * n), n - 1)
    if rng.random() < dist.accept[slot]:
        return slot
    return int(dist.alias[slot])


def draw_many(dist: SamplingDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized version of :func:`draw` returning ``size`` indices."""
    n = dist.n
    r1 = rng.random(size)
    r2 = rng.random(size)
    slot = np.minimum((r1 * n).astype(np.int64), n - 1)
    return np.where(r2 < dist.accept[slot], slot, dist.alias[slot])


__all__ = [
    "SamplingDistribution",
    "build_uniform",
    "build_lipschitz",
    "build_smoothness",
    "build_gradient_norm",
    "build_sdca_smooth",
    "draw",
    "draw_many",
    "ZERO_FLOOR",
    "KINDS",
]
