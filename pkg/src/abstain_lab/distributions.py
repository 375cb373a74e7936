"""Known marginals, region masses and the k-point shattering probability."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import UseMonteCarlo
from .hypotheses import (IntervalUnion, IntervalVS, NodeSet, RectangleRegion,
                         RectangleVS, ThresholdVS, Tree, TreeClassVS, VersionSpace)


@dataclass(frozen=True)
class Uniform01:
    atomless = True

    def cdf(self, x):
        return np.clip(x, 0.0, 1.0)

    def ppf(self, u):
        return np.clip(u, 0.0, 1.0)

    def in_support(self, x) -> bool:
        return isinstance(x, (float, int)) and not isinstance(x, bool) and 0.0 <= x <= 1.0

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.random())

    def sample_many(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.random(shape)


@dataclass(frozen=True)
class ProductUniform:
    p: int = 2
    atomless = True

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")

    def in_support(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == self.p
                and all(0.0 <= v <= 1.0 for v in x))

    def sample(self, rng: np.random.Generator) -> tuple:
        return tuple(float(v) for v in rng.random(self.p))

    def sample_many(self, rng: np.random.Generator, shape) -> np.ndarray:
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        return rng.random(shape + (self.p,))


class DiscreteTree:
    """Point masses on tree nodes."""
    atomless = False

    def __init__(self, nodes: Sequence[int], weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if len(nodes) != len(w):
            raise ValueError("one weight per node required")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        self.nodes = np.asarray([int(v) for v in nodes])
        self.weights = w
        self._cum = np.cumsum(w)
        self._cum[-1] = 1.0
        self._w = dict(zip(self.nodes.tolist(), w.tolist()))

    @classmethod
    def uniform(cls, tree: Tree) -> "DiscreteTree":
        n = len(tree)
        w = np.full(n, 1.0 / n)
        w[-1] = 1.0 - w[:-1].sum()
        return cls(tree.nodes, w)

    def weight(self, v: int) -> float:
        return self._w.get(int(v), 0.0)

    def in_support(self, x) -> bool:
        return isinstance(x, int) and self.weight(x) > 0

    def sample(self, rng: np.random.Generator) -> int:
        return int(self.nodes[np.searchsorted(self._cum, rng.random(), side="right")])

    def sample_many(self, rng: np.random.Generator, shape) -> np.ndarray:
        u = rng.random(shape)
        return self.nodes[np.searchsorted(self._cum, u, side="right")]


@dataclass(frozen=True)
class ShatterEstimate:
    value: float
    stderr: float = 0.0
    method: str = "exact"
    m: Optional[int] = None


def sample(dist, rng: np.random.Generator):
    return dist.sample(rng)


def region_mass(dist, region) -> float:
    if isinstance(region, IntervalUnion):
        if not hasattr(dist, "cdf"):
            raise TypeError("interval regions need a distribution on [0, 1]")
        return float(sum(max(0.0, float(dist.cdf(b) - dist.cdf(a))) for a, b in region.intervals))
    if isinstance(region, NodeSet):
        return float(sum(dist.weight(v) for v in region.nodes))
    if isinstance(region, RectangleRegion):
        raise UseMonteCarlo("no closed form for the rectangle disagreement region")
    raise TypeError(f"unknown region {region!r}")


def rho_k_exact(vs: VersionSpace, dist, k: int) -> ShatterEstimate:
    if k < 1:
        raise ValueError("k must be >= 1")
    if vs.is_empty or k > vs.vc_dim:
        return ShatterEstimate(0.0)
    if isinstance(vs, (ThresholdVS, TreeClassVS)):
        return ShatterEstimate(region_mass(dist, vs.dis_region()))
    if isinstance(vs, IntervalVS):
        if not getattr(dist, "atomless", False):
            raise UseMonteCarlo("interval shattering needs an atomless distribution")
        if not vs.has_positive:
            if k == 1:
                return ShatterEstimate(1.0)
            return ShatterEstimate(float(sum(
                float(dist.cdf(b) - dist.cdf(a)) ** 2 for a, b in vs.gaps())))
        m_left = float(dist.cdf(vs.pos_min) - dist.cdf(max(vs.left, 0.0)))
        m_right = float(dist.cdf(min(vs.right, 1.0)) - dist.cdf(vs.pos_max))
        value = m_left + m_right if k == 1 else 2.0 * m_left * m_right
        return ShatterEstimate(value)
    raise UseMonteCarlo(f"no exact shattering probability for {type(vs).__name__}, k={k}")


def _draw_tuples(dist, k: int, m: int, rng: np.random.Generator):
    """m tuples of k points; returns (tuples, valid mask)."""
    tup = dist.sample_many(rng, (m, k))
    if k == 1:
        return tup, np.ones(m, dtype=bool)
    flat = tup.reshape(m, k, -1)

    def dup_rows(arr):
        d = np.zeros(len(arr), dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                d |= np.all(arr[:, i] == arr[:, j], axis=1)
        return d

    dup = dup_rows(flat)
    if not dist.atomless:
        return tup, ~dup
    while dup.any():
        idx = np.flatnonzero(dup)
        tup[idx] = dist.sample_many(rng, (len(idx), k))
        dup[idx] = dup_rows(tup[idx].reshape(len(idx), k, -1))
    return tup, np.ones(m, dtype=bool)


def rho_k_mc(vs: VersionSpace, dist, k: int, m: int, rng: np.random.Generator) -> ShatterEstimate:
    if m < 1:
        raise ValueError("m must be >= 1")
    if vs.is_empty:
        return ShatterEstimate(0.0, 0.0, "monte_carlo", m)
    tup, valid = _draw_tuples(dist, k, m, rng)
    hits = vs.shatters_batch(tup) & valid
    v = float(hits.mean())
    return ShatterEstimate(v, math.sqrt(v * (1.0 - v) / m), "monte_carlo", m)


def rho_k(vs: VersionSpace, dist, k: int, mc_samples: int = 4096,
          rng: Optional[np.random.Generator] = None, method: str = "auto") -> ShatterEstimate:
    """Exact when supported, Monte Carlo otherwise; method="mc" forces Monte Carlo."""
    if method == "mc":
        if rng is None:
            raise ValueError("Monte Carlo estimation needs an rng")
        return rho_k_mc(vs, dist, k, mc_samples, rng)
    if method != "auto":
        raise ValueError(f"unknown rho method {method!r}")
    try:
        return rho_k_exact(vs, dist, k)
    except UseMonteCarlo:
        if rng is None:
            raise
        return rho_k_mc(vs, dist, k, mc_samples, rng)
