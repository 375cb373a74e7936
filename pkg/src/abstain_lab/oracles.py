"""Brute-force references.  Nothing here reuses the version-space code: the
hypothesis sets are enumerated directly and checked label by label."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    resolution: int = 1024

    def __post_init__(self):
        if self.resolution < 64:
            raise ValueError("grid resolution must be >= 64")

    def values(self) -> np.ndarray:
        return (np.arange(self.resolution) + 0.5) / self.resolution


@dataclass(frozen=True)
class TreeDesc:
    """Parent links only; hypotheses are rebuilt by walking them."""
    nodes: tuple
    parent: dict

    @classmethod
    def from_edges(cls, nodes, edges) -> "TreeDesc":
        return cls(tuple(int(v) for v in nodes), {int(c): int(p) for p, c in edges})


def _endpoint_candidates(coords: Sequence[float], grid: GridSpec) -> np.ndarray:
    """Distinct coordinates plus one grid value inside every gap around them
    (and the ends 0, 1)."""
    g = grid.values()
    cs = np.unique(np.concatenate([np.asarray(coords, dtype=float), [0.0, 1.0]]))
    extra = []
    edges = np.concatenate([[-np.inf], cs, [np.inf]])
    for a, b in zip(edges[:-1], edges[1:]):
        inside = g[(g > a) & (g < b)]
        if len(inside):
            extra.append(inside[len(inside) // 2])
    return np.unique(np.concatenate([cs, extra]))


def _hypothesis_matrix(cls, pts: list, grid: GridSpec) -> np.ndarray:
    """Bool matrix (hypotheses x points) of every hypothesis' labels on pts,
    the all-zero hypothesis included where the class has it."""
    if isinstance(cls, TreeDesc):
        rows = [np.zeros(len(pts), dtype=bool)]
        for v in cls.nodes:
            path = {v}
            u = v
            while u in cls.parent:
                u = cls.parent[u]
                path.add(u)
            rows.append(np.array([p in path for p in pts]))
        return np.array(rows)
    if cls == "thresholds":
        x = np.array(pts, dtype=float)
        a = _endpoint_candidates(x, grid)
        return x[None, :] <= a[:, None]
    if cls == "intervals":
        x = np.array(pts, dtype=float)
        c = _endpoint_candidates(x, grid)
        lo, hi = np.meshgrid(c, c, indexing="ij")
        keep = lo <= hi
        lo, hi = lo[keep], hi[keep]
        lab = (x[None, :] >= lo[:, None]) & (x[None, :] <= hi[:, None])
        return np.vstack([np.zeros((1, len(pts)), dtype=bool), lab])
    if isinstance(cls, tuple) and cls[0] == "rectangles":
        p = cls[1]
        X = np.array(pts, dtype=float).reshape(len(pts), p)
        lab = np.ones((1, len(pts)), dtype=bool)
        for i in range(p):
            c = _endpoint_candidates(X[:, i], grid)
            lo, hi = np.meshgrid(c, c, indexing="ij")
            keep = lo <= hi
            lo, hi = lo[keep], hi[keep]
            li = (X[None, :, i] >= lo[:, None]) & (X[None, :, i] <= hi[:, None])
            # distinct point-subsets per axis are enough for the product
            li = np.unique(li, axis=0)
            lab = (lab[:, None, :] & li[None, :, :]).reshape(-1, len(pts))
            lab = np.unique(lab, axis=0)
        return np.vstack([np.zeros((1, len(pts)), dtype=bool), lab])
    raise ValueError(f"unknown class descriptor {cls!r}")


def _key(x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return tuple(float(v) for v in x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def shatters_bruteforce(cls, data, points, grid: GridSpec = GridSpec()) -> bool:
    data = [(_key(x), int(y)) for x, y in data]
    qs = [_key(q) for q in points]
    pts = list(dict.fromkeys([x for x, _ in data] + qs))
    H = _hypothesis_matrix(cls, pts, grid)
    idx = {p: i for i, p in enumerate(pts)}
    ok = np.ones(len(H), dtype=bool)
    for x, y in data:
        ok &= H[:, idx[x]] == bool(y)
    qi = [idx[q] for q in qs]
    for labels in itertools.product((False, True), repeat=len(qs)):
        if not np.any(ok & np.all(H[:, qi] == np.array(labels), axis=1)):
            return False
    return True


def gamma_bruteforce(cls, S, ref, grid: GridSpec = GridSpec(), base: Optional[tuple] = None):
    """Evaluate the leave-one-out set comprehension literally.  `ref` maps a
    point to its reference label; `base` optionally pins one extra (x, y)
    constraint on the class itself."""
    S = list(dict.fromkeys((_key(x), int(y)) for x, y in S))
    pts = list(dict.fromkeys([x for x, _ in S] + ([_key(base[0])] if base else [])))
    if not pts:
        return 0, set()
    H = _hypothesis_matrix(cls, pts, grid)
    idx = {p: i for i, p in enumerate(pts)}
    cls_ok = np.ones(len(H), dtype=bool)
    if base is not None:
        cls_ok &= H[:, idx[_key(base[0])]] == bool(base[1])
    S_ref = [(x, y) for x, y in S if y != ref(x)]
    members = set()
    for x, y in S:
        ok = cls_ok.copy()
        for x2, y2 in S_ref:
            if (x2, y2) != (x, y):
                ok &= H[:, idx[x2]] == bool(y2)
        vals = H[ok, idx[x]]
        if vals.any() and not vals.all():
            members.add(x)
    return len(members), members


def cal_abstention_expectation(n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(sum(2.0 / i for i in range(1, n + 1)))


# ---------------------------------------------------------------------------
# randomized agreement checks between the oracles and the primary code

def _lattice(rng, size=None, lo=0, hi=64):
    return rng.integers(lo, hi + 1, size=size) / 64.0


def _random_instance(rng):
    """(descriptor, full version space, labelled data, query points)."""
    from .hypotheses import (IntervalVS, RectangleVS, ThresholdVS, TreeClassVS,
                             random_tree)
    kind = rng.integers(5)
    n_data = int(rng.integers(0, 9))
    if kind == 0:
        desc, vs, a = "thresholds", ThresholdVS(), _lattice(rng)
        f = lambda x: int(x <= a)
        draw = lambda: float(_lattice(rng))
    elif kind == 1:
        desc, vs = "intervals", IntervalVS()
        a, b = np.sort(_lattice(rng, 2))
        empty = rng.random() < 0.15
        f = lambda x: 0 if empty else int(a <= x <= b)
        draw = lambda: float(_lattice(rng))
    elif kind == 2:
        tree = random_tree(int(rng.integers(2, 14)), rng)
        ref = tree.path_to(int(rng.integers(1, len(tree) + 1))) if rng.random() < 0.5 else []
        desc = TreeDesc.from_edges(tree.nodes, tree.edges)
        vs = TreeClassVS(tree, ref)
        tgt = set(tree.path_to(int(rng.integers(1, len(tree) + 1)))) if rng.random() < 0.9 else set()
        f = lambda x: int(x in tgt)
        draw = lambda: int(rng.integers(1, len(tree) + 1))
    else:
        p = 1 if kind == 3 else 2
        desc, vs = ("rectangles", p), RectangleVS(p)
        lo = _lattice(rng, p, -8, 56)
        hi = lo + _lattice(rng, p, 0, 40)
        f = lambda x: int(np.all((np.array(x) >= lo) & (np.array(x) <= hi)))
        draw = lambda: tuple(float(v) for v in _lattice(rng, p, -16, 80))
    data = []
    for _ in range(n_data):
        x = draw()
        data.append((x, f(x)))
    if data and rng.random() < 0.1:
        x, y = data[0]
        data[0] = (x, 1 - y)
    k = int(rng.integers(1, vs.vc_dim + 2))
    pts = []
    for _ in range(200):
        if len(pts) == k:
            break
        x = draw()
        if x not in pts:
            pts.append(x)
    return desc, vs, data, pts


def check_shatters(n: int = 1000, seed: int = 0, grid: GridSpec = GridSpec()) -> dict:
    rng = np.random.default_rng(seed)
    mismatches = []
    for i in range(n):
        desc, vs, data, pts = _random_instance(rng)
        got = vs.restrict_all(data).shatters(pts)
        want = shatters_bruteforce(desc, data, pts, grid)
        if got != want:
            mismatches.append({"instance": i, "class": str(desc), "data": data,
                               "points": pts, "primary": got, "oracle": want})
    return {"check": "shatters", "instances": n, "mismatches": len(mismatches),
            "examples": mismatches[:5]}


def _random_gamma_instance(rng):
    from .hypotheses import IntervalVS, ThresholdVS, TreeClassVS, random_tree
    kind = rng.integers(3)
    n = int(rng.integers(0, 13))
    if kind == 0:
        tree = random_tree(int(rng.integers(2, 14)), rng)
        ref_path = tree.path_to(int(rng.integers(1, len(tree) + 1))) if rng.random() < 0.5 else []
        vs = TreeClassVS(tree, ref_path)
        desc = TreeDesc.from_edges(tree.nodes, tree.edges)
        tgt = set(tree.path_to(int(rng.integers(1, len(tree) + 1))))
        pts = [int(v) for v in rng.integers(1, len(tree) + 1, size=n)]
        S = [(x, int(x in tgt)) for x in pts]
        ref_set = set(ref_path)
        ref = lambda x: int(x in ref_set)
        xb = int(rng.integers(1, len(tree) + 1))
    else:
        a, b = np.sort(_lattice(rng, 2, 1, 64))
        if kind == 1:
            desc, vs, lab = "thresholds", ThresholdVS(), (lambda x: int(x <= a))
        else:
            desc, vs, lab = "intervals", IntervalVS(), (lambda x: int(a <= x <= b))
        pts = [float(v) for v in _lattice(rng, n, 1, 64)]
        S = [(x, lab(x)) for x in pts]
        ref = lambda x: 0
        xb = float(_lattice(rng, None, 1, 64))
    return desc, vs, S, ref, xb


def check_gamma(n: int = 1000, seed: int = 0, grid: GridSpec = GridSpec()) -> dict:
    from .hypotheses import gamma
    rng = np.random.default_rng(seed)
    mismatches = []
    for i in range(n):
        desc, vs, S, ref, xb = _random_gamma_instance(rng)
        if rng.random() < 0.5:
            got = gamma(vs.restrict(xb, ref(xb)), S)
            want = gamma_bruteforce(desc, S, ref, grid, base=(xb, ref(xb)))
        else:
            got = gamma(vs, S)
            want = gamma_bruteforce(desc, S, ref, grid)
        if got != want:
            mismatches.append({"instance": i, "class": str(desc), "S": S,
                               "primary": [got[0], sorted(got[1])],
                               "oracle": [want[0], sorted(want[1])]})
    return {"check": "gamma", "instances": n, "mismatches": len(mismatches),
            "examples": mismatches[:5]}


def check_rho(n: int = 50, m: int = 100_000, seed: int = 0) -> dict:
    """Monte Carlo against exact shattering probabilities."""
    from .distributions import DiscreteTree, Uniform01, rho_k_exact, rho_k_mc
    from .hypotheses import IntervalVS, ThresholdVS, TreeClassVS, random_tree
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        kind = i % 4
        if kind == 0:
            a = rng.random()
            vs, dist, k = ThresholdVS(), Uniform01(), 1
            lab = lambda x: int(x <= a)
        elif kind in (1, 2):
            a, b = np.sort(rng.random(2))
            vs, dist, k = IntervalVS(), Uniform01(), kind
            lab = lambda x: int(a <= x <= b)
        else:
            tree = random_tree(int(rng.integers(3, 14)), rng)
            w = rng.dirichlet(np.ones(len(tree)))
            w[-1] = 1.0 - w[:-1].sum()
            vs, dist, k = TreeClassVS(tree), DiscreteTree(tree.nodes, w), 1
            tgt = set(tree.path_to(int(rng.integers(1, len(tree) + 1))))
            lab = lambda x: int(x in tgt)
        for _ in range(int(rng.integers(0, 5))):
            x = dist.sample(rng)
            vs = vs.restrict(x, lab(x))
        exact = rho_k_exact(vs, dist, k).value
        est = rho_k_mc(vs, dist, k, m, rng)
        err = abs(est.value - exact)
        ok = err <= 3 * est.stderr if est.stderr > 0 else err == 0.0
        rows.append({"vs": repr(vs), "k": k, "exact": exact, "mc": est.value,
                     "stderr": est.stderr, "ok": bool(ok)})
    bad = [r for r in rows if not r["ok"]]
    return {"check": "rho", "instances": n, "m": m, "mismatches": len(bad),
            "examples": bad[:5]}
