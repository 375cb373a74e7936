"""Version spaces for thresholds, intervals, tree classes and rectangles.

Every version space is a value: restrict returns a new object and never
mutates the receiver.  An empty version space is a legal, flagged state.
"""
from __future__ import annotations

import bisect
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import LabeledSet, check_label, normalize_point
from .errors import DuplicatePoints, EmptyVersionSpace, InconsistentSample

INF = math.inf


# ---------------------------------------------------------------------------
# region descriptors (consumed by distributions.region_mass)

@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint sub-intervals of [0, 1]; endpoint closure is irrelevant for mass."""
    intervals: tuple = ()


@dataclass(frozen=True)
class NodeSet:
    nodes: frozenset = frozenset()


@dataclass(frozen=True)
class RectangleRegion:
    vs: "RectangleVS"


# ---------------------------------------------------------------------------

def _check_scalar(x) -> float:
    x = normalize_point(x)
    if not isinstance(x, (float, int)) or not 0.0 <= x <= 1.0:
        raise ValueError(f"scalar point must lie in [0, 1], got {x!r}")
    return float(x)


def _distinct(points: Sequence) -> list:
    pts = [normalize_point(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePoints(f"points are not pairwise distinct: {pts}")
    if not pts:
        raise ValueError("need at least one point")
    return pts


class VersionSpace:
    """Shared behaviour; subclasses supply feasibility and the primitives."""

    vc_dim: int = 0
    empty: bool = False

    @property
    def is_empty(self) -> bool:
        return self.empty

    def _require(self):
        if self.empty:
            raise EmptyVersionSpace(type(self).__name__)

    def check_point(self, x):
        raise NotImplementedError

    def full(self) -> "VersionSpace":
        raise NotImplementedError

    def restrict(self, x, y) -> "VersionSpace":
        raise NotImplementedError

    def dis_contains(self, x) -> bool:
        raise NotImplementedError

    def consistent_label(self, x) -> Optional[int]:
        raise NotImplementedError

    def feasible(self, positives: Sequence, negatives: Sequence) -> bool:
        """Does some hypothesis in the space realize the given extra labels?"""
        raise NotImplementedError

    def reference_label(self, x) -> int:
        return 0

    def restrict_all(self, pairs: Iterable) -> "VersionSpace":
        vs = self
        for x, y in pairs:
            vs = vs.restrict(x, y)
            if vs.empty:
                break
        return vs

    def shatters(self, points: Sequence) -> bool:
        pts = _distinct(points)
        pts = [self.check_point(p) for p in pts]
        if self.empty or len(pts) > self.vc_dim:
            return False
        for labels in itertools.product((0, 1), repeat=len(pts)):
            pos = [p for p, l in zip(pts, labels) if l]
            neg = [p for p, l in zip(pts, labels) if not l]
            if not self.feasible(pos, neg):
                return False
        return True


def dis_contains(vs: VersionSpace, x) -> bool:
    return vs.dis_contains(x)


def restrict(vs: VersionSpace, x, y) -> VersionSpace:
    return vs.restrict(x, y)


def shatters(vs: VersionSpace, points: Sequence) -> bool:
    return vs.shatters(points)


def consistent_label(vs: VersionSpace, x) -> Optional[int]:
    return vs.consistent_label(x)


# ---------------------------------------------------------------------------
# thresholds f_a(x) = 1{x <= a}, a in [0, 1]

@dataclass(frozen=True)
class ThresholdVS(VersionSpace):
    """Consistent parameters a in [lo, hi], or [lo, hi) when hi_open."""
    lo: float = 0.0
    hi: float = 1.0
    hi_open: bool = False
    empty: bool = False

    vc_dim = 1

    def check_point(self, x) -> float:
        return _check_scalar(x)

    def full(self) -> "ThresholdVS":
        return ThresholdVS()

    def contains_param(self, a: float) -> bool:
        if self.empty:
            return False
        return self.lo <= a and (a < self.hi if self.hi_open else a <= self.hi)

    def restrict(self, x, y) -> "ThresholdVS":
        x = self.check_point(x)
        y = check_label(y)
        if self.empty:
            return self
        lo, hi, op = self.lo, self.hi, self.hi_open
        if y == 1:
            lo = max(lo, x)
        else:
            if x <= lo:
                return ThresholdVS(lo, hi, op, True)
            if x < hi or (x == hi and not op):
                hi, op = x, True
        if lo > hi or (lo == hi and op):
            return ThresholdVS(lo, hi, op, True)
        return ThresholdVS(lo, hi, op)

    def dis_contains(self, x) -> bool:
        self._require()
        x = self.check_point(x)
        return self.lo < x and (x < self.hi if self.hi_open else x <= self.hi)

    def consistent_label(self, x) -> Optional[int]:
        self._require()
        x = self.check_point(x)
        if x <= self.lo:
            return 1
        if self.dis_contains(x):
            return None
        return 0

    def feasible(self, positives, negatives) -> bool:
        if self.empty:
            return False
        need_lo = max([self.lo] + list(positives))
        # a must satisfy a >= need_lo and a < every negative
        if negatives and min(negatives) <= need_lo:
            return False
        return self.contains_param(need_lo)

    def dis_region(self) -> IntervalUnion:
        if self.empty or self.lo >= self.hi:
            return IntervalUnion(())
        return IntervalUnion(((self.lo, self.hi),))

    def shatters_batch(self, tuples: np.ndarray) -> np.ndarray:
        tuples = np.asarray(tuples, dtype=float)
        m, k = tuples.shape[:2]
        if self.empty or k > 1:
            return np.zeros(m, dtype=bool)
        x = tuples[:, 0]
        upper = x < self.hi if self.hi_open else x <= self.hi
        return (x > self.lo) & upper


# ---------------------------------------------------------------------------
# intervals f(x) = 1{a <= x <= b}; the all-zero hypothesis is included

@dataclass(frozen=True)
class IntervalVS(VersionSpace):
    """Before any positive: the sorted negatives.  After: the positive hull
    [pos_min, pos_max] and the nearest negatives left/right of it, which
    together give the feasible endpoint ranges a in (left, pos_min],
    b in [pos_max, right)."""
    negatives: tuple = ()
    pos_min: Optional[float] = None
    pos_max: Optional[float] = None
    left: float = -INF
    right: float = INF
    empty: bool = False

    vc_dim = 2

    def check_point(self, x) -> float:
        return _check_scalar(x)

    def full(self) -> "IntervalVS":
        return IntervalVS()

    @property
    def has_positive(self) -> bool:
        return self.pos_min is not None

    def _emptied(self) -> "IntervalVS":
        return IntervalVS(self.negatives, self.pos_min, self.pos_max,
                          self.left, self.right, True)

    def restrict(self, x, y) -> "IntervalVS":
        x = self.check_point(x)
        y = check_label(y)
        if self.empty:
            return self
        if self.has_positive:
            if y == 1:
                if x <= self.left or x >= self.right:
                    return self._emptied()
                return IntervalVS((), min(self.pos_min, x), max(self.pos_max, x),
                                  self.left, self.right)
            if self.pos_min <= x <= self.pos_max:
                return self._emptied()
            if x < self.pos_min:
                return IntervalVS((), self.pos_min, self.pos_max, max(self.left, x), self.right)
            return IntervalVS((), self.pos_min, self.pos_max, self.left, min(self.right, x))
        negs = self.negatives
        i = bisect.bisect_left(negs, x)
        present = i < len(negs) and negs[i] == x
        if y == 0:
            if present:
                return self
            return IntervalVS(negs[:i] + (x,) + negs[i:])
        if present:
            return self._emptied()
        left = negs[i - 1] if i > 0 else -INF
        right = negs[i] if i < len(negs) else INF
        return IntervalVS((), x, x, left, right)

    def dis_contains(self, x) -> bool:
        self._require()
        x = self.check_point(x)
        if not self.has_positive:
            i = bisect.bisect_left(self.negatives, x)
            return not (i < len(self.negatives) and self.negatives[i] == x)
        return self.left < x < self.pos_min or self.pos_max < x < self.right

    def consistent_label(self, x) -> Optional[int]:
        self._require()
        x = self.check_point(x)
        if self.has_positive and self.pos_min <= x <= self.pos_max:
            return 1
        return None if self.dis_contains(x) else 0

    def _stored_negatives(self) -> list:
        if self.has_positive:
            return [v for v in (self.left, self.right) if math.isfinite(v)]
        return list(self.negatives)

    def feasible(self, positives, negatives) -> bool:
        if self.empty:
            return False
        pos = list(positives)
        if self.has_positive:
            pos += [self.pos_min, self.pos_max]
        if not pos:
            return True
        lo, hi = min(pos), max(pos)
        for v in itertools.chain(self._stored_negatives(), negatives):
            if lo <= v <= hi:
                return False
        return True

    def dis_region(self) -> IntervalUnion:
        if self.empty:
            return IntervalUnion(())
        if not self.has_positive:
            return IntervalUnion(((0.0, 1.0),))
        out = []
        a = max(self.left, 0.0)
        if a < self.pos_min:
            out.append((a, self.pos_min))
        b = min(self.right, 1.0)
        if self.pos_max < b:
            out.append((self.pos_max, b))
        return IntervalUnion(tuple(out))

    def gaps(self) -> list:
        """Open gaps between consecutive negatives (with 0 and 1 as ends)."""
        edges = [0.0] + [v for v in self.negatives] + [1.0]
        return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]

    def shatters_batch(self, tuples: np.ndarray) -> np.ndarray:
        """Labeling-by-labeling feasibility, vectorised over rows."""
        tuples = np.asarray(tuples, dtype=float)
        m, k = tuples.shape[:2]
        ok = np.ones(m, dtype=bool)
        if self.empty or k > self.vc_dim:
            return np.zeros(m, dtype=bool)
        if k > 1:
            srt = np.sort(tuples, axis=1)
            ok &= np.all(np.diff(srt, axis=1) > 0, axis=1)
        stored = np.array(sorted(self._stored_negatives()), dtype=float)
        for labels in itertools.product((0, 1), repeat=k):
            lab = np.array(labels, dtype=bool)
            if not lab.any() and not self.has_positive:
                continue
            lo = np.full(m, INF)
            hi = np.full(m, -INF)
            if self.has_positive:
                lo[:] = self.pos_min
                hi[:] = self.pos_max
            if lab.any():
                lo = np.minimum(lo, tuples[:, lab].min(axis=1))
                hi = np.maximum(hi, tuples[:, lab].max(axis=1))
            good = np.searchsorted(stored, hi, side="right") == np.searchsorted(stored, lo, side="left")
            for j in np.flatnonzero(~lab):
                good &= ~((tuples[:, j] >= lo) & (tuples[:, j] <= hi))
            ok &= good
        return ok


# ---------------------------------------------------------------------------
# tree classes: indicators of root paths, one hypothesis per node plus the
# all-zero function, optionally XOR-ed with a reference hypothesis

class Tree:
    """Finite rooted tree with integer node ids."""

    def __init__(self, nodes: Sequence[int], edges: Sequence[Sequence[int]]):
        self.nodes = [int(v) for v in nodes]
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids")
        node_set = set(self.nodes)
        self.parent: dict = {}
        for p, c in edges:
            p, c = int(p), int(c)
            if p not in node_set or c not in node_set:
                raise ValueError(f"edge ({p}, {c}) mentions an unknown node")
            if c in self.parent:
                raise ValueError(f"node {c} has two parents")
            self.parent[c] = p
        roots = [v for v in self.nodes if v not in self.parent]
        if len(roots) != 1:
            raise ValueError(f"expected one root, found {roots}")
        self.root = roots[0]
        self.children: dict = {v: [] for v in self.nodes}
        for c, p in self.parent.items():
            self.children[p].append(c)
        self.depth = {}
        for v in self.nodes:
            d, u, seen = 0, v, set()
            while u in self.parent:
                if u in seen:
                    raise ValueError("cycle in tree")
                seen.add(u)
                u = self.parent[u]
                d += 1
            self.depth[v] = d

    def __len__(self):
        return len(self.nodes)

    def path_to(self, v: int) -> list:
        out = [v]
        while out[-1] in self.parent:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def is_ancestor_or_equal(self, u: int, v: int) -> bool:
        while True:
            if u == v:
                return True
            if v not in self.parent:
                return False
            v = self.parent[v]

    @property
    def edges(self) -> list:
        return [[p, c] for c, p in sorted(self.parent.items())]

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "edges": self.edges}


def random_tree(n: int, rng: np.random.Generator) -> Tree:
    """Random recursive tree on nodes 1..n rooted at 1."""
    edges = [[int(rng.integers(1, i)), i] for i in range(2, n + 1)]
    return Tree(list(range(1, n + 1)), edges)


def load_tree(source) -> tuple:
    """Read a tree descriptor (path, JSON string or dict); returns (tree, target_path)."""
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text) as fh:
                doc = json.load(fh)
    tree = Tree(doc["nodes"], doc["edges"])
    target = [int(v) for v in doc.get("target_path", [])]
    if target:
        if target != tree.path_to(target[-1]):
            raise ValueError(f"target_path {target} is not a root path")
    return tree, target


class TreeClassVS(VersionSpace):
    """Explicit finite hypothesis set stored as bitmasks over hypotheses.

    Hypothesis 0 is the all-zero function; hypothesis i >= 1 is the indicator
    of the root path to tree.nodes[i-1].  With a reference path r, every
    hypothesis is XOR-ed with 1{r} so the reference becomes all-zero; labels
    are translated on the way in and out, so callers always see raw labels.
    """

    vc_dim = 1
    max_nodes = 64

    def __init__(self, tree: Tree, reference_path: Sequence[int] = (),
                 alive: Optional[int] = None, node_cap: Optional[int] = None):
        cap = self.max_nodes if node_cap is None else node_cap
        if len(tree) > cap:
            raise ValueError(f"tree has {len(tree)} nodes, cap is {cap}")
        self.tree = tree
        self.node_cap = cap
        self.reference_path = tuple(int(v) for v in reference_path)
        if self.reference_path and list(self.reference_path) != tree.path_to(self.reference_path[-1]):
            raise ValueError("reference must be a root path")
        self.n_hyp = len(tree) + 1
        self.all_mask = (1 << self.n_hyp) - 1
        self._ref = frozenset(self.reference_path)
        self.col = {}
        for v in tree.nodes:
            m = 0
            for i, u in enumerate(tree.nodes, start=1):
                if tree.is_ancestor_or_equal(v, u):
                    m |= 1 << i
            if v in self._ref:
                m = ~m & self.all_mask
            self.col[v] = m
        self.alive = self.all_mask if alive is None else alive

    @property
    def empty(self) -> bool:
        return self.alive == 0

    def _child(self, alive: int) -> "TreeClassVS":
        out = object.__new__(TreeClassVS)
        out.__dict__.update(self.__dict__)
        out.alive = alive
        return out

    def check_point(self, x) -> int:
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise ValueError(f"tree points are integer node ids, got {x!r}")
        x = int(x)
        if x not in self.col:
            raise ValueError(f"unknown tree node {x}")
        return x

    def full(self) -> "TreeClassVS":
        return self._child(self.all_mask)

    def reference_label(self, x) -> int:
        return int(self.check_point(x) in self._ref)

    def _mask(self, x: int, y: int) -> int:
        """Hypotheses labelling x with raw label y."""
        ty = y ^ (x in self._ref)
        c = self.col[x]
        return c if ty else (~c & self.all_mask)

    def restrict(self, x, y) -> "TreeClassVS":
        x = self.check_point(x)
        return self._child(self.alive & self._mask(x, check_label(y)))

    def dis_contains(self, x) -> bool:
        self._require()
        x = self.check_point(x)
        c = self.col[x]
        return bool(self.alive & c) and bool(self.alive & ~c)

    def consistent_label(self, x) -> Optional[int]:
        self._require()
        x = self.check_point(x)
        c = self.col[x]
        if self.alive & c and self.alive & ~c:
            return None
        t = 1 if self.alive & c else 0
        return t ^ int(x in self._ref)

    def feasible(self, positives, negatives) -> bool:
        m = self.alive
        for x in positives:
            m &= self._mask(self.check_point(x), 1)
        for x in negatives:
            m &= self._mask(self.check_point(x), 0)
        return m != 0

    def hypotheses(self) -> list:
        """Alive hypotheses as frozensets of raw positive nodes."""
        out = []
        for i in range(self.n_hyp):
            if self.alive >> i & 1:
                out.append(frozenset(v for v in self.tree.nodes
                                     if (self.col[v] >> i & 1) ^ (v in self._ref)))
        return out

    def dis_nodes(self) -> list:
        if self.empty:
            return []
        return [v for v in self.tree.nodes if self.dis_contains(v)]

    def dis_region(self) -> NodeSet:
        return NodeSet(frozenset(self.dis_nodes()))

    def shatters_batch(self, tuples: np.ndarray) -> np.ndarray:
        tuples = np.asarray(tuples)
        m, k = tuples.shape[:2]
        if self.empty or k > 1:
            return np.zeros(m, dtype=bool)
        dis = set(self.dis_nodes())
        return np.array([int(v) in dis for v in tuples[:, 0]], dtype=bool)

    def __eq__(self, other):
        return (isinstance(other, TreeClassVS) and other.tree is self.tree
                and other.reference_path == self.reference_path and other.alive == self.alive)

    def __repr__(self):
        return f"TreeClassVS(n={len(self.tree)}, alive={self.alive:#x}, ref={list(self.reference_path)})"


def tree_order_leq(vs: TreeClassVS, x, y) -> bool:
    """x precedes y: every hypothesis of the full class that departs from the
    reference at y also departs from it at x."""
    x = vs.check_point(x)
    y = vs.check_point(y)
    return vs.col[y] & ~vs.col[x] == 0


# ---------------------------------------------------------------------------
# axis-aligned rectangles in R^p; the all-zero function is included

class _RowStore:
    """Append-only row buffer shared between a version space and its
    restrictions.  A view (store, n) reads rows [:n]; appending from a view
    that is not at the tip copies first, so views never observe each other."""

    def __init__(self, p: int, capacity: int = 16):
        self.data = np.empty((capacity, p))
        self.count = 0

    def append_from(self, n: int, row: np.ndarray) -> "_RowStore":
        store = self
        if n != self.count:
            store = _RowStore(self.data.shape[1], max(16, 2 * n))
            store.data[:n] = self.data[:n]
            store.count = n
        if store.count == store.data.shape[0]:
            bigger = np.empty((2 * store.data.shape[0], store.data.shape[1]))
            bigger[:store.count] = store.data[:store.count]
            store.data = bigger
        store.data[store.count] = row
        store.count += 1
        return store


class RectangleVS(VersionSpace):
    """Bounding box of observed positives (+-inf before the first one) and
    the raw list of negatives."""

    def __init__(self, p: int, lo=None, hi=None, store: Optional[_RowStore] = None,
                 n_neg: int = 0, empty: bool = False):
        if p < 1:
            raise ValueError("dimension p must be >= 1")
        self.p = int(p)
        self.lo = np.full(p, INF) if lo is None else np.asarray(lo, dtype=float)
        self.hi = np.full(p, -INF) if hi is None else np.asarray(hi, dtype=float)
        self._store = store if store is not None else _RowStore(p)
        self.n_neg = n_neg
        self.empty = empty

    @property
    def vc_dim(self) -> int:
        return 2 * self.p

    @property
    def negatives(self) -> np.ndarray:
        return self._store.data[:self.n_neg]

    @property
    def has_positive(self) -> bool:
        return bool(np.all(self.lo <= self.hi))

    def check_point(self, x) -> tuple:
        x = normalize_point(x)
        if not isinstance(x, tuple) or len(x) != self.p:
            raise ValueError(f"expected a point of dimension {self.p}, got {x!r}")
        return x

    def full(self) -> "RectangleVS":
        return RectangleVS(self.p)

    def _any_negative_in(self, lo: np.ndarray, hi: np.ndarray) -> bool:
        neg = self.negatives
        if not len(neg):
            return False
        return bool(np.any(np.all((neg >= lo) & (neg <= hi), axis=1)))

    def restrict(self, x, y) -> "RectangleVS":
        xa = np.asarray(self.check_point(x))
        y = check_label(y)
        if self.empty:
            return self
        if y == 1:
            lo = np.minimum(self.lo, xa)
            hi = np.maximum(self.hi, xa)
            bad = self._any_negative_in(lo, hi)
            return RectangleVS(self.p, lo, hi, self._store, self.n_neg, bad)
        inside = self.has_positive and bool(np.all((xa >= self.lo) & (xa <= self.hi)))
        store = self._store.append_from(self.n_neg, xa)
        return RectangleVS(self.p, self.lo, self.hi, store, self.n_neg + 1, inside)

    def _is_negative(self, xa: np.ndarray) -> bool:
        neg = self.negatives
        return bool(len(neg)) and bool(np.any(np.all(neg == xa, axis=1)))

    def dis_contains(self, x) -> bool:
        self._require()
        xa = np.asarray(self.check_point(x))
        if not self.has_positive:
            return not self._is_negative(xa)
        if np.all((xa >= self.lo) & (xa <= self.hi)):
            return False
        return not self._any_negative_in(np.minimum(self.lo, xa), np.maximum(self.hi, xa))

    def dis_contains_batch(self, X: np.ndarray) -> np.ndarray:
        """Vectorised dis_contains over the rows of X (n, p)."""
        self._require()
        X = np.asarray(X, dtype=float)
        neg = self.negatives
        if not self.has_positive:
            if not len(neg):
                return np.ones(len(X), dtype=bool)
            return ~np.all(X[:, None, :] == neg[None, :, :], axis=2).any(axis=1)
        out = ~np.all((X >= self.lo) & (X <= self.hi), axis=1)
        if not len(neg):
            return out
        if len(neg) > 2 * self.near_count and len(X) > 8:
            # exact two-stage test: negatives hugging the box reject most
            # candidates cheaply, the rest are checked against everything
            gap = np.maximum(self.lo - neg, 0.0) + np.maximum(neg - self.hi, 0.0)
            near = np.argpartition(gap.sum(axis=1), self.near_count)[:self.near_count]
            out &= ~self._blocked(X, neg[near])
        idx = np.flatnonzero(out)
        if len(idx):
            out[idx] = ~self._blocked(X[idx], neg)
        return out

    near_count = 64

    def _blocked(self, X: np.ndarray, neg: np.ndarray) -> np.ndarray:
        """Does bbox(box + x) contain one of `neg`, per row x of X?"""
        lo = np.minimum(self.lo, X)
        hi = np.maximum(self.hi, X)
        hit = np.ones((len(X), len(neg)), dtype=bool)
        for i in range(self.p):
            col = neg[:, i]
            hit &= (col >= lo[:, i:i + 1]) & (col <= hi[:, i:i + 1])
        return hit.any(axis=1)

    def consistent_label(self, x) -> Optional[int]:
        self._require()
        xa = np.asarray(self.check_point(x))
        if self.has_positive and np.all((xa >= self.lo) & (xa <= self.hi)):
            return 1
        return None if self.dis_contains(x) else 0

    def feasible(self, positives, negatives) -> bool:
        if self.empty:
            return False
        pos = [np.asarray(self.check_point(v)) for v in positives]
        if not pos and not self.has_positive:
            return True
        lo = self.lo.copy()
        hi = self.hi.copy()
        for v in pos:
            lo = np.minimum(lo, v)
            hi = np.maximum(hi, v)
        if self._any_negative_in(lo, hi):
            return False
        for v in negatives:
            va = np.asarray(self.check_point(v))
            if np.all((va >= lo) & (va <= hi)):
                return False
        return True

    def dis_region(self) -> RectangleRegion:
        return RectangleRegion(self)

    def shatters_batch(self, tuples: np.ndarray, chunk: int = 512) -> np.ndarray:
        tuples = np.asarray(tuples, dtype=float)
        m, k = tuples.shape[:2]
        if self.empty or k > self.vc_dim:
            return np.zeros(m, dtype=bool)
        out = np.empty(m, dtype=bool)
        for s in range(0, m, chunk):
            out[s:s + chunk] = self._shatters_chunk(tuples[s:s + chunk])
        return out

    def _shatters_chunk(self, tup: np.ndarray) -> np.ndarray:
        m, k, p = tup.shape
        ok = np.ones(m, dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                ok &= np.any(tup[:, i] != tup[:, j], axis=1)
        neg = self.negatives
        for labels in itertools.product((0, 1), repeat=k):
            lab = np.array(labels, dtype=bool)
            if not lab.any() and not self.has_positive:
                continue
            lo = np.broadcast_to(self.lo, (m, p)).copy()
            hi = np.broadcast_to(self.hi, (m, p)).copy()
            if lab.any():
                lo = np.minimum(lo, tup[:, lab].min(axis=1))
                hi = np.maximum(hi, tup[:, lab].max(axis=1))
            good = np.ones(m, dtype=bool)
            for j in np.flatnonzero(~lab):
                good &= ~np.all((tup[:, j] >= lo) & (tup[:, j] <= hi), axis=1)
            if len(neg):
                hit = np.all((neg[None, :, :] >= lo[:, None, :]) &
                             (neg[None, :, :] <= hi[:, None, :]), axis=2)
                good &= ~hit.any(axis=1)
            ok &= good
        return ok

    def __repr__(self):
        return (f"RectangleVS(p={self.p}, lo={self.lo.tolist()}, hi={self.hi.tolist()}, "
                f"negatives={self.n_neg}, empty={self.empty})")


# ---------------------------------------------------------------------------
# leave-one-out disagreement estimate

def gamma(vs: VersionSpace, S, ref: Optional[Callable] = None) -> tuple:
    """Return (count, members) of the leave-one-out disagreement set.

    `vs` is the base class (the full class, or a restriction of it such as
    F^{x -> f(x)}); only the sample pairs on which `ref` disagrees restrict
    it.  S must be realizable by the full class.
    """
    if ref is None:
        ref = vs.reference_label
    pairs = S.distinct_pairs() if isinstance(S, LabeledSet) else list(dict.fromkeys(
        (normalize_point(x), check_label(y)) for x, y in S))
    if pairs and vs.full().restrict_all(pairs).empty:
        raise InconsistentSample("sample is not realizable by the class")
    off = [(x, y) for x, y in pairs if y != ref(x)]
    off_set = set(off)
    base = vs.restrict_all(off)
    members = set()
    for x, y in pairs:
        if (x, y) in off_set:
            v = vs.restrict_all(p for p in off if p != (x, y))
        else:
            v = base
        if not v.empty and v.dis_contains(x):
            members.add(x)
    return len(members), members


# ---------------------------------------------------------------------------
# target hypotheses (the labelling function f*)

@dataclass(frozen=True)
class ThresholdTarget:
    a: float

    def label(self, x) -> int:
        return int(x <= self.a)

    def to_dict(self):
        return {"kind": "threshold", "a": self.a}


@dataclass(frozen=True)
class IntervalTarget:
    a: float
    b: float

    def label(self, x) -> int:
        return int(self.a <= x <= self.b)

    def to_dict(self):
        return {"kind": "interval", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class PathTarget:
    """Indicator of a root path (empty path = all-zero)."""
    path: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "_nodes", frozenset(self.path))

    def label(self, x) -> int:
        return int(x in self._nodes)

    def to_dict(self):
        return {"kind": "path", "path": list(self.path)}


@dataclass(frozen=True)
class BoxTarget:
    lo: tuple
    hi: tuple

    def label(self, x) -> int:
        return int(all(l <= v <= h for v, l, h in zip(x, self.lo, self.hi)))

    def to_dict(self):
        return {"kind": "box", "lo": list(self.lo), "hi": list(self.hi)}
