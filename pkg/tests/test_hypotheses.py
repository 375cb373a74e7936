import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abstain_lab.errors import DuplicatePoints, EmptyVersionSpace, InconsistentSample
from abstain_lab.hypotheses import (BoxTarget, IntervalTarget, IntervalVS, PathTarget,
                                    RectangleVS, ThresholdTarget, ThresholdVS, Tree,
                                    TreeClassVS, gamma, load_tree, random_tree,
                                    tree_order_leq)
from abstain_lab.oracles import TreeDesc, gamma_bruteforce, shatters_bruteforce

lattice = st.integers(0, 16).map(lambda i: i / 16)


def labelled(target):
    return st.lists(lattice, max_size=8).map(lambda xs: [(x, target.label(x)) for x in xs])


def test_threshold_basics():
    vs = ThresholdVS().restrict(0.2, 1).restrict(0.7, 0)
    assert (vs.lo, vs.hi, vs.hi_open) == (0.2, 0.7, True)
    assert vs.consistent_label(0.1) == 1 and vs.consistent_label(0.8) == 0
    assert vs.dis_contains(0.5) and not vs.dis_contains(0.7) and not vs.dis_contains(0.2)
    assert vs.restrict(0.1, 0).empty
    with pytest.raises(EmptyVersionSpace):
        vs.restrict(0.1, 0).dis_contains(0.5)


def test_threshold_shatters():
    vs = ThresholdVS()
    assert vs.shatters([0.5])
    assert not vs.shatters([0.2, 0.8])
    assert IntervalVS().shatters([0.2, 0.8])
    with pytest.raises(ValueError):
        vs.shatters([])
    with pytest.raises(DuplicatePoints):
        vs.shatters([0.3, 0.3])


def test_interval_basics():
    vs = IntervalVS().restrict(0.4, 1).restrict(0.6, 1).restrict(0.2, 0)
    assert vs.consistent_label(0.5) == 1
    assert vs.consistent_label(0.1) == 0
    assert vs.dis_contains(0.3) and vs.dis_contains(0.9)
    assert vs.shatters([0.3]) and not vs.shatters([0.3, 0.5])


@settings(max_examples=150, deadline=None)
@given(a=lattice, data=st.data())
def test_threshold_shatters_matches_bruteforce(a, data):
    S = data.draw(labelled(ThresholdTarget(a)))
    q = data.draw(st.lists(lattice, min_size=1, max_size=2, unique=True))
    vs = ThresholdVS().restrict_all(S)
    assert vs.shatters(q) == shatters_bruteforce("thresholds", S, q)


@settings(max_examples=150, deadline=None)
@given(ab=st.tuples(lattice, lattice).map(sorted), data=st.data())
def test_interval_shatters_matches_bruteforce(ab, data):
    S = data.draw(labelled(IntervalTarget(*ab)))
    q = data.draw(st.lists(lattice, min_size=1, max_size=3, unique=True))
    vs = IntervalVS().restrict_all(S)
    assert vs.shatters(q) == shatters_bruteforce("intervals", S, q)


@settings(max_examples=100, deadline=None)
@given(ab=st.tuples(lattice, lattice).map(sorted), data=st.data())
def test_interval_gamma_matches_bruteforce(ab, data):
    S = data.draw(labelled(IntervalTarget(*ab)))
    assert gamma(IntervalVS(), S)[0] == gamma_bruteforce("intervals", S, lambda x: 0)[0]


def test_dis_equals_shattered_singletons():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = np.sort(rng.integers(0, 20, 2)) / 20
        S = [(x, int(a <= x <= b)) for x in rng.integers(0, 21, 5) / 20]
        vs = IntervalVS().restrict_all(S)
        for x in np.arange(21) / 20:
            assert vs.dis_contains(x) == vs.shatters([x])


def test_gamma_threshold_sample():
    # positives at 1..n-d and negatives beyond: reference is the all-one
    # labelling, only negatives restrict, and every negative except the
    # smallest is covered by the one below it
    S = [(i / 10, 1) for i in range(1, 4)] + [(i / 10, 0) for i in range(4, 9)]
    count, members = gamma(ThresholdVS(), S, ref=lambda x: 1)
    assert members == {0.1, 0.2, 0.3, 0.4}
    assert count == gamma_bruteforce("thresholds", S, lambda x: 1)[0]


def test_gamma_threshold_all_zero_reference():
    # d positives then n - d negatives, reference all-zero: only dropping the
    # largest positive moves the disagreement region, so x_d..x_n are members
    n, d = 9, 4
    xs = [(i + 1) / (n + 1) for i in range(n)]
    S = [(x, int(i < d)) for i, x in enumerate(xs)]
    count, members = gamma(ThresholdVS(), S, ref=lambda x: 0)
    assert members == set(xs[d - 1:])
    assert count == n - d + 1


def test_gamma_rejects_unrealizable():
    with pytest.raises(InconsistentSample):
        gamma(ThresholdVS(), [(0.2, 0), (0.5, 1)])


def test_tree_class_example(data_dir):
    with open(f"{data_dir}/vc1tree.json") as fh:
        tree, path = load_tree(json.load(fh)["tree"])
    assert path == [1, 2, 6]
    vs = TreeClassVS(tree)
    assert len(vs.hypotheses()) == 14
    assert vs.shatters([6]) and not vs.shatters([6, 9])
    assert tree_order_leq(vs, 2, 6) and not tree_order_leq(vs, 6, 3)
    vs = vs.restrict(6, 1)
    assert vs.consistent_label(2) == 1
    assert vs.consistent_label(3) == 0
    assert set(vs.dis_nodes()) == {9, 10, 11, 12, 13}


def test_tree_validation():
    with pytest.raises(ValueError):
        Tree([1, 2, 3], [[1, 2], [3, 2]])
    with pytest.raises(ValueError):
        Tree([1, 2], [])
    with pytest.raises(ValueError):
        load_tree({"nodes": [1, 2, 3], "edges": [[1, 2], [1, 3]], "target_path": [2, 3]})


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), data=st.data())
def test_tree_shatters_and_gamma_match_bruteforce(seed, data):
    rng = np.random.default_rng(seed)
    tree = random_tree(int(rng.integers(2, 10)), rng)
    v = data.draw(st.sampled_from([0] + tree.nodes))
    target = PathTarget(tuple(tree.path_to(v)) if v else ())
    xs = data.draw(st.lists(st.sampled_from(tree.nodes), max_size=6))
    S = [(x, target.label(x)) for x in xs]
    q = data.draw(st.lists(st.sampled_from(tree.nodes), min_size=1, max_size=2, unique=True))
    desc = TreeDesc.from_edges(tree.nodes, tree.edges)
    vs = TreeClassVS(tree).restrict_all(S)
    assert vs.shatters(q) == shatters_bruteforce(desc, S, q)
    assert gamma(TreeClassVS(tree), S)[0] == gamma_bruteforce(desc, S, lambda x: 0)[0]


def test_reference_path_transform():
    tree = Tree([1, 2, 3, 4], [[1, 2], [2, 3], [1, 4]])
    plain = TreeClassVS(tree)
    ref = TreeClassVS(tree, reference_path=(1, 2))
    assert ref.reference_label(2) == 1 and ref.reference_label(4) == 0
    S = [(1, 1), (4, 0)]
    assert plain.restrict_all(S).dis_nodes() == ref.restrict_all(S).dis_nodes()


def test_rectangle_basics():
    vs = RectangleVS(2)
    assert vs.dis_contains((0.5, 0.5))
    vs = vs.restrict((0.4, 0.4), 1).restrict((0.6, 0.5), 1).restrict((0.9, 0.45), 0)
    assert vs.consistent_label((0.5, 0.45)) == 1
    assert vs.consistent_label((0.95, 0.45)) == 0
    assert vs.dis_contains((0.1, 0.1))
    assert vs.restrict((0.5, 0.45), 0).empty


def test_rectangle_batch_matches_scalar():
    rng = np.random.default_rng(5)
    target = BoxTarget((0.3, 0.2), (0.7, 0.6))
    vs = RectangleVS(2)
    for x in rng.random((300, 2)):
        vs = vs.restrict(tuple(x), target.label(tuple(x)))
    X = rng.random((2000, 2))
    batch = vs.dis_contains_batch(X)
    scalar = np.array([vs.dis_contains(tuple(x)) for x in X])
    assert np.array_equal(batch, scalar)


def test_rectangle_shatters_matches_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(40):
        lo = rng.integers(0, 8, 2) / 8
        hi = np.minimum(lo + rng.integers(0, 5, 2) / 8, 1.0)
        target = BoxTarget(tuple(lo), tuple(hi))
        pts = [tuple(rng.integers(0, 9, 2) / 8) for _ in range(4)]
        S = [(x, target.label(x)) for x in pts]
        q = [tuple(rng.integers(0, 9, 2) / 8) for _ in range(2)]
        if q[0] == q[1]:
            continue
        vs = RectangleVS(2).restrict_all(S)
        assert vs.shatters(q) == shatters_bruteforce(("rectangles", 2), S, q)


def test_targets_roundtrip():
    assert ThresholdTarget(0.5).label(0.5) == 1 and ThresholdTarget(0.5).label(0.6) == 0
    assert IntervalTarget(0.2, 0.4).label(0.3) == 1
    assert BoxTarget((0, 0), (1, 1)).label((0.5, 1.0)) == 1
    assert PathTarget((1, 2)).label(2) == 1 and PathTarget((1, 2)).label(3) == 0
    assert ThresholdTarget(0.5).to_dict()["kind"] == "threshold"
