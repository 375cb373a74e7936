import math

import numpy as np
import pytest

from abstain_lab.distributions import (DiscreteTree, ProductUniform, Uniform01, region_mass,
                                       rho_k, rho_k_exact, rho_k_mc)
from abstain_lab.errors import UseMonteCarlo
from abstain_lab.hypotheses import IntervalVS, RectangleVS, ThresholdVS, Tree, TreeClassVS


def test_uniform_support():
    u = Uniform01()
    assert u.in_support(0.0) and u.in_support(1) and not u.in_support(1.5)
    assert not u.in_support(True)
    assert u.ppf(u.cdf(0.3)) == pytest.approx(0.3)


def test_product_uniform_sampling():
    rng = np.random.default_rng(0)
    X = ProductUniform(3).sample_many(rng, 1000)
    assert X.shape == (1000, 3) and X.min() >= 0 and X.max() <= 1


def test_discrete_tree_frequencies():
    tree = Tree([1, 2, 3], [[1, 2], [1, 3]])
    d = DiscreteTree([1, 2, 3], [0.5, 0.25, 0.25])
    rng = np.random.default_rng(1)
    draws = d.sample_many(rng, 20000)
    assert abs(np.mean(draws == 1) - 0.5) < 0.02
    assert DiscreteTree.uniform(tree).weight(2) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        DiscreteTree([1, 2], [0.7, 0.7])


def test_rho_exact_values():
    u = Uniform01()
    vs = ThresholdVS().restrict(0.2, 1).restrict(0.7, 0)
    assert rho_k_exact(vs, u, 1).value == pytest.approx(0.5)
    assert rho_k_exact(vs, u, 2).value == 0.0
    assert rho_k_exact(IntervalVS(), u, 2).value == pytest.approx(1.0)
    # one positive at 0.5: a pair is shattered iff it straddles 0.5
    assert rho_k_exact(IntervalVS().restrict(0.5, 1), u, 2).value == pytest.approx(0.5)
    # positives on [0.4, 0.6], negatives at 0.2 and 0.9: DIS mass 0.2 + 0.3
    vs = IntervalVS().restrict_all([(0.4, 1), (0.6, 1), (0.2, 0), (0.9, 0)])
    assert rho_k_exact(vs, u, 1).value == pytest.approx(0.5)
    assert rho_k_exact(vs, u, 2).value == pytest.approx(2 * 0.2 * 0.3)


def test_rho_tree_exact():
    tree = Tree([1, 2, 3, 4], [[1, 2], [2, 3], [1, 4]])
    vs = TreeClassVS(tree).restrict(2, 1)
    # only node 3 is still undecided
    assert rho_k_exact(vs, DiscreteTree.uniform(tree), 1).value == pytest.approx(0.25)


def test_rectangles_need_monte_carlo():
    with pytest.raises(UseMonteCarlo):
        rho_k_exact(RectangleVS(2), ProductUniform(2), 1)
    est = rho_k(RectangleVS(2), ProductUniform(2), 1, 2000, np.random.default_rng(0))
    assert est.method == "monte_carlo" and est.value == 1.0


@pytest.mark.parametrize("k", [1, 2])
def test_mc_agrees_with_exact(k):
    u = Uniform01()
    vs = IntervalVS().restrict_all([(0.4, 1), (0.6, 1), (0.2, 0), (0.9, 0)])
    exact = rho_k_exact(vs, u, k).value
    est = rho_k_mc(vs, u, k, 40000, np.random.default_rng(k))
    assert abs(est.value - exact) <= 4 * max(est.stderr, 1e-3)


def test_region_mass():
    vs = ThresholdVS().restrict(0.25, 1)
    assert region_mass(Uniform01(), vs.dis_region()) == pytest.approx(0.75)
