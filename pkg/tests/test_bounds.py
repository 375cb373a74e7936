import math

import pytest

from abstain_lab.bounds import (agnostic_abstention_bound, agnostic_parameters, bound_values,
                                bounds, canonical_learner)
from abstain_lab.errors import ConfigError


def test_aliases():
    assert canonical_learner("alg4") == "agnostic"
    with pytest.raises(ConfigError):
        canonical_learner("alg9")


def test_formula_values():
    assert bound_values("baseline", 10_000, {})["abstain"] == pytest.approx(18.4207, abs=1e-4)
    assert bound_values("alg1", math.e, {"d": 2})["mis"] == pytest.approx(4.0)
    assert bound_values("alg1", 100, {"d": 2})["abstain"] == 12
    assert bound_values("alg2", 500, {})["mis"] == pytest.approx(math.sqrt(500 * math.log(500)))
    p = agnostic_parameters(1000, 0.1)
    assert p["M"] == 173 and p["Delta"] == pytest.approx(0.4)
    assert p["abstain_bound"] == pytest.approx(1751.93, abs=0.01)
    assert agnostic_abstention_bound(5000, 0.2) == pytest.approx(5358.54, abs=0.01)


def test_rectangle_curve_monotone():
    curves = bounds("alg3", {"p": 1}, [10, 100, 1000, 10000])
    for c in curves:
        assert list(c.values) == sorted(c.values)


def test_missing_parameter():
    with pytest.raises(ConfigError):
        bounds("alg3", {}, [10])
    with pytest.raises(ConfigError):
        bounds("baseline", {}, [0])


def test_experimental_has_no_bounds():
    assert bounds("alg5", {"eta": 0.1}, [100]) == []
