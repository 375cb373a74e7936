import numpy as np
import pytest

from abstain_lab.adversaries import DisagreementFlood, NoNoise, NoOp, run_protocol
from abstain_lab.distributions import Uniform01
from abstain_lab.hypotheses import ThresholdTarget, ThresholdVS
from abstain_lab.learners import BaselineLearner
from abstain_lab.oracles import (GridSpec, cal_abstention_expectation, check_gamma, check_rho,
                                 check_shatters, gamma_bruteforce, shatters_bruteforce)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(32)


def test_bruteforce_trivia():
    assert not shatters_bruteforce("thresholds", [], [0.2, 0.8])
    assert shatters_bruteforce("intervals", [], [0.2, 0.8])
    assert not shatters_bruteforce("intervals", [], [0.2, 0.5, 0.8])


def test_gamma_bruteforce_empty():
    assert gamma_bruteforce("thresholds", [], lambda x: 0) == (0, set())


def test_cal_expectation_values():
    assert cal_abstention_expectation(1) == 2.0
    assert cal_abstention_expectation(2) == 3.0
    assert cal_abstention_expectation(10_000) == pytest.approx(19.575, abs=1e-3)


def test_cal_expectation_bounds_simulation():
    # sum 2/i is an upper bound; with a uniformly random threshold the exact
    # expectation is sum over rounds of the size-biased spacing 2/(t+1)
    n, reps = 30, 4000
    hits = [run_protocol(BaselineLearner(ThresholdVS()), NoOp(), Uniform01(),
                         ThresholdTarget(float(np.random.default_rng(s).random())),
                         NoNoise(), n, s).tally.abstain_on_iid for s in range(reps)]
    exact = 2 * sum(1 / (t + 1) for t in range(1, n + 1))
    assert abs(np.mean(hits) - exact) < 4 * np.std(hits) / np.sqrt(reps)
    assert np.mean(hits) <= cal_abstention_expectation(n)


def test_small_agreement_runs():
    assert check_shatters(n=150, seed=1)["mismatches"] == 0
    assert check_gamma(n=150, seed=1)["mismatches"] == 0
    assert check_rho(n=5, m=20000, seed=1)["mismatches"] == 0
