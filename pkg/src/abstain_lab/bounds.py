"""Theoretical bound curves.  All logarithms are natural."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConfigError
from .learners import noisy_batch_size, noisy_slack

LEARNER_ALIASES = {
    "baseline": "baseline",
    "alg1": "shattering", "shattering": "shattering",
    "alg2": "vc1", "vc1": "vc1",
    "alg3": "rectangle", "rectangle": "rectangle",
    "alg4": "agnostic", "agnostic": "agnostic",
    "alg5": "agnostic_beyond", "agnostic_beyond": "agnostic_beyond",
}
EXPERIMENTAL = {"agnostic_beyond"}


def canonical_learner(name: str) -> str:
    try:
        return LEARNER_ALIASES[name]
    except KeyError:
        raise ConfigError(f"unknown learner {name!r}") from None


@dataclass(frozen=True)
class BoundCurve:
    learner: str
    formula: str
    T: tuple
    values: tuple


def _need(params: dict, key: str, learner: str):
    if params.get(key) is None:
        raise ConfigError(f"bounds for {learner} need parameter {key!r}")
    return params[key]


def formulas(learner: str, params: dict) -> dict:
    """formula id -> callable(T) for the misclassification and abstention
    bounds of a learner; empty for the experimental learner."""
    name = canonical_learner(learner)
    if name == "baseline":
        return {"mis:0": lambda T: 0.0,
                "abstain:2lnT": lambda T: 2.0 * math.log(T)}
    if name == "shattering":
        d = int(_need(params, "d", name))
        return {"mis:d^2*lnT": lambda T: d * d * math.log(T),
                "abstain:6d": lambda T: 6.0 * d}
    if name == "vc1":
        f = lambda T: math.sqrt(T * math.log(T))
        return {"mis:sqrt(T*lnT)": f, "abstain:sqrt(T*lnT)": f}
    if name == "rectangle":
        p = int(_need(params, "p", name))
        return {"mis:p*sqrt(T*lnT)": lambda T: p * math.sqrt(T * math.log(T)),
                "abstain:2p*sqrt(T*lnT)+2p*lnT":
                    lambda T: 2 * p * math.sqrt(T * math.log(T)) + 2 * p * math.log(T)}
    if name == "agnostic":
        eta = float(_need(params, "eta", name))
        return {"mis:1": lambda T: 1.0,
                "abstain:6M*ln(T/(12M)+3/2)/ln(3/2)+1":
                    lambda T: agnostic_abstention_bound(T, eta)}
    return {}


def agnostic_abstention_bound(T: int, eta: float) -> float:
    M = noisy_batch_size(T, eta)
    return 6.0 * M * math.log(T / (12.0 * M) + 1.5) / math.log(1.5) + 1.0


def agnostic_parameters(T: int, eta: float) -> dict:
    return {"M": noisy_batch_size(T, eta), "Delta": noisy_slack(eta),
            "abstain_bound": agnostic_abstention_bound(T, eta)}


def bound_values(learner: str, T: int, params: dict) -> dict:
    """{'mis': value|None, 'abstain': value|None} at horizon T."""
    out = {"mis": None, "abstain": None}
    for fid, f in formulas(learner, params).items():
        out[fid.split(":", 1)[0]] = f(T)
    return out


def bounds(learner: str, params: dict, T_grid: Sequence[int]) -> list:
    grid = tuple(int(T) for T in T_grid)
    if any(T < 1 for T in grid):
        raise ConfigError("T must be >= 1")
    return [BoundCurve(canonical_learner(learner), fid, grid, tuple(f(T) for T in grid))
            for fid, f in formulas(learner, params).items()]
