"""Sequential learners.  Each exposes predict(x) -> StepOutcome, observe(x, y)
-> dict and a public version space `vs` that adversaries may inspect."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import ABSTAIN, Prediction, normalize_point
from .distributions import Uniform01, region_mass, rho_k
from .errors import EmptyVersionSpace
from .hypotheses import RectangleVS, ThresholdVS, VersionSpace, gamma


@dataclass
class StepOutcome:
    prediction: Prediction
    diagnostics: dict = field(default_factory=dict)


def structure_alpha(T: int) -> float:
    """sqrt(T / ln T); infinite for T = 1 where ln T = 0."""
    return math.sqrt(T / math.log(T)) if T > 1 else math.inf


def noisy_batch_size(T: int, eta: float) -> int:
    if not 0.0 <= eta < 0.5:
        raise ValueError("noise bound must lie in [0, 1/2)")
    return max(1, math.ceil(16.0 * math.log(T) / (1.0 - 2.0 * eta) ** 2)) if T > 1 else 1


def noisy_slack(eta: float) -> float:
    return (1.0 - 2.0 * eta) / 2.0


def _label_prediction(y: Optional[int]) -> Prediction:
    return ABSTAIN if y is None else Prediction.of_label(y)


class Learner:
    name = "learner"
    experimental = False
    vs: VersionSpace

    def predict(self, x) -> StepOutcome:
        raise NotImplementedError

    def observe(self, x, y: int) -> dict:
        raise NotImplementedError

    def preview(self, x) -> Prediction:
        """Side-effect free prediction, used by white-box adversaries."""
        return self.predict(x).prediction

    def _restrict_checked(self, x, y):
        new = self.vs.restrict(x, y)
        if new.is_empty:
            raise EmptyVersionSpace(f"label {y} at {x!r} eliminated every hypothesis")
        return new


class BaselineLearner(Learner):
    """Predict only where the whole version space agrees."""
    name = "baseline"

    def __init__(self, vs: VersionSpace):
        self.vs = vs

    def predict(self, x) -> StepOutcome:
        return StepOutcome(_label_prediction(self.vs.consistent_label(x)))

    def observe(self, x, y) -> dict:
        self.vs = self._restrict_checked(x, y)
        return {}


class ShatteringLearner(Learner):
    """Level-k shattering rule with a known marginal."""
    name = "shattering"
    factor = 0.6

    def __init__(self, vs: VersionSpace, dist, T: int, d: Optional[int] = None,
                 mc_samples: int = 4096, rng: Optional[np.random.Generator] = None,
                 rho_method: str = "auto"):
        self.vs = vs
        self.dist = dist
        self.T = T
        self.d = vs.vc_dim if d is None else d
        self.k = self.d
        self.alphas = {k: float(T) ** (-k) for k in range(1, self.d + 1)}
        self.mc_samples = mc_samples
        self.rng = rng
        self.rho_method = rho_method
        self._rho_now = self._rho(self.vs, self.k) if self.k > 0 else 1.0
        self._cache = None

    def _rho(self, vs, k) -> float:
        return rho_k(vs, self.dist, k, self.mc_samples, self.rng, self.rho_method).value

    def _decide(self, x):
        k = self.k
        if k == 0:
            return _label_prediction(self.vs.consistent_label(x)), {"level": 0}, None
        vs0 = self.vs.restrict(x, 0)
        vs1 = self.vs.restrict(x, 1)
        r, r0, r1 = self._rho_now, self._rho(vs0, k), self._rho(vs1, k)
        if min(r0, r1) >= self.factor * r:
            pred = ABSTAIN
        else:
            pred = Prediction.ONE if r1 >= r0 else Prediction.ZERO
        diag = {"level": k, "rho": r, "rho0": r0, "rho1": r1}
        return pred, diag, (normalize_point(x), k, vs0, vs1, r0, r1)

    def predict(self, x) -> StepOutcome:
        pred, diag, self._cache = self._decide(x)
        return StepOutcome(pred, diag)

    def preview(self, x) -> Prediction:
        return self._decide(x)[0]

    def observe(self, x, y) -> dict:
        k = self.k
        c = self._cache
        self._cache = None
        if c is not None and c[0] == normalize_point(x) and c[1] == k:
            new = c[3] if y == 1 else c[2]
            r_new = c[5] if y == 1 else c[4]
        else:
            new = self.vs.restrict(x, y)
            r_new = self._rho(new, k) if k > 0 else 1.0
        if new.is_empty:
            raise EmptyVersionSpace(f"label {y} at {x!r} eliminated every hypothesis")
        self.vs = new
        diag = {"level_before": k, "rho_before": self._rho_now, "rho_after": r_new}
        if k > 0 and r_new <= self.alphas[k]:
            self.k = k - 1
            self._rho_now = self._rho(new, self.k) if self.k > 0 else 1.0
        else:
            self._rho_now = r_new
        diag["level_after"] = self.k
        return diag


class Vc1Learner(Learner):
    """Structure-based rule for VC dimension one classes (reference f = 0 after
    the XOR transform, so the reference label is vs.reference_label)."""
    name = "vc1"

    def __init__(self, vs: VersionSpace, T: int, alpha: Optional[float] = None):
        self.cls = vs.full()
        self.vs = vs
        self.T = T
        self.alpha = structure_alpha(T) if alpha is None else alpha
        self._pairs: dict = {}
        self.gamma_now = 0

    @property
    def history(self) -> list:
        return list(self._pairs)

    def _decide(self, x):
        if not self.vs.dis_contains(x):
            return _label_prediction(self.vs.consistent_label(x)), {"in_dis": False}
        ref = self.cls.reference_label(x)
        a0, _ = gamma(self.cls.restrict(x, ref), list(self._pairs))
        pred = Prediction.of_label(ref) if a0 >= self.alpha else ABSTAIN
        return pred, {"in_dis": True, "a0": a0}

    def predict(self, x) -> StepOutcome:
        pred, diag = self._decide(x)
        diag["gamma_prev"] = self.gamma_now
        return StepOutcome(pred, diag)

    def preview(self, x) -> Prediction:
        return self._decide(x)[0]

    def observe(self, x, y) -> dict:
        self.vs = self._restrict_checked(x, y)
        self._pairs[(normalize_point(x), int(y))] = None
        prev = self.gamma_now
        self.gamma_now = gamma(self.cls, list(self._pairs))[0]
        return {"gamma_prev": prev, "gamma": self.gamma_now}


class RectangleLearner(Learner):
    """Structure-based rule for axis-aligned rectangles in R^p."""
    name = "rectangle"

    def __init__(self, p: int, T: int, alpha: Optional[float] = None):
        self.p = p
        self.vs = RectangleVS(p)
        self.T = T
        self.alpha = structure_alpha(T) if alpha is None else alpha
        self._hist = np.empty((64, p))
        self._n = 0

    @property
    def history(self) -> np.ndarray:
        return self._hist[:self._n]

    def witnesses(self, x) -> int:
        """Distinct earlier points with some coordinate strictly between the
        new point and the near face of the positive box (closed at x)."""
        xa = np.asarray(self.vs.check_point(x))
        h = self.history
        lo, hi = self.vs.lo, self.vs.hi
        strip = ((h >= xa) & (h < lo)) | ((h > hi) & (h <= xa))
        return int(np.count_nonzero(strip.any(axis=1)))

    def predict(self, x) -> StepOutcome:
        self.vs.check_point(x)
        if not self.vs.has_positive:
            return StepOutcome(Prediction.ZERO, {"cond": 1})
        if not self.vs.dis_contains(x):
            return StepOutcome(_label_prediction(self.vs.consistent_label(x)), {"cond": 2})
        w = self.witnesses(x)
        if w >= self.alpha:
            return StepOutcome(Prediction.ZERO, {"cond": 3, "witnesses": w})
        return StepOutcome(ABSTAIN, {"cond": 4, "witnesses": w})

    def observe(self, x, y) -> dict:
        self.vs = self._restrict_checked(x, y)
        if self._n == len(self._hist):
            self._hist = np.concatenate([self._hist, np.empty_like(self._hist)])
        self._hist[self._n] = self.vs.check_point(x)
        self._n += 1
        return {}


def sublevel_hull(vs: ThresholdVS, xs, ys, slack: float) -> tuple:
    """Interval hull of {a in vs : err(a) - min err <= slack}, errors counted
    on the labelled sample (xs, ys) for f_a(x) = 1{x <= a}.

    The error is piecewise constant in a with breaks at the sample points, so
    it is evaluated once per piece.  Returns (new_vs, min_err, err_of_pieces).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=int)
    order = np.argsort(xs, kind="stable")
    z, lab = xs[order], ys[order]
    brk = np.unique(z)
    inner = brk[brk > vs.lo]
    inner = inner[inner < vs.hi] if vs.hi_open else inner[inner <= vs.hi]
    starts = np.concatenate([[vs.lo], inner])
    n_le = np.searchsorted(z, starts, side="right")
    neg_cum = np.concatenate([[0], np.cumsum(1 - lab)])
    pos_cum = np.concatenate([[0], np.cumsum(lab)])
    err = neg_cum[n_le] + (pos_cum[-1] - pos_cum[n_le])
    best = int(err.min())
    sel = np.flatnonzero(err - best <= slack + 1e-9)
    first, last = int(sel[0]), int(sel[-1])
    lo = float(starts[first])
    if last + 1 < len(starts):
        new = ThresholdVS(lo, float(starts[last + 1]), True)
    else:
        new = ThresholdVS(lo, vs.hi, vs.hi_open)
    return new, best, err


class _NoisyThresholdBase(Learner):
    def __init__(self, T: int, eta: float, dist=None):
        self.T = T
        self.eta = eta
        self.dist = Uniform01() if dist is None else dist
        self.M = noisy_batch_size(T, eta)
        self.delta = noisy_slack(eta)
        self.vs = ThresholdVS()
        self.updates = 0
        self._last_update_round = 0
        self._round = 0
        self.max_gap = 0

    def _dis_predict(self, x) -> Prediction:
        return _label_prediction(self.vs.consistent_label(x))

    def _apply_update(self, xs, ys) -> dict:
        old = self.vs
        self.vs, best, _ = sublevel_hull(old, xs, ys, self.delta * len(xs))
        self.updates += 1
        self.max_gap = max(self.max_gap, self._round - self._last_update_round)
        self._last_update_round = self._round
        return {"update": True, "lo": self.vs.lo, "hi": self.vs.hi,
                "min_err": best, "batch": len(xs)}

    def stall_stats(self) -> dict:
        return {"updates": self.updates,
                "max_gap": max(self.max_gap, self._round - self._last_update_round),
                "rounds_since_update": self._round - self._last_update_round}


class AgnosticThresholdLearner(_NoisyThresholdBase):
    """Disagreement-based thresholds under bounded label noise.  Updates fire
    once M labels have landed in the middle third of the disagreement region."""
    name = "agnostic"

    def __init__(self, T: int, eta: float, dist=None):
        super().__init__(T, eta, dist)
        self._buf_x: list = []
        self._buf_y: list = []
        self.buffer_total = 0
        self._set_thirds()

    def _set_thirds(self):
        F = self.dist.cdf
        lo, hi = self.vs.lo, self.vs.hi
        rho = float(F(hi) - F(lo))
        self.rho = rho
        self.c_minus = float(self.dist.ppf(F(lo) + rho / 3.0))
        self.c_plus = float(self.dist.ppf(F(lo) + 2.0 * rho / 3.0))

    @property
    def thirds(self) -> tuple:
        return (self.vs.lo, self.c_minus, self.c_plus, self.vs.hi)

    def predict(self, x) -> StepOutcome:
        return StepOutcome(self._dis_predict(x), {"rho": self.rho})

    def observe(self, x, y) -> dict:
        self._round += 1
        self.buffer_total += 1
        if self.rho > 0 and self.c_minus <= x <= self.c_plus:
            self._buf_x.append(float(x))
            self._buf_y.append(int(y))
        if len(self._buf_x) < self.M:
            return {"update": False, "inside": len(self._buf_x)}
        diag = self._apply_update(self._buf_x, self._buf_y)
        self._buf_x, self._buf_y = [], []
        self.buffer_total = 0
        self._set_thirds()
        return diag


class AgnosticBeyondLearner(_NoisyThresholdBase):
    """Experimental: shattering rule while the disagreement mass is at least
    1/T, disagreement rule below it; Delta-hull update every M labels."""
    name = "agnostic_beyond"
    experimental = True
    factor = 0.6

    def __init__(self, T: int, eta: float, dist=None):
        super().__init__(T, eta, dist)
        self.alpha = 1.0 / T
        self._buf_x: list = []
        self._buf_y: list = []

    def _mass(self, vs) -> float:
        return 0.0 if vs.is_empty else region_mass(self.dist, vs.dis_region())

    def predict(self, x) -> StepOutcome:
        rho = self._mass(self.vs)
        if rho >= self.alpha:
            r0 = self._mass(self.vs.restrict(x, 0))
            r1 = self._mass(self.vs.restrict(x, 1))
            if min(r0, r1) >= self.factor * rho:
                return StepOutcome(ABSTAIN, {"rho": rho, "rule": "shatter", "rule_abstain": True})
            pred = Prediction.ONE if r1 >= r0 else Prediction.ZERO
            return StepOutcome(pred, {"rho": rho, "rule": "shatter", "rule_abstain": False})
        return StepOutcome(self._dis_predict(x), {"rho": rho, "rule": "dis"})

    def observe(self, x, y) -> dict:
        self._round += 1
        self._buf_x.append(float(x))
        self._buf_y.append(int(y))
        if len(self._buf_x) < self.M:
            return {"update": False}
        diag = self._apply_update(self._buf_x, self._buf_y)
        self._buf_x, self._buf_y = [], []
        return diag
