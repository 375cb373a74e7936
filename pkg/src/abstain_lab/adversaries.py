"""Stream generation: i.i.d. source, clean-label injection strategies and
label-noise channels, plus the round loop that drives a learner."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (ABSTAIN, ErrorTally, Mode, Origin, Prediction, StreamEvent,
                   check_label, normalize_point, tally_update)
from .errors import AbstainLabError, InjectionOffSupport, RunAborted
from .hypotheses import (IntervalUnion, IntervalVS, RectangleVS, ThresholdVS,
                         TreeClassVS, VersionSpace)


# ---------------------------------------------------------------------------
# random streams

STREAM_NAMES = ("adversary", "iid", "noise", "learner", "target")


@dataclass
class Streams:
    adversary: np.random.Generator
    iid: np.random.Generator
    noise: np.random.Generator
    learner: np.random.Generator
    target: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "Streams":
        kids = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
        return cls(*(np.random.default_rng(k) for k in kids))


# ---------------------------------------------------------------------------
# noise channels

class NoNoise:
    eta = 0.0
    kind = "none"

    def flip(self, x, rng) -> bool:
        return False


@dataclass(frozen=True)
class RCN:
    """Each label flips independently with probability eta."""
    eta: float
    kind = "rcn"

    def __post_init__(self):
        if not 0.0 <= self.eta < 0.5:
            raise ValueError("RCN needs 0 <= eta < 1/2")

    def flip(self, x, rng) -> bool:
        return bool(rng.random() < self.eta)


def _ramp(x) -> float:
    if isinstance(x, tuple):
        return float(np.mean(x)) if x else 0.0
    return float(x)


MASSART_PROFILES: dict = {
    "constant": lambda x: 1.0,
    "ramp": lambda x: min(1.0, max(0.0, _ramp(x))),
    "peak": lambda x: max(0.0, 1.0 - 2.0 * abs(_ramp(x) - 0.5)),
}


@dataclass(frozen=True)
class Massart:
    """Point-dependent flip probability eta * profile(x), bounded by eta."""
    eta: float
    profile: str = "ramp"
    kind = "massart"

    def __post_init__(self):
        if not 0.0 <= self.eta < 0.5:
            raise ValueError("Massart needs bound 0 <= eta < 1/2")
        if self.profile not in MASSART_PROFILES:
            raise ValueError(f"unknown Massart profile {self.profile!r}")

    def rate(self, x) -> float:
        r = self.eta * MASSART_PROFILES[self.profile](x)
        if r > self.eta + 1e-15:
            raise ValueError("Massart flip probability exceeds its bound")
        return r

    def flip(self, x, rng) -> bool:
        return bool(rng.random() < self.rate(x))


# ---------------------------------------------------------------------------
# adversaries

@dataclass
class Visible:
    """What an adversary may look at before choosing: the public version
    space, the round index, the horizon and a preview of the (deterministic)
    prediction rule."""
    vs: VersionSpace
    round_index: int
    horizon: int
    preview: Callable = None


def _support_dis_nodes(vs: TreeClassVS, dist) -> list:
    return [v for v in vs.dis_nodes() if dist.in_support(v)]


def _sample_in_union(region: IntervalUnion, dist, v: float):
    """Inverse-CDF placement of one uniform draw inside a union of intervals,
    counted from the top end.  Returns None for a null region."""
    masses = [float(dist.cdf(b) - dist.cdf(a)) for a, b in region.intervals]
    total = float(sum(masses))
    if not total > 0:
        return None
    remaining = v * total
    items = list(zip(region.intervals, masses))[::-1]
    for i, ((a, b), m) in enumerate(items):
        if remaining < m or i == len(items) - 1:
            return float(dist.ppf(dist.cdf(b) - remaining)), (a, b)
        remaining -= m
    return None


class NoOp:
    name = "noop"
    rate = 0.0

    def choose(self, visible: Visible, dist, target, rng):
        return None


class DisagreementFlood:
    """With probability `rate`, inject a point drawn from the marginal
    restricted to the current disagreement region.  Two uniforms are
    consumed every round (decision, placement); rectangles need extra draws
    for rejection sampling."""
    name = "flood"
    chunks = (8, 24, 96, 128)  # rejection-sampling batches, 256 tries in all

    def __init__(self, rate: float):
        if not 0.0 <= rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        self.rate = rate

    def choose(self, visible: Visible, dist, target, rng):
        u, v = rng.random(), rng.random()
        if not u < self.rate:
            return None
        vs = visible.vs
        if vs.is_empty:
            return None
        if isinstance(vs, (ThresholdVS, IntervalVS)):
            hit = _sample_in_union(vs.dis_region(), dist, v)
            if hit is None:
                return None
            x, (a, b) = hit
            if not vs.dis_contains(x):
                x = float(dist.ppf(0.5 * (dist.cdf(a) + dist.cdf(b))))
            return x
        if isinstance(vs, TreeClassVS):
            nodes = _support_dis_nodes(vs, dist)
            return nodes[int(v * len(nodes))] if nodes else None
        for size in self.chunks:
            cand = dist.sample_many(rng, size)
            ok = np.flatnonzero(vs.dis_contains_batch(cand))
            if len(ok):
                return tuple(float(c) for c in cand[ok[0]])
        return None


class BoundaryProbe:
    """Inject just inside the edge of a disagreement interval (scalar
    classes), at the shallowest disagreement nodes (trees) or just outside a
    face of the positive box (rectangles)."""
    name = "boundary"

    def __init__(self, rate: float, offset: float = 0.02):
        if not 0.0 <= rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        if not 0.0 < offset < 0.5:
            raise ValueError("offset must lie in (0, 1/2)")
        self.rate = rate
        self.offset = offset

    def choose(self, visible: Visible, dist, target, rng):
        u, v, w = rng.random(), rng.random(), rng.random()
        if not u < self.rate:
            return None
        vs = visible.vs
        if vs.is_empty:
            return None
        if isinstance(vs, (ThresholdVS, IntervalVS)):
            region = vs.dis_region().intervals
            live = [(a, b) for a, b in region if dist.cdf(b) > dist.cdf(a)]
            if not live:
                return None
            a, b = live[int(v * len(live))]
            Fa, Fb = float(dist.cdf(a)), float(dist.cdf(b))
            q = Fa + self.offset * (Fb - Fa) if w < 0.5 else Fb - self.offset * (Fb - Fa)
            return float(dist.ppf(q))
        if isinstance(vs, TreeClassVS):
            nodes = _support_dis_nodes(vs, dist)
            if not nodes:
                return None
            top = min(vs.tree.depth[n] for n in nodes)
            shallow = [n for n in nodes if vs.tree.depth[n] == top]
            return shallow[int(v * len(shallow))]
        if isinstance(vs, RectangleVS) and vs.has_positive:
            x = np.array(dist.sample(rng))
            lo = np.clip(vs.lo, 0.0, 1.0)
            hi = np.clip(vs.hi, 0.0, 1.0)
            x = lo + x * (hi - lo)
            i = int(v * vs.p)
            x[i] = lo[i] - self.offset if w < 0.5 else hi[i] + self.offset
            x = tuple(float(c) for c in np.clip(x, 0.0, 1.0))
            if vs.dis_contains(x):
                return x
        return DisagreementFlood(1.0).choose(visible, dist, target, rng)


class TreeAttack:
    """White-box attack for tree classes.  With probability `rate` it injects
    a disagreement node on which the learner would currently err; failing
    that, one on which it would abstain (keeping the leave-one-out estimate
    low); failing that, any disagreement node."""
    name = "tree_attack"

    def __init__(self, rate: float = 1.0):
        if not 0.0 <= rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        self.rate = rate

    def choose(self, visible: Visible, dist, target, rng):
        u, v = rng.random(), rng.random()
        if not u < self.rate:
            return None
        vs = visible.vs
        if not isinstance(vs, TreeClassVS):
            raise TypeError("TreeAttack needs a tree class")
        nodes = _support_dis_nodes(vs, dist)
        if not nodes:
            return None
        preds = {n: visible.preview(n) for n in nodes}
        wrong = [n for n in nodes if preds[n] != ABSTAIN and int(preds[n]) != target.label(n)]
        abst = [n for n in nodes if preds[n] == ABSTAIN]
        pool = wrong or abst or nodes
        return pool[int(v * len(pool))]


@dataclass
class ScriptedRound:
    point: object
    origin: Origin = Origin.IID
    label: Optional[int] = None


class Scripted:
    """Replays a fixed list of rounds; labels, when given, override the
    target and the noise channel."""
    name = "scripted"
    rate = 0.0

    def __init__(self, rounds):
        self.rounds = [r if isinstance(r, ScriptedRound) else ScriptedRound(**r) for r in rounds]

    def __len__(self):
        return len(self.rounds)

    def choose(self, visible, dist, target, rng):
        raise TypeError("scripted streams are handled by next_event directly")


def scripted_from_doc(doc: dict) -> Scripted:
    rounds = []
    for r in doc["rounds"]:
        origin = Origin(r.get("origin", "iid"))
        label = r.get("label")
        rounds.append(ScriptedRound(normalize_point(r["point"]), origin,
                                    None if label is None else check_label(label)))
    return Scripted(rounds)


def load_scripted(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------

def next_event(adv, dist, target, visible: Visible, noise, streams: Streams,
               round_index: int) -> StreamEvent:
    if isinstance(adv, Scripted):
        r = adv.rounds[round_index - 1]
        point = r.point
        clean = target.label(point) if target is not None else r.label
        if r.label is not None:
            observed = r.label
        else:
            observed = clean ^ int(noise.flip(point, streams.noise))
        return StreamEvent(point, r.origin, int(clean), int(observed), round_index)
    injected = adv.choose(visible, dist, target, streams.adversary)
    # the i.i.d. draw happens after the injection decision, every round
    x_iid = dist.sample(streams.iid)
    if injected is not None:
        injected = normalize_point(injected)
        if not dist.in_support(injected):
            raise InjectionOffSupport(f"{injected!r} is outside the support")
        point, origin = injected, Origin.INJECTED
    else:
        point, origin = x_iid, Origin.IID
    clean = target.label(point)
    observed = clean ^ int(noise.flip(point, streams.noise))
    return StreamEvent(point, origin, int(clean), int(observed), round_index)


@dataclass
class RoundRecord:
    event: StreamEvent
    prediction: Prediction
    step: dict
    update: dict


@dataclass
class ProtocolResult:
    tally: ErrorTally
    rounds: int
    rounds_injected: int
    log: list = field(default_factory=list)
    aborted: Optional[str] = None
    abort_round: Optional[int] = None


def run_protocol(learner, adversary, dist, target, noise, T: int, streams,
                 mode: Optional[Mode] = None, monitor: Optional[Callable] = None,
                 record: bool = False, rounds: Optional[int] = None,
                 raise_on_abort: bool = False) -> ProtocolResult:
    """Run `rounds` (default T) rounds.  Learner failures stop the run and
    are reported with the round index."""
    if isinstance(streams, (int, np.integer)):
        streams = Streams.from_seed(int(streams))
    if mode is None:
        mode = Mode.REALIZABLE if isinstance(noise, NoNoise) else Mode.AGNOSTIC
    n = T if rounds is None else rounds
    tally = ErrorTally()
    injected = 0
    out = ProtocolResult(tally, 0, 0)
    for t in range(1, n + 1):
        visible = Visible(learner.vs, t, T, learner.preview)
        try:
            ev = next_event(adversary, dist, target, visible, noise, streams, t)
            step = learner.predict(ev.point)
            tally = tally_update(tally, ev, step.prediction, mode)
            upd = learner.observe(ev.point, ev.observed_label)
        except AbstainLabError as exc:
            if raise_on_abort:
                raise RunAborted(t, exc) from exc
            out.aborted = f"{type(exc).__name__}: {exc}"
            out.abort_round = t
            break
        injected += ev.origin is Origin.INJECTED
        rec = RoundRecord(ev, step.prediction, step.diagnostics, upd)
        if monitor is not None:
            monitor(rec)
        if record:
            out.log.append(rec)
        out.rounds = t
    out.tally = tally
    out.rounds_injected = injected
    return out
