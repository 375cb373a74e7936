"""Experiment configuration, replication runner, aggregation and output."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .adversaries import (RCN, BoundaryProbe, DisagreementFlood, Massart, NoNoise, NoOp,
                          Streams, TreeAttack, run_protocol)
from .bounds import EXPERIMENTAL, bound_values, bounds, canonical_learner
from .core import ABSTAIN, Mode, Origin
from .distributions import DiscreteTree, ProductUniform, Uniform01
from .errors import ConfigError
from .hypotheses import (BoxTarget, IntervalTarget, IntervalVS, PathTarget, RectangleVS,
                         ThresholdTarget, ThresholdVS, TreeClassVS, load_tree, random_tree)
from .learners import (AgnosticBeyondLearner, AgnosticThresholdLearner, BaselineLearner,
                       RectangleLearner, ShatteringLearner, Vc1Learner)

CLASSES = ("thresholds", "intervals", "tree", "rectangles")
ADVERSARIES = ("noop", "flood", "boundary", "tree_attack")
NOISES = ("none", "rcn", "massart")
CSV_COLUMNS = ("config_digest", "rep", "seed", "T", "mis", "abstain_iid",
               "rounds_injected", "diagnostics")
METADATA = {
    "log_base": "natural",
    "ci": "95% two-sided normal approximation, mean +/- 1.96 s/sqrt(n)",
    "ci_one_sided_upper": "mean + 1.645 s/sqrt(n)",
    "seed_rule": "replication i uses base_seed + i",
}


@dataclass
class ExperimentConfig:
    learner: str
    cls: str = "thresholds"
    T: int = 1000
    replications: int = 10
    base_seed: int = 0
    adversary: str = "noop"
    rate: float = 0.0
    noise: str = "none"
    eta: float = 0.0
    massart_profile: str = "ramp"
    p: int = 2
    tree: Optional[object] = None          # path, inline descriptor, or None for random
    tree_nodes: int = 13
    target: Optional[dict] = None          # fixed target, random per replication otherwise
    mc_samples: int = 4096
    rho_method: str = "auto"               # "auto" (exact when available) or "mc"
    offset: float = 0.02
    out_dir: str = "."
    results_csv: str = "results.csv"
    summary_json: str = "summary.json"
    bounds_csv: str = "bounds.csv"
    sweep: dict = field(default_factory=dict)

    _OUTPUT_FIELDS = ("out_dir", "results_csv", "summary_json", "bounds_csv", "sweep")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        if "class" in doc:
            doc["cls"] = doc.pop("class")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "learner" not in doc:
            raise ConfigError("config needs a learner")
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = cls.from_dict(doc)
        if isinstance(cfg.tree, str) and cfg.tree != "random" and not os.path.isabs(cfg.tree):
            cfg.tree = os.path.join(os.path.dirname(os.path.abspath(path)), cfg.tree)
        return cfg

    def validate(self) -> None:
        self.learner = canonical_learner(self.learner)
        if self.cls not in CLASSES:
            raise ConfigError(f"class must be one of {CLASSES}")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"adversary must be one of {ADVERSARIES}")
        if self.noise not in NOISES:
            raise ConfigError(f"noise must be one of {NOISES}")
        if not isinstance(self.T, int) or self.T < 1:
            raise ConfigError("T must be an integer >= 1")
        if not isinstance(self.replications, int) or self.replications < 1:
            raise ConfigError("replications must be an integer >= 1")
        if not 0.0 <= self.rate <= 1.0:
            raise ConfigError("rate must lie in [0, 1]")
        if self.rho_method not in ("auto", "mc"):
            raise ConfigError("rho_method must be auto or mc")
        if self.mc_samples < 1:
            raise ConfigError("mc_samples must be >= 1")
        if self.noise != "none" and not 0.0 <= self.eta < 0.5:
            raise ConfigError("eta must lie in [0, 1/2)")
        if self.cls == "rectangles" and self.p < 1:
            raise ConfigError("p must be >= 1")
        agnostic = self.learner in ("agnostic", "agnostic_beyond")
        if agnostic and self.cls != "thresholds":
            raise ConfigError(f"{self.learner} requires the thresholds class")
        if agnostic and self.noise == "none":
            raise ConfigError(f"{self.learner} needs a noise channel (rcn or massart)")
        if not agnostic and self.noise != "none":
            raise ConfigError(f"{self.learner} is a realizable learner; set noise to none")
        if self.learner == "rectangle" and self.cls != "rectangles":
            raise ConfigError("rectangle learner requires the rectangles class")
        if self.learner == "vc1" and self.cls not in ("thresholds", "tree"):
            raise ConfigError("vc1 learner requires a VC-dimension-one class (thresholds or tree)")
        if self.adversary == "tree_attack" and self.cls != "tree":
            raise ConfigError("tree_attack adversary requires the tree class")
        for key in self.sweep:
            if key not in ("T", "rate", "eta"):
                raise ConfigError(f"sweep axis {key!r} not supported (T, rate, eta)")

    def to_dict(self, outputs: bool = False) -> dict:
        d = dataclasses.asdict(self)
        d["class"] = d.pop("cls")
        if not outputs:
            for k in self._OUTPUT_FIELDS:
                d.pop(k, None)
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def bound_params(self) -> dict:
        d = {"thresholds": 1, "intervals": 2, "tree": 1, "rectangles": 2 * self.p}[self.cls]
        return {"d": d, "p": self.p, "eta": self.eta}


# ---------------------------------------------------------------------------
# building one replication

def _build_world(cfg: ExperimentConfig, streams: Streams):
    """(version space, distribution, target) for one replication."""
    rng = streams.target
    fixed = cfg.target or {}
    if cfg.cls == "thresholds":
        a = fixed.get("a", float(rng.random()))
        return ThresholdVS(), Uniform01(), ThresholdTarget(float(a))
    if cfg.cls == "intervals":
        if "a" in fixed:
            a, b = fixed["a"], fixed["b"]
        else:
            a, b = sorted(float(v) for v in rng.random(2))
        return IntervalVS(), Uniform01(), IntervalTarget(float(a), float(b))
    if cfg.cls == "tree":
        if cfg.tree is None or cfg.tree == "random":
            tree, path = random_tree(cfg.tree_nodes, rng), None
        else:
            tree, path = load_tree(cfg.tree)
        if "path" in fixed:
            path = list(fixed["path"])
        elif path is None or not path:
            v = int(rng.integers(0, len(tree) + 1))
            path = tree.path_to(tree.nodes[v - 1]) if v else []
        return TreeClassVS(tree), DiscreteTree.uniform(tree), PathTarget(tuple(path))
    p = cfg.p
    if "lo" in fixed:
        lo, hi = tuple(fixed["lo"]), tuple(fixed["hi"])
    else:
        c = np.sort(rng.random((p, 2)), axis=1)
        lo, hi = tuple(float(v) for v in c[:, 0]), tuple(float(v) for v in c[:, 1])
    return RectangleVS(p), ProductUniform(p), BoxTarget(lo, hi)


def _build_learner(cfg: ExperimentConfig, vs, dist, streams: Streams):
    if cfg.learner == "baseline":
        return BaselineLearner(vs)
    if cfg.learner == "shattering":
        return ShatteringLearner(vs, dist, cfg.T, mc_samples=cfg.mc_samples, rng=streams.learner,
                                 rho_method=cfg.rho_method)
    if cfg.learner == "vc1":
        return Vc1Learner(vs, cfg.T)
    if cfg.learner == "rectangle":
        return RectangleLearner(cfg.p, cfg.T)
    if cfg.learner == "agnostic":
        return AgnosticThresholdLearner(cfg.T, cfg.eta, dist)
    return AgnosticBeyondLearner(cfg.T, cfg.eta, dist)


def _build_adversary(cfg: ExperimentConfig):
    if cfg.adversary == "noop" or cfg.rate == 0.0:
        return NoOp()
    if cfg.adversary == "flood":
        return DisagreementFlood(cfg.rate)
    if cfg.adversary == "boundary":
        return BoundaryProbe(cfg.rate, cfg.offset)
    return TreeAttack(cfg.rate)


def _build_noise(cfg: ExperimentConfig):
    if cfg.noise == "none":
        return NoNoise()
    if cfg.noise == "rcn":
        return RCN(cfg.eta)
    return Massart(cfg.eta, cfg.massart_profile)


class RunMonitor:
    """Online invariant checks and per-replication diagnostics."""

    def __init__(self, learner, target):
        self.learner = learner
        self.target = target
        self.kind = learner.name
        self.abstain_total = 0
        self.mis_committed = 0
        d = {}
        if self.kind == "shattering":
            d.update(mis_drop_violations=0, level_increase_violations=0,
                     rho_increase_violations=0, mistakes_by_level={})
        elif self.kind == "vc1":
            d.update(drift_violations=0, max_gamma=0)
        elif self.kind == "rectangle":
            d.update(cond3_mistakes=0, cond_counts={"1": 0, "2": 0, "3": 0, "4": 0})
        elif self.kind in ("agnostic", "agnostic_beyond"):
            d.update(target_retained=True, first_removal_update=None)
            if self.kind == "agnostic_beyond":
                d.update(shatter_rule_abstentions=0, abstain_while_rho_ge_alpha=0)
        self.d = d

    def __call__(self, rec) -> None:
        ev, pred, step, upd = rec.event, rec.prediction, rec.step, rec.update
        committed = pred != ABSTAIN
        wrong = committed and int(pred) != ev.observed_label
        self.abstain_total += not committed
        self.mis_committed += int(wrong) - int(committed and ev.clean_label != ev.observed_label)
        d = self.d
        if self.kind == "shattering":
            k = upd["level_before"]
            if upd["level_after"] > k:
                d["level_increase_violations"] += 1
            if k > 0 and upd["rho_after"] > upd["rho_before"] + 1e-12:
                d["rho_increase_violations"] += 1
            if wrong:
                key = str(k)
                d["mistakes_by_level"][key] = d["mistakes_by_level"].get(key, 0) + 1
                if k > 0 and not upd["rho_after"] < 0.6 * upd["rho_before"]:
                    d["mis_drop_violations"] += 1
        elif self.kind == "vc1":
            alpha = self.learner.alpha
            if upd["gamma"] > upd["gamma_prev"] - alpha * int(wrong) + 1 + 1e-9:
                d["drift_violations"] += 1
            d["max_gamma"] = max(d["max_gamma"], upd["gamma"])
        elif self.kind == "rectangle":
            d["cond_counts"][str(step["cond"])] += 1
            if wrong and step["cond"] == 3:
                d["cond3_mistakes"] += 1
        elif self.kind in ("agnostic", "agnostic_beyond"):
            if upd.get("update") and d["target_retained"]:
                if not self.learner.vs.contains_param(self.target.a):
                    d["target_retained"] = False
                    d["first_removal_update"] = self.learner.updates
            if self.kind == "agnostic_beyond" and step.get("rule") == "shatter":
                if not committed:
                    d["shatter_rule_abstentions"] += 1
                    d["abstain_while_rho_ge_alpha"] += 1

    def diagnostics(self) -> dict:
        out = dict(self.d)
        out["abstain_total"] = self.abstain_total
        if self.kind in ("agnostic", "agnostic_beyond"):
            out["mis_committed"] = self.mis_committed
            out.update(self.learner.stall_stats())
            if self.kind == "agnostic":
                out["partial_buffer_discarded"] = len(self.learner._buf_x)
        if self.kind == "shattering":
            out["final_level"] = self.learner.k
        if self.kind == "vc1":
            out["final_gamma"] = self.learner.gamma_now
        return out


def run_replication(cfg: ExperimentConfig, rep: int) -> dict:
    seed = cfg.base_seed + rep
    streams = Streams.from_seed(seed)
    vs, dist, target = _build_world(cfg, streams)
    learner = _build_learner(cfg, vs, dist, streams)
    monitor = RunMonitor(learner, target)
    res = run_protocol(learner, _build_adversary(cfg), dist, target, _build_noise(cfg),
                       cfg.T, streams, monitor=monitor)
    mode = Mode.REALIZABLE if cfg.noise == "none" else Mode.AGNOSTIC
    diag = monitor.diagnostics()
    diag["target"] = target.to_dict()
    diag["aborted"] = res.aborted
    diag["abort_round"] = res.abort_round
    return {"config_digest": cfg.digest(), "rep": rep, "seed": seed, "T": cfg.T,
            "mis": res.tally.mis(mode), "abstain_iid": res.tally.abstain_on_iid,
            "rounds_injected": res.rounds_injected, "diagnostics": diag}


# ---------------------------------------------------------------------------
# lockstep engine for the threshold baseline
#
# Replays exactly the random draws of the scalar path (target, then two
# adversary uniforms and one i.i.d. uniform per round) for many replications
# at once, so the per-replication results are identical to run_replication.

def _batched_eligible(cfg: ExperimentConfig) -> bool:
    return (cfg.learner == "baseline" and cfg.cls == "thresholds" and cfg.noise == "none"
            and (cfg.adversary in ("noop", "flood") or cfg.rate == 0.0))


def _run_baseline_batch(cfg: ExperimentConfig, reps: list) -> list:
    n, T = len(reps), cfg.T
    flood = cfg.adversary == "flood" and cfg.rate > 0.0
    streams = [Streams.from_seed(cfg.base_seed + r) for r in reps]
    fixed = (cfg.target or {}).get("a")
    a = np.array([float(fixed) if fixed is not None else float(s.target.random()) for s in streams])
    X = np.stack([s.iid.random(T) for s in streams])
    if flood:
        UV = np.stack([s.adversary.random((T, 2)) for s in streams])
    lo = np.zeros(n)
    hi = np.ones(n)
    hi_open = np.zeros(n, dtype=bool)
    abst_iid = np.zeros(n, dtype=np.int64)
    abst_all = np.zeros(n, dtype=np.int64)
    mis = np.zeros(n, dtype=np.int64)
    injected = np.zeros(n, dtype=np.int64)
    for t in range(T):
        x = X[:, t]
        if flood:
            u, v = UV[:, t, 0], UV[:, t, 1]
            inj = (u < cfg.rate) & (hi - lo > 0)
            xi = np.clip(hi - v * (hi - lo), 0.0, 1.0)
            inside = (lo < xi) & np.where(hi_open, xi < hi, xi <= hi)
            xi = np.where(inside, xi, np.clip(0.5 * (lo + hi), 0.0, 1.0))
            x = np.where(inj, xi, x)
            injected += inj
        else:
            inj = np.zeros(n, dtype=bool)
        y = x <= a
        dis = (lo < x) & np.where(hi_open, x < hi, x <= hi)
        pred_one = x <= lo
        committed = ~dis
        mis += committed & (pred_one != y)
        abst_iid += dis & ~inj
        abst_all += dis
        lo = np.where(y, np.maximum(lo, x), lo)
        shrink = ~y & ((x < hi) | ((x == hi) & ~hi_open))
        hi = np.where(shrink, x, hi)
        hi_open |= shrink
    if np.any(lo > hi) or np.any((lo == hi) & hi_open):
        raise AssertionError("threshold version space emptied in a realizable run")
    digest = cfg.digest()
    rows = []
    for i, r in enumerate(reps):
        diag = {"abstain_total": int(abst_all[i]), "target": ThresholdTarget(float(a[i])).to_dict(),
                "aborted": None, "abort_round": None}
        rows.append({"config_digest": digest, "rep": r, "seed": cfg.base_seed + r, "T": T,
                     "mis": int(mis[i]), "abstain_iid": int(abst_iid[i]),
                     "rounds_injected": int(injected[i]), "diagnostics": diag})
    return rows


def _run_chunk(args) -> list:
    cfg_doc, reps, batched = args
    cfg = ExperimentConfig.from_dict(cfg_doc)
    if batched:
        return _run_baseline_batch(cfg, reps)
    return [run_replication(cfg, r) for r in reps]


def default_jobs() -> int:
    env = os.environ.get("ABSTAIN_LAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"ABSTAIN_LAB_JOBS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# aggregation

def mean_ci(values) -> dict:
    v = np.asarray(values, dtype=float)
    n = len(v)
    if n == 0:
        return {"n": 0, "mean": None, "ci95": [None, None], "upper_one_sided": None, "sd": None}
    m = float(v.mean())
    sd = float(v.std(ddof=1)) if n > 1 else 0.0
    se = sd / math.sqrt(n)
    return {"n": n, "mean": m, "sd": sd, "ci95": [m - 1.96 * se, m + 1.96 * se],
            "upper_one_sided": m + 1.645 * se}


def summarize(cfg: ExperimentConfig, rows: list, wall_time: float) -> dict:
    ok = [r for r in rows if r["diagnostics"].get("aborted") is None]
    mis = mean_ci([r["mis"] for r in ok])
    ab = mean_ci([r["abstain_iid"] for r in ok])
    out = {"config_digest": cfg.digest(), "learner": cfg.learner, "class": cfg.cls,
           "adversary": cfg.adversary, "rate": cfg.rate, "noise": cfg.noise, "eta": cfg.eta,
           "T": cfg.T, "replications": len(rows), "aborted": len(rows) - len(ok),
           "mis": mis, "abstain_iid": ab, "wall_time_s": wall_time,
           "experimental": cfg.learner in EXPERIMENTAL, "metadata": METADATA}
    if cfg.learner not in EXPERIMENTAL:
        b = bound_values(cfg.learner, cfg.T, cfg.bound_params())
        out["bound_mis"] = b["mis"]
        out["bound_abstain"] = b["abstain"]
        out["mis_bound_satisfied"] = (None if b["mis"] is None or mis["mean"] is None
                                      else bool(mis["mean"] <= b["mis"]))
        out["abstain_bound_satisfied"] = (None if b["abstain"] is None or ab["mean"] is None
                                          else bool(ab["mean"] <= b["abstain"]))
    return out


def run_experiment(cfg: ExperimentConfig, jobs: Optional[int] = None,
                   chunk_size: Optional[int] = None) -> tuple:
    """Run all replications; returns (summary dict, rows in replication order)."""
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    batched = _batched_eligible(cfg)
    reps = list(range(cfg.replications))
    size = chunk_size or (100 if batched else max(1, math.ceil(len(reps) / (4 * jobs))))
    chunks = [(cfg.to_dict(), reps[i:i + size], batched) for i in range(0, len(reps), size)]
    t0 = time.perf_counter()
    if jobs == 1 or len(chunks) == 1:
        parts = [_run_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, chunks))
    rows = list(itertools.chain.from_iterable(parts))
    return summarize(cfg, rows, time.perf_counter() - t0), rows


# ---------------------------------------------------------------------------
# files

def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r["config_digest"], r["rep"], r["seed"], r["T"], r["mis"],
                    r["abstain_iid"], r["rounds_injected"],
                    json.dumps(r["diagnostics"], sort_keys=True)])
    return buf.getvalue()


def read_results_csv(path: str) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in ("rep", "seed", "T", "mis", "abstain_iid", "rounds_injected"):
            r[k] = int(r[k])
        r["diagnostics"] = json.loads(r["diagnostics"])
    return rows


def bounds_to_csv(curves: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("learner", "formula", "T", "value"))
    for c in curves:
        for T, v in zip(c.T, c.values):
            w.writerow((c.learner, c.formula, T, repr(float(v))))
    return buf.getvalue()


def write_outputs(cfg: ExperimentConfig, summary: dict, rows: list,
                  out_dir: Optional[str] = None) -> dict:
    out_dir = cfg.out_dir if out_dir is None else out_dir
    os.makedirs(out_dir, exist_ok=True)
    paths = {"results": os.path.join(out_dir, cfg.results_csv),
             "summary": os.path.join(out_dir, cfg.summary_json),
             "bounds": os.path.join(out_dir, cfg.bounds_csv)}
    with open(paths["results"], "w", newline="") as fh:
        fh.write(rows_to_csv(rows))
    with open(paths["summary"], "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    curves = bounds(cfg.learner, cfg.bound_params(), sorted({max(2, cfg.T // 10), cfg.T // 2 or 1, cfg.T}))
    with open(paths["bounds"], "w", newline="") as fh:
        fh.write(bounds_to_csv(curves))
    return paths


def sweep_configs(cfg: ExperimentConfig) -> list:
    axes = sorted(cfg.sweep)
    if not axes:
        return [cfg]
    out = []
    for combo in itertools.product(*(cfg.sweep[a] for a in axes)):
        doc = cfg.to_dict(outputs=True)
        doc.pop("sweep")
        for a, v in zip(axes, combo):
            doc[a] = v
        out.append(ExperimentConfig.from_dict(doc))
    return out


# ---------------------------------------------------------------------------
# scripted replays

def replay_stream(doc: dict) -> dict:
    """Run a scripted stream document and return its trace."""
    from .adversaries import scripted_from_doc
    cls = doc.get("class")
    learner_name = canonical_learner(doc.get("learner", "vc1"))
    script = scripted_from_doc(doc)
    T = int(doc.get("T", len(script)))
    target = None
    if cls == "tree":
        tree, path = load_tree(doc["tree"])
        vs = TreeClassVS(tree, doc.get("reference_path", ()))
        target = PathTarget(tuple(path))
        dist = DiscreteTree.uniform(tree)
    elif cls == "thresholds":
        vs, dist = ThresholdVS(), Uniform01()
        if "target" in doc:
            target = ThresholdTarget(float(doc["target"]["a"]))
    elif cls == "intervals":
        vs, dist = IntervalVS(), Uniform01()
        if "target" in doc:
            target = IntervalTarget(float(doc["target"]["a"]), float(doc["target"]["b"]))
    elif cls == "rectangles":
        vs, dist = RectangleVS(int(doc["p"])), ProductUniform(int(doc["p"]))
        if "target" in doc:
            target = BoxTarget(tuple(doc["target"]["lo"]), tuple(doc["target"]["hi"]))
    else:
        raise ConfigError(f"replay needs class in {CLASSES}")
    if target is None and any(r.label is None for r in script.rounds):
        raise ConfigError("without a target every scripted round needs a label")
    cfg_like = ExperimentConfig(learner=learner_name, cls=cls, T=T, p=int(doc.get("p", 2)),
                                eta=float(doc.get("eta", 0.0)))
    learner = _build_learner(cfg_like, vs, dist, Streams.from_seed(int(doc.get("seed", 0))))
    res = run_protocol(learner, script, dist, target, NoNoise(), T, Streams.from_seed(0),
                       record=True, rounds=len(script), raise_on_abort=True)
    trace = []
    for rec in res.log:
        ev = rec.event
        row = {"t": ev.round_index, "point": ev.point, "origin": ev.origin.value,
               "prediction": "abstain" if rec.prediction == ABSTAIN else int(rec.prediction),
               "label": ev.observed_label}
        row.update(rec.step)
        row.update(rec.update)
        trace.append(row)
    final = {}
    if isinstance(learner.vs, RectangleVS):
        final = {"box_lo": learner.vs.lo.tolist(), "box_hi": learner.vs.hi.tolist()}
    elif isinstance(learner, Vc1Learner):
        final = {"gamma": learner.gamma_now, "alpha": learner.alpha}
    if hasattr(learner, "alpha") and "alpha" not in final:
        final["alpha"] = learner.alpha
    return {"trace": trace, "final": final,
            "tally": dataclasses.asdict(res.tally)}
