"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest (lines are collected in the terminal summary) or directly
with `python3 tests/test_acceptance.py`.
"""
import json
import math
import os
import sys
import time

import numpy as np
import pytest

from abstain_lab import oracles
from abstain_lab.bounds import agnostic_abstention_bound
from abstain_lab.harness import ExperimentConfig, replay_stream, rows_to_csv, run_experiment

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
CONFIGS = os.path.join(ROOT, "configs")
DATA = os.path.join(ROOT, "src", "abstain_lab", "data")

RESULTS: dict = {}
_RUNS: dict = {}

pytestmark = pytest.mark.slow


def report(key: str, checks: list) -> bool:
    """checks: list of (description, ok).  Records and prints one line."""
    ok = all(c for _, c in checks)
    detail = "; ".join(f"{d}{'' if c else ' [FAILED]'}" for d, c in checks)
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[key] = line
    print(line)
    return ok


def run_config(name: str) -> tuple:
    """Run configs/<name>.json once per session; returns (summary, rows, csv, seconds)."""
    if name not in _RUNS:
        cfg = ExperimentConfig.load(os.path.join(CONFIGS, f"{name}.json"))
        t0 = time.perf_counter()
        summary, rows = run_experiment(cfg)
        _RUNS[name] = (summary, rows, rows_to_csv(rows), time.perf_counter() - t0)
    return _RUNS[name]


def test_c1_baseline_thresholds():
    bound = 2 * math.log(10_000)
    checks, total = [], 0.0
    for name in ("c1_baseline_noop", "c1_baseline_flood"):
        s, rows, _, secs = run_config(name)
        total += secs
        adv = s["adversary"]
        checks.append((f"{adv}: max mis {max(r['mis'] for r in rows)} == 0",
                       all(r["mis"] == 0 for r in rows)))
        ab = s["abstain_iid"]
        checks.append((f"{adv}: mean abstain {ab['mean']:.3f}, one-sided upper "
                       f"{ab['upper_one_sided']:.3f} <= {bound:.2f}",
                       ab["upper_one_sided"] <= bound))
    checks.append((f"runtime {total:.1f}s < 10s", total < 10.0))
    assert report("1", checks)


def test_c2_shattering_intervals():
    s, rows, _, secs = run_config("c2_shattering_intervals")
    d = 2
    mis_b, ab_b = d * d * math.log(2000), 6 * d
    viol = sum(r["diagnostics"]["mis_drop_violations"] for r in rows)
    checks = [
        (f"mean mis {s['mis']['mean']:.3f} <= {mis_b:.2f}", s["mis"]["mean"] <= mis_b),
        (f"mean abstain {s['abstain_iid']['mean']:.3f} <= {ab_b}", s["abstain_iid"]["mean"] <= ab_b),
        (f"rho-drop violations on mistakes {viol} == 0", viol == 0),
        (f"runtime {secs:.1f}s < 120s", secs < 120.0),
    ]
    assert report("2", checks)


def _trace(name: str) -> dict:
    with open(os.path.join(DATA, name)) as fh:
        return replay_stream(json.load(fh))


def test_c3_vc1tree_golden():
    tr = {row["t"]: row for row in _trace("vc1tree.json")["trace"]}
    a, b = tr[11], tr[12]
    checks = [
        (f"gamma before x=9: {a['gamma_prev']} == 8", a["gamma_prev"] == 8),
        (f"a0(9) {a['a0']} == 6", a["a0"] == 6),
        (f"prediction {a['prediction']} == 0 == label {a['label']}",
         a["prediction"] == 0 and a["label"] == 0),
        (f"gamma after x=9: {a['gamma']} == 9", a["gamma"] == 9),
        (f"a0(6) {b['a0']} == 4", b["a0"] == 4),
        (f"prediction {b['prediction']} == 0 != label {b['label']}",
         b["prediction"] == 0 and b["label"] == 1),
        (f"gamma after x=6: {b['gamma']} == 6", b["gamma"] == 6),
    ]
    assert report("3", checks)


def test_c4_vc1_random_trees():
    s, rows, _, secs = run_config("c4_vc1_trees")
    T = 500
    bound = math.sqrt(T * math.log(T))
    worst = max(r["mis"] for r in rows)
    drift = sum(r["diagnostics"]["drift_violations"] for r in rows)
    checks = [
        (f"max per-rep mis {worst} <= {bound:.2f}", worst <= bound),
        (f"mean abstain {s['abstain_iid']['mean']:.3f} <= {bound:.2f}",
         s["abstain_iid"]["mean"] <= bound),
        (f"drift violations {drift} == 0", drift == 0),
    ]
    assert report("4", checks)


def test_c5_rectangles():
    res = _trace("rectangle_witnesses.json")
    last = res["trace"][-1]
    box = (res["final"]["box_lo"], res["final"]["box_hi"])
    checks = [
        (f"scripted: prediction {last['prediction']} == 0 with {last.get('witnesses')} witnesses",
         last["prediction"] == 0 and last.get("cond") == 3),
        (f"scripted: label {last['label']} recorded as misclassification",
         last["label"] == 1 and res["tally"]["mis_realizable"] >= 1),
        (f"scripted: box {box} == ([-2, -2], [4, 2])", box == ([-2.0, -2.0], [4.0, 2.0])),
    ]
    s, rows, _, secs = run_config("c5_rectangles")
    T, p = 2000, 2
    mis_b = p * math.sqrt(T * math.log(T))
    ab_b = 2 * p * math.sqrt(T * math.log(T)) + 2 * p * math.log(T)
    worst = max(r["mis"] for r in rows)
    checks += [
        (f"max per-rep mis {worst} <= {mis_b:.2f}", worst <= mis_b),
        (f"mean abstain {s['abstain_iid']['mean']:.3f} <= {ab_b:.2f}",
         s["abstain_iid"]["mean"] <= ab_b),
    ]
    assert report("5", checks)


def test_c6_agnostic_thresholds():
    s, rows, _, secs = run_config("c6_agnostic")
    retained = np.mean([r["diagnostics"]["target_retained"] for r in rows])
    mis = s["mis"]
    committed = np.mean([r["diagnostics"]["mis_committed"] for r in rows])
    bound = agnostic_abstention_bound(5000, 0.2)
    checks = [
        (f"target retained in {retained:.3f} of reps >= 0.95", retained >= 0.95),
        (f"mean mis_agnostic {mis['mean']:.3f} <= 1 (committed-round regret {committed:.3f})",
         mis["mean"] <= 1.0),
        (f"ci95 upper {mis['ci95'][1]:.3f} <= 1.5", mis["ci95"][1] <= 1.5),
        (f"mean abstain {s['abstain_iid']['mean']:.1f} <= {bound:.2f}",
         s["abstain_iid"]["mean"] <= bound),
        (f"runtime {secs:.1f}s < 300s", secs < 300.0),
    ]
    assert report("6", checks)


def test_c7_oracle_equivalence():
    sh = oracles.check_shatters(n=1000, seed=0)
    ga = oracles.check_gamma(n=1000, seed=0)
    rh = oracles.check_rho(n=50, m=100_000, seed=0)
    checks = [
        (f"shatters {sh['mismatches']}/{sh['instances']} mismatches", sh["mismatches"] == 0),
        (f"gamma {ga['mismatches']}/{ga['instances']} mismatches", ga["mismatches"] == 0),
        (f"rho_mc outside 3 stderr {rh['mismatches']}/{rh['instances']}", rh["mismatches"] == 0),
    ]
    assert report("7", checks)


def test_c8_agnostic_beyond():
    s, rows, _, secs = run_config("c8_agnostic_beyond")
    bad = sum(r["diagnostics"]["abstain_while_rho_ge_alpha"] for r in rows)
    checks = [
        (f"mean abstain {s['abstain_iid']['mean']:.3f} <= 1", s["abstain_iid"]["mean"] <= 1.0),
        (f"abstentions while rho_1 >= 1/T: {bad} == 0", bad == 0),
    ]
    assert report("8", checks)


def test_c9_determinism():
    names = ("c1_baseline_noop", "c1_baseline_flood", "c2_shattering_intervals",
             "c4_vc1_trees", "c5_rectangles", "c6_agnostic", "c8_agnostic_beyond")
    checks = []
    for name in names:
        first = run_config(name)[2]
        cfg = ExperimentConfig.load(os.path.join(CONFIGS, f"{name}.json"))
        again = rows_to_csv(run_experiment(cfg)[1])
        checks.append((f"{name} {'identical' if again == first else 'differs'}", again == first))
    assert report("9", checks)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
