"""Command-line entry point.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure
(an aborted replication, an oracle mismatch, or an aborted replay).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bounds import agnostic_parameters, bounds, canonical_learner
from .errors import AbstainLabError, ConfigError, RunAborted
from .harness import (ExperimentConfig, bounds_to_csv, replay_stream, run_experiment,
                      sweep_configs, write_outputs)
from . import oracles

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("config_path", nargs="?", help="experiment config (JSON)")
    p.add_argument("--config", dest="config_flag", help="experiment config (JSON)")
    p.add_argument("--out", help="output directory (overrides out_dir)")
    p.add_argument("--seed", type=int, help="override base_seed")
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--mc-samples", type=int, help="override mc_samples")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abstain-lab", description="Abstaining online learners under clean-label injection.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_run_args(sub.add_parser("run", help="run one experiment config"))
    _add_run_args(sub.add_parser("sweep", help="run every point of a config's sweep grid"))

    b = sub.add_parser("bounds", help="print theoretical bound curves")
    b.add_argument("--learner", required=True)
    b.add_argument("--T", type=int, action="append", required=True, dest="T",
                   help="horizon (repeatable)")
    b.add_argument("--eta", type=float)
    b.add_argument("--d", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--out", help="write bounds CSV here")

    o = sub.add_parser("oracle", help="check fast routines against brute force")
    o.add_argument("which", choices=("shatters", "gamma", "rho", "all"))
    o.add_argument("--instances", type=int)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--mc-samples", type=int, default=100_000)

    r = sub.add_parser("replay", help="replay a scripted stream and print its trace")
    r.add_argument("stream")
    r.add_argument("--out", help="write the trace as JSON here")
    return parser


def _load_config(args) -> ExperimentConfig:
    path = args.config_flag or args.config_path
    if not path:
        raise ConfigError("a config file is required")
    cfg = ExperimentConfig.load(path)
    if args.seed is not None:
        cfg.base_seed = args.seed
    if args.mc_samples is not None:
        cfg.mc_samples = args.mc_samples
    if args.out is not None:
        cfg.out_dir = args.out
    cfg.validate()
    return cfg


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.3f}"


def _print_summary(s: dict) -> None:
    print(f"[{s['config_digest']}] {s['learner']} on {s['class']}, adversary={s['adversary']} "
          f"rate={s['rate']} noise={s['noise']} eta={s['eta']} T={s['T']} reps={s['replications']}")
    for key in ("mis", "abstain_iid"):
        st = s[key]
        lo, hi = st["ci95"]
        bound = s.get("bound_" + ("mis" if key == "mis" else "abstain"))
        print(f"  {key:12s} mean={_fmt(st['mean'])} ci95=[{_fmt(lo)}, {_fmt(hi)}] bound={_fmt(bound)}")
    if s["aborted"]:
        print(f"  aborted replications: {s['aborted']}")
    print(f"  wall time {s['wall_time_s']:.2f}s")


def _cmd_run(args, configs) -> int:
    status = EXIT_OK
    for cfg in configs:
        summary, rows = run_experiment(cfg, jobs=args.jobs)
        paths = write_outputs(cfg, summary, rows)
        _print_summary(summary)
        print(f"  wrote {paths['results']}, {paths['summary']}, {paths['bounds']}")
        if summary["aborted"]:
            status = EXIT_RUNTIME
    return status


def _cmd_bounds(args) -> int:
    learner = canonical_learner(args.learner)
    params = {"d": args.d, "p": args.p, "eta": args.eta}
    curves = bounds(learner, params, args.T)
    if not curves:
        print(f"{learner}: no bounds are stated for this learner")
        return EXIT_OK
    for T in args.T:
        line = f"{learner} T={T}"
        if learner == "agnostic":
            ap = agnostic_parameters(T, args.eta)
            line += f" M={ap['M']} Delta={ap['Delta']:g}"
        print(line)
        for c in curves:
            print(f"  {c.formula} = {c.values[c.T.index(T)]:.2f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(bounds_to_csv(curves))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    which = ("shatters", "gamma", "rho") if args.which == "all" else (args.which,)
    failed = False
    for w in which:
        if w == "rho":
            res = oracles.check_rho(n=args.instances or 50, m=args.mc_samples, seed=args.seed)
        else:
            fn = getattr(oracles, f"check_{w}")
            res = fn(n=args.instances or 1000, seed=args.seed)
        print(f"{w}: {res['instances']} instances, {res['mismatches']} mismatches")
        for ex in res.get("examples", [])[:5]:
            print(f"  {ex}")
        failed |= res["mismatches"] > 0
    return EXIT_RUNTIME if failed else EXIT_OK


def _cmd_replay(args) -> int:
    try:
        with open(args.stream) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read stream {args.stream}: {exc}") from exc
    result = replay_stream(doc)
    for row in result["trace"]:
        extra = {k: v for k, v in row.items()
                 if k not in ("t", "point", "origin", "prediction", "label")}
        print(f"t={row['t']:<3d} x={row['point']!s:<14} {row['origin']:8s} "
              f"pred={row['prediction']!s:<7} y={row['label']}  {json.dumps(extra, sort_keys=True)}")
    print(f"final {json.dumps(result['final'], sort_keys=True)}")
    print(f"tally {json.dumps(result['tally'], sort_keys=True)}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, [_load_config(args)])
        if args.command == "sweep":
            return _cmd_run(args, sweep_configs(_load_config(args)))
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        return _cmd_replay(args)
    except ConfigError as exc:
        print(f"abstain-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RunAborted as exc:
        print(f"abstain-lab: run aborted at round {exc.round_index}: {exc.cause}", file=sys.stderr)
        return EXIT_RUNTIME
    except AbstainLabError as exc:
        print(f"abstain-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
