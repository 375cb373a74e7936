"""Replay the two bundled scripted streams and print their traces.

The tree stream shows the leave-one-out estimate gamma moving as points
arrive; the rectangle stream ends with a confident 0 that turns out wrong.
"""
import json
from importlib import resources

from abstain_lab import replay_stream


def show(name):
    doc = json.loads(resources.files("abstain_lab").joinpath("data", name).read_text())
    res = replay_stream(doc)
    print(f"== {name}")
    for row in res["trace"]:
        extra = {k: v for k, v in row.items() if k not in ("t", "point", "origin", "prediction", "label")}
        print(f"  t={row['t']:<3d} x={row['point']!s:<12} pred={row['prediction']!s:<8} y={row['label']} {extra}")
    print(f"  final: {res['final']}")
    print(f"  tally: {res['tally']}")


if __name__ == "__main__":
    show("vc1tree.json")
    show("rectangle_witnesses.json")
