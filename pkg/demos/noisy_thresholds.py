"""Thresholds under random classification noise with an adversary flooding
the disagreement region.  Prints how the version space narrows per update."""
import numpy as np

from abstain_lab import (RCN, AgnosticThresholdLearner, DisagreementFlood, ThresholdTarget,
                         Uniform01, run_protocol)

if __name__ == "__main__":
    T, eta, a = 5000, 0.2, 0.37
    learner = AgnosticThresholdLearner(T, eta)
    res = run_protocol(learner, DisagreementFlood(0.3), Uniform01(), ThresholdTarget(a),
                       RCN(eta), T, 0, record=True)
    print(f"M={learner.M} Delta={learner.delta}")
    for rec in res.log:
        if rec.update.get("update"):
            u = rec.update
            print(f"  round {rec.event.round_index:5d}: [{u['lo']:.4f}, {u['hi']:.4f}]  "
                  f"contains a: {u['lo'] <= a <= u['hi']}")
    print(f"tally: {res.tally}")
