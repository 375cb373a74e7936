"""How much does flooding the disagreement region cost a disagreement-based
learner?  Abstentions are only charged on i.i.d. rounds, so injections mostly
shrink the region faster and abstentions fall.
"""
import math

from abstain_lab import ExperimentConfig, run_experiment

if __name__ == "__main__":
    T = 5000
    print(f"bound 2 ln T = {2 * math.log(T):.2f}")
    for rate in (0.0, 0.25, 0.5, 0.9):
        cfg = ExperimentConfig.from_dict({"learner": "baseline", "class": "thresholds", "T": T,
                                          "replications": 300, "adversary": "flood", "rate": rate})
        s, _ = run_experiment(cfg, jobs=1)
        print(f"rate={rate:<5} mean abstain={s['abstain_iid']['mean']:6.3f} "
              f"mean mis={s['mis']['mean']:.1f}")
