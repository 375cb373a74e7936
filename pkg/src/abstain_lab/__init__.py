"""Abstaining online learners under clean-label injection."""
from .core import (ABSTAIN, ErrorTally, LabeledSet, Mode, Origin, Prediction, StreamEvent,
                   tally_delta, tally_update)
from .errors import (AbstainLabError, ConfigError, DuplicatePoints, EmptyVersionSpace,
                     InconsistentSample, InjectionOffSupport, RunAborted, UseMonteCarlo)
from .hypotheses import (BoxTarget, IntervalTarget, IntervalVS, PathTarget, RectangleVS,
                         ThresholdTarget, ThresholdVS, Tree, TreeClassVS, VersionSpace,
                         consistent_label, dis_contains, gamma, load_tree, random_tree,
                         restrict, shatters)
from .distributions import (DiscreteTree, ProductUniform, ShatterEstimate, Uniform01,
                            region_mass, rho_k, rho_k_exact, rho_k_mc, sample)
from .learners import (AgnosticBeyondLearner, AgnosticThresholdLearner, BaselineLearner,
                       Learner, RectangleLearner, ShatteringLearner, StepOutcome, Vc1Learner)
from .adversaries import (RCN, BoundaryProbe, DisagreementFlood, Massart, NoNoise, NoOp,
                          ProtocolResult, Scripted, Streams, TreeAttack, run_protocol)
from .bounds import BoundCurve, bounds
from .harness import ExperimentConfig, replay_stream, run_experiment, write_outputs

__version__ = "0.1.0"
