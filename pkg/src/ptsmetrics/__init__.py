"""Exact trace and testing distances for nondeterministic probabilistic
transition systems."""
from .intervals import AchievableSet, hausdorff_one_sided
from .limits import CapExceeded
from .mdp import opt_success_prob
from .modelfile import Model, ParseError, emit_dot, emit_model, parse_model
from .pts import (Distribution, InteractionSystem, ModelError, Npt, Pts, Transition,
                  build_interaction_system, classify, parallel_compose, process_test_product,
                  structure_info, validate_npt, validate_pts)
from .relations import (CompatReport, MetricSelector, RelationOutcome, RelationQuery,
                        RobustnessVerdict, check_backward_compat, check_relation,
                        check_robustness)
from .resolutions import (Resolver, achievable_set, count_det_resolutions,
                          enumerate_det_resolutions, trace_distribution)
from .testing_metrics import (CyclicInteraction, TestingMetricSpec, TestSuite,
                              testing_hemimetric, testing_pseudometric)
from .trace_metrics import MetricResult, TraceMetricSpec, trace_hemimetric, trace_pseudometric

__version__ = "0.1.0"
