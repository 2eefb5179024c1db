"""Testing distances: may, must, may/must, trace-by-trace and supremal.

Every test in a finite suite is run against both processes through their
interaction systems.  may/must compare optimal success probabilities,
weighted per test by omega; tbt and sup compare success probabilities of
individual traces, weighted by lambda**(len - 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .mdp import opt_success_prob
from .pts import Npt, Pts, build_interaction_system, structure_info
from .resolutions import Resolver
from .trace_metrics import MetricResult, sup_distance, tbt_distance, truncation_bound

ZERO = Fraction(0)
ONE = Fraction(1)

TESTING_APPROACHES = ("may", "must", "mm", "tbt", "sup")


@dataclass
class TestSuite:
    """Named tests with a weight in (0, 1] each (default 1)."""

    __test__ = False

    tests: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.tests, dict):
            self.tests = {o.name: o for o in self.tests}
        for name, o in self.tests.items():
            if not isinstance(o, Npt):
                raise TypeError(f"test {name!r} is not an Npt")
        self.omega = {k: Fraction(v) for k, v in self.omega.items()}
        for name, w in self.omega.items():
            if name not in self.tests:
                raise ValueError(f"weight given for unknown test {name!r}")
            if not 0 < w <= 1:
                raise ValueError(f"weight of {name!r} must lie in (0, 1]")

    def weight(self, name) -> Fraction:
        return self.omega.get(name, ONE)

    def __len__(self):
        return len(self.tests)

    def items(self):
        return sorted(self.tests.items())

    @classmethod
    def with_depth_weights(cls, tests, lam) -> "TestSuite":
        """Suite whose weights are lambda**depth(o)."""
        suite = cls(tests)
        lam = Fraction(lam)
        suite.omega = {name: lam ** int(structure_info(o.base, o.init).depth)
                       for name, o in suite.tests.items()}
        for name, o in suite.tests.items():
            if not structure_info(o.base, o.init).acyclic:
                raise ValueError(f"test {name!r} has no finite depth")
        return suite


@dataclass(frozen=True)
class TestingMetricSpec:
    __test__ = False

    approach: str
    scheduler: str = "det"
    lam: Fraction = ONE
    depth: Optional[int] = None  # tbt/sup only; None means the interaction depth
    direction: str = "left"

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.approach not in TESTING_APPROACHES:
            raise ValueError(f"approach must be one of {TESTING_APPROACHES}")
        if self.scheduler not in ("det", "rand"):
            raise ValueError("scheduler must be det or rand")
        if not 0 < self.lam <= 1:
            raise ValueError("lambda must lie in (0, 1]")
        if self.depth is not None and self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.direction not in ("left", "right", "symmetric"):
            raise ValueError("direction must be left, right or symmetric")


class CyclicInteraction(ValueError):
    pass


def _success_values(p, s, o, objective):
    system = build_interaction_system(p, o, s)
    return opt_success_prob(system, system.root, objective)


def _may_must(ps, s, pt, t, suite, objectives):
    best, witness = ZERO, None
    for name, o in suite.items():
        w = suite.weight(name)
        for objective in objectives:
            vs = _success_values(ps, s, o, objective)
            vt = _success_values(pt, t, o, objective)
            d = max(ZERO, w * (vs - vt))
            if d > best:
                best = d
                witness = {"test": name, "objective": objective, "left": str(vs), "right": str(vt)}
    return best, witness


def _trace_family(ps, s, pt, t, suite, spec):
    best, witness = ZERO, None
    for name, o in suite.items():
        sys_s = build_interaction_system(ps, o, s)
        sys_t = build_interaction_system(pt, o, t)
        infos = [structure_info(sys_s.pts, sys_s.root), structure_info(sys_t.pts, sys_t.root)]
        if not all(i.acyclic for i in infos):
            raise CyclicInteraction(
                f"interaction with test {name!r} is cyclic; trace-indexed testing "
                "distances need acyclic interaction systems")
        depth = spec.depth or max(1, int(max(i.depth for i in infos)))
        rs = Resolver(sys_s.pts, maximal=True, success=sys_s.success)
        rt = Resolver(sys_t.pts, maximal=True, success=sys_t.success)
        if spec.approach == "tbt":
            d, wit = tbt_distance(rs, sys_s.root, rt, sys_t.root, depth, spec.lam, spec.scheduler)
        else:
            d, wit = sup_distance(rs, sys_s.root, rt, sys_t.root, depth, spec.lam)
        if d > best:
            best = d
            witness = dict(wit, test=name)
    return best, witness


def _bound(ps, s, pt, t, suite, spec):
    if spec.approach not in ("tbt", "sup") or spec.depth is None:
        return ZERO
    systems = []
    for _, o in suite.items():
        for p, x in ((ps, s), (pt, t)):
            system = build_interaction_system(p, o, x)
            systems.append((system.pts, system.root))
    if not systems:
        return ZERO
    return truncation_bound(systems, spec.depth, spec.lam)


def _meta(spec, suite, direction):
    return {"family": "testing", "approach": spec.approach, "scheduler": spec.scheduler,
            "lambda": str(spec.lam), "depth": spec.depth, "direction": direction,
            "omega": {k: str(suite.weight(k)) for k, _ in suite.items()}}


def directed_testing_distance(ps: Pts, s, pt: Pts, t, suite: TestSuite, spec: TestingMetricSpec):
    if spec.approach == "may":
        return _may_must(ps, s, pt, t, suite, ("sup",))
    if spec.approach == "must":
        return _may_must(ps, s, pt, t, suite, ("inf",))
    if spec.approach == "mm":
        return _may_must(ps, s, pt, t, suite, ("sup", "inf"))
    return _trace_family(ps, s, pt, t, suite, spec)


def testing_hemimetric(p: Pts, s, t, suite: TestSuite, spec: TestingMetricSpec,
                       p_t: Optional[Pts] = None) -> MetricResult:
    p_t = p if p_t is None else p_t
    if spec.direction == "symmetric":
        return testing_pseudometric(p, s, t, suite, spec, p_t)
    if spec.direction == "right":
        ps, a, pt, b = p_t, t, p, s
    else:
        ps, a, pt, b = p, s, p_t, t
    value, witness = directed_testing_distance(ps, a, pt, b, suite, spec)
    bound = _bound(p, s, p_t, t, suite, spec)
    return MetricResult(value, bound, True, None, witness, _meta(spec, suite, spec.direction))


def testing_pseudometric(p: Pts, s, t, suite: TestSuite, spec: TestingMetricSpec,
                         p_t: Optional[Pts] = None) -> MetricResult:
    p_t = p if p_t is None else p_t
    left = testing_hemimetric(p, s, t, suite, replace(spec, direction="left"), p_t)
    right = testing_hemimetric(p, s, t, suite, replace(spec, direction="right"), p_t)
    pick = left if left.value >= right.value else right
    witness = None
    if pick.witness is not None:
        witness = dict(pick.witness, direction=pick.meta["direction"])
    return replace(pick, witness=witness, meta=_meta(spec, suite, "symmetric"))
