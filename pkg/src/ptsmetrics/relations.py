"""Preorders and equivalences as zero distances, robustness verdicts and
compatibility with the classical trace equivalences."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .pts import Pts, classify
from .testing_metrics import TestingMetricSpec, TestSuite, testing_hemimetric
from .trace_metrics import MetricResult, TraceMetricSpec, trace_hemimetric

ZERO = Fraction(0)

TRACE_FAMILIES = {"tr-dis": "dis", "tr-tbt": "tbt", "tr-sup": "sup"}
TESTING_FAMILIES = {"te-may": "may", "te-must": "must", "te-mm": "mm",
                    "te-tbt": "tbt", "te-sup": "sup"}
FAMILIES = tuple(TRACE_FAMILIES) + tuple(TESTING_FAMILIES)


@dataclass(frozen=True)
class MetricSelector:
    """Which distance to compute: family, scheduler class and parameters."""

    family: str
    scheduler: str = "det"
    lam: Fraction = Fraction(1)
    depth: Optional[int] = None
    suite: Optional[TestSuite] = None
    grid: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.family in TESTING_FAMILIES and self.suite is None:
            raise ValueError("testing relations need a test suite")
        if self.family in TRACE_FAMILIES and self.depth is None:
            raise ValueError("trace relations need a depth")

    def measure(self, p: Pts, s, t, direction="left", p_t=None) -> MetricResult:
        if self.family in TRACE_FAMILIES:
            spec = TraceMetricSpec(TRACE_FAMILIES[self.family], self.scheduler, self.lam,
                                   self.depth, direction, self.grid)
            return trace_hemimetric(p, s, t, spec, p_t)
        spec = TestingMetricSpec(TESTING_FAMILIES[self.family], self.scheduler, self.lam,
                                 self.depth, direction)
        return testing_hemimetric(p, s, t, self.suite, spec, p_t)


@dataclass(frozen=True)
class RelationQuery:
    """``kind`` is ``"preorder"`` (s below t) or ``"equivalence"``."""

    kind: str
    selector: MetricSelector

    def __post_init__(self):
        if self.kind not in ("preorder", "equivalence"):
            raise ValueError("kind must be preorder or equivalence")


@dataclass(frozen=True)
class RelationOutcome:
    holds: bool
    measured: MetricResult

    @property
    def witness(self):
        return None if self.holds else self.measured.witness

    def __bool__(self):
        return self.holds


def check_relation(p: Pts, s, t, query: RelationQuery, p_t=None) -> RelationOutcome:
    """Whether s and t are related, read off as a zero distance.

    For cyclic systems with lambda = 1 this is relatedness up to the depth.
    """
    direction = "left" if query.kind == "preorder" else "symmetric"
    result = query.selector.measure(p, s, t, direction, p_t)
    return RelationOutcome(result.value == 0, result)


HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"


@dataclass(frozen=True)
class RobustnessVerdict:
    status: str
    measured: MetricResult
    epsilon: Fraction
    view: str

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def verdict_for(measured: MetricResult, epsilon) -> str:
    epsilon = Fraction(epsilon)
    if not measured.exact:
        return INCONCLUSIVE
    if measured.value > epsilon:
        return FAILS
    bound = measured.truncation_bound
    if bound is not None and measured.value + bound <= epsilon:
        return HOLDS
    return INCONCLUSIVE


def check_robustness(spec_pts: Pts, spec_root, impl_pts: Pts, impl_root, epsilon,
                     selector: MetricSelector, view: str = "lower") -> RobustnessVerdict:
    """Is the implementation within ``epsilon`` of the specification?

    The ``lower`` view measures h(spec, impl), the ``upper`` view h(impl, spec).
    Values whose truncation bound straddles epsilon give an inconclusive verdict.
    """
    if view == "lower":
        measured = selector.measure(spec_pts, spec_root, impl_root, "left", impl_pts)
    elif view == "upper":
        measured = selector.measure(impl_pts, impl_root, spec_root, "left", spec_pts)
    else:
        raise ValueError("view must be lower or upper")
    return RobustnessVerdict(verdict_for(measured, epsilon), measured, Fraction(epsilon), view)


# --- classical trace equivalences -------------------------------------------

def trace_set(p: Pts, root, depth: int) -> frozenset:
    """Traces of length <= depth that some path from ``root`` performs."""
    found = {()}
    level = {(): {root}}
    for _ in range(depth):
        nxt: dict = {}
        for trace, states in level.items():
            for s in states:
                for tr in p.out(s):
                    nxt.setdefault(trace + (tr.label,), set()).update(tr.target.support)
        found.update(nxt)
        level = nxt
    return frozenset(found)


def trace_probabilities(p: Pts, root, depth: int) -> dict:
    """Trace probabilities of a fully probabilistic system, by forward propagation."""
    probs = {(): Fraction(1)}
    level = {(): {root: Fraction(1)}}
    for _ in range(depth):
        nxt: dict = {}
        for trace, mass in level.items():
            for s, m in mass.items():
                out = p.out(s)
                if len(out) > 1:
                    raise ValueError("system is not fully probabilistic")
                for tr in out:
                    bucket = nxt.setdefault(trace + (tr.label,), {})
                    for x, q in tr.target.items():
                        bucket[x] = bucket.get(x, ZERO) + m * q
        for trace, mass in nxt.items():
            probs[trace] = sum(mass.values(), ZERO)
        level = nxt
    return probs


@dataclass(frozen=True)
class CompatReport:
    kind: str
    classical: bool
    sup_det: bool
    sup_rand: bool

    @property
    def agree(self) -> bool:
        return self.classical == self.sup_det == self.sup_rand


def check_backward_compat(p: Pts, s, t, depth: int, p_t: Optional[Pts] = None) -> CompatReport:
    """Compare the supremal trace equivalence with the classical one.

    Fully nondeterministic systems are compared by trace sets, fully
    probabilistic ones by trace probabilities, both up to ``depth``.
    """
    p_t = p if p_t is None else p_t
    flags = [classify(p), classify(p_t)]
    if all(f.fully_nondeterministic for f in flags):
        kind = "fully-nondeterministic"
        classical = trace_set(p, s, depth) == trace_set(p_t, t, depth)
    elif all(f.fully_probabilistic for f in flags):
        kind = "fully-probabilistic"
        ps, pt = trace_probabilities(p, s, depth), trace_probabilities(p_t, t, depth)
        keys = set(ps) | set(pt)
        classical = all(ps.get(k, ZERO) == pt.get(k, ZERO) for k in keys)
    else:
        raise ValueError("backward compatibility needs a fully nondeterministic "
                         "or fully probabilistic system")
    verdicts = []
    for sched in ("det", "rand"):
        q = RelationQuery("equivalence", MetricSelector("tr-sup", sched, depth=depth))
        verdicts.append(check_relation(p, s, t, q, p_t).holds)
    return CompatReport(kind, classical, *verdicts)
