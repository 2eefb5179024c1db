"""Randomized checks of the metric axioms, kernels, orderings and
compositionality, with greedy shrinking of counterexamples."""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Optional

from .generate import (GenParams, alphabet, escape_test, generate_random_pts,
                       generate_random_test, linear_test, restrict_to_trace)
from .limits import CapExceeded
from .modelfile import Model, emit_model, rename_states
from .pts import (Npt, Pts, ModelError, build_interaction_system, parallel_compose,
                  process_test_product, reachable_states, structure_info, validate_npt,
                  validate_pts)
from .quantifiers import testing_preorder, trace_preorder
from .relations import check_backward_compat
from .testing_metrics import TestingMetricSpec, TestSuite, testing_hemimetric
from .trace_metrics import TraceMetricSpec, trace_hemimetric

ZERO = Fraction(0)
ONE = Fraction(1)

TRACE_DISTANCES = tuple(f"tr-{a}-{x}" for a in ("dis", "tbt", "sup") for x in ("det", "rand"))
TESTING_DISTANCES = tuple(f"te-{a}-{x}" for a in ("may", "must", "mm", "tbt", "sup")
                          for x in ("det", "rand"))
DISTANCES = TRACE_DISTANCES + TESTING_DISTANCES


@dataclass
class Case:
    """One random input: a system with roots, a test suite, and optionally a
    second system (for compositionality checks)."""

    pts: Pts
    roots: tuple
    tests: tuple = ()
    other: Optional[Pts] = None
    other_roots: tuple = ()
    depth: int = 3

    def suite(self) -> TestSuite:
        return TestSuite(list(self.tests))

    def systems(self):
        yield self.pts, self.roots
        if self.other is not None:
            yield self.other, self.other_roots


def measure(name, p, x, y, case: Case, suite=None, direction="left", p_t=None) -> Fraction:
    family, approach, sched = name.split("-")
    if family == "tr":
        spec = TraceMetricSpec(approach, sched, ONE, case.depth, direction)
        return trace_hemimetric(p, x, y, spec, p_t).value
    spec = TestingMetricSpec(approach, sched, ONE, None, direction)
    return testing_hemimetric(p, x, y, suite if suite is not None else case.suite(),
                              spec, p_t).value


# --- property bodies -----------------------------------------------------------
# Each returns None on success or a message describing the violation.

def axioms(name):
    def check(case: Case):
        p, roots = case.pts, case.roots
        h = {(a, b): measure(name, p, a, b, case) for a, b in product(roots, repeat=2)}
        for (a, b), v in h.items():
            if not 0 <= v <= 1:
                return f"h({a},{b}) = {v} outside [0,1]"
        for a in roots:
            if h[a, a] != 0:
                return f"h({a},{a}) = {h[a, a]}"
        for a, b, c in permutations(roots, 3):
            if h[a, c] > h[a, b] + h[b, c]:
                return f"triangle: h({a},{c}) = {h[a, c]} > {h[a, b]} + {h[b, c]}"
        for a, b in permutations(roots, 2):
            m = measure(name, p, a, b, case, direction="symmetric")
            if m != max(h[a, b], h[b, a]):
                return f"m({a},{b}) = {m} is not the larger hemimetric direction"
            if m != measure(name, p, b, a, case, direction="symmetric"):
                return f"m({a},{b}) differs from m({b},{a})"
        return None
    return check


def kernel(name):
    family, approach, sched = name.split("-")

    def check(case: Case):
        p = case.pts
        for a, b in permutations(case.roots[:2], 2):
            zero = measure(name, p, a, b, case) == 0
            if family == "tr":
                rel = trace_preorder(approach, sched, p, a, p, b, case.depth)
            else:
                rel = testing_preorder(approach, sched, p, a, p, b, case.suite())
            if zero != rel:
                return f"h({a},{b}) == 0 is {zero} but the preorder check says {rel}"
        return None
    return check


def ordered(small, large, small_suite=None, large_suite=None, slack=ZERO):
    """small(s,t) <= large(s,t) in both directions."""
    def check(case: Case):
        p = case.pts
        for a, b in permutations(case.roots[:2], 2):
            lo = measure(small, p, a, b, case, small_suite(case) if small_suite else None)
            hi = measure(large, p, a, b, case, large_suite(case) if large_suite else None)
            if lo > hi + slack:
                return f"{small}({a},{b}) = {lo} > {large}({a},{b}) = {hi}"
        return None
    return check


def equal(*names):
    def check(case: Case):
        p = case.pts
        for a, b in permutations(case.roots[:2], 2):
            vals = [measure(n, p, a, b, case) for n in names]
            if len(set(vals)) > 1:
                listing = ", ".join(f"{n}={v}" for n, v in zip(names, vals))
                return f"at ({a},{b}): {listing}"
        return None
    return check


def flipped(small, large):
    """Deliberately wrong claim (large < small) used to test the harness itself."""
    def check(case: Case):
        p = case.pts
        a, b = case.roots[:2]
        lo, hi = measure(small, p, a, b, case), measure(large, p, a, b, case)
        if not hi < lo:
            return f"{large}({a},{b}) = {hi} is not below {small}({a},{b}) = {lo}"
        return None
    return check


def _traces_upto(actions, depth):
    for n in range(1, depth + 1):
        yield from product(actions, repeat=n)


def restriction_closed(case: Case) -> TestSuite:
    tests = list(case.tests)
    for o in case.tests:
        depth = int(structure_info(o.base, o.init).depth)
        for trace in _traces_upto(o.base.actions, depth):
            r = restrict_to_trace(o, trace, name=f"{o.name}|{''.join(trace)}")
            if r.base.transitions:
                tests.append(r)
    return TestSuite(tests)


def escape_closed(case: Case) -> TestSuite:
    acts = case.pts.actions
    return TestSuite(list(case.tests) + [escape_test(t, acts) for t in _traces_upto(acts, case.depth)])


def linear_closed(case: Case) -> TestSuite:
    acts = case.pts.actions
    return TestSuite(list(case.tests) + [linear_test(t, acts) for t in _traces_upto(acts, case.depth)])


def trace_closed(case: Case) -> TestSuite:
    acts = case.pts.actions
    extra = []
    for t in _traces_upto(acts, case.depth):
        extra += [linear_test(t, acts), escape_test(t, acts)]
    return TestSuite(list(case.tests) + extra)


def _derived_suite(p, xs, tests, tag):
    out = []
    for x in xs:
        for o in tests:
            out.append(process_test_product(p, x, o, name=f"{tag}{x}|{o.name}"))
    return TestSuite(out)


def nonexpansive(name, strict):
    family = name.split("-")[0]

    def check(case: Case):
        A, (s1, t1) = case.pts, case.roots[:2]
        B, (s2, t2) = case.other, case.other_roots[:2]
        comp = parallel_compose(A, B, roots=[(s1, s2), (t1, t2)])
        for direction in ("left", "symmetric"):
            if family == "tr":
                d = measure(name, comp, (s1, s2), (t1, t2), case, direction=direction)
                d1 = measure(name, A, s1, t1, case, direction=direction)
                d2 = measure(name, B, s2, t2, case, direction=direction)
            else:
                d = measure(name, comp, (s1, s2), (t1, t2), case, case.suite(), direction)
                d1 = measure(name, A, s1, t1, case,
                             _derived_suite(B, (s2, t2), case.tests, "B"), direction)
                d2 = measure(name, B, s2, t2, case,
                             _derived_suite(A, (s1, t1), case.tests, "A"), direction)
            bound = d1 + d2 - d1 * d2 if strict else d1 + d2
            if d > bound:
                return (f"{direction}: d(composed) = {d} > {bound} "
                        f"(components {d1}, {d2})")
        return None
    return check


def compat(kind):
    def check(case: Case):
        a, b = case.roots[:2]
        report = check_backward_compat(case.pts, a, b, case.depth)
        if not report.agree:
            return (f"classical={report.classical}, sup-det={report.sup_det}, "
                    f"sup-rand={report.sup_rand}")
        return None
    return check


# --- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class Property:
    name: str
    group: str
    check: Callable
    params: GenParams = GenParams()
    n_tests: int = 0
    quadruple: bool = False
    depth: Optional[int] = 3  # None: the depth of the generated system
    expect_failure: bool = False


SMALL = GenParams(max_states=5, max_transitions=2, max_support=2, max_denominator=4,
                  alphabet_size=2, n_roots=3, min_transitions=1)
PAIR = replace(SMALL, n_roots=2)
EQUALITY = GenParams(max_states=6, max_transitions=2, max_support=2, max_denominator=4,
                 alphabet_size=2, n_roots=2, min_transitions=1)
QUAD = GenParams(max_states=3, max_transitions=2, max_support=2, max_denominator=3,
                 alphabet_size=2, n_roots=2, min_transitions=1)


def _registry():
    props = []
    for d in DISTANCES:
        testing = d.startswith("te")
        props.append(Property(f"axioms:{d}", "axioms", axioms(d),
                              replace(SMALL, max_states=4) if testing else SMALL,
                              n_tests=2 if testing else 0))
        props.append(Property(f"kernel:{d}", "kernel", kernel(d),
                              replace(PAIR, max_states=4) if testing else PAIR,
                              n_tests=2 if testing else 0, depth=None))
    props += [
        Property("equality:sup-det=sup-rand=tbt-rand", "equality",
                 equal("tr-sup-det", "tr-sup-rand", "tr-tbt-rand"), EQUALITY),
        Property("spectrum:tr-tbt<=tr-dis:det", "spectrum", ordered("tr-tbt-det", "tr-dis-det"), PAIR),
        Property("spectrum:tr-tbt<=tr-dis:rand", "spectrum", ordered("tr-tbt-rand", "tr-dis-rand"), PAIR),
        Property("spectrum:tr-dis:rand<=det", "spectrum", ordered("tr-dis-rand", "tr-dis-det"), PAIR),
        Property("spectrum:tr-tbt:rand<=det", "spectrum", ordered("tr-tbt-rand", "tr-tbt-det"), PAIR),
        Property("spectrum:te-may<=te-mm", "spectrum", ordered("te-may-det", "te-mm-det"), PAIR, 2),
        Property("spectrum:te-must<=te-mm", "spectrum", ordered("te-must-det", "te-mm-det"), PAIR, 2),
        Property("spectrum:te-sup<=te-may", "spectrum",
                 ordered("te-sup-det", "te-may-det", large_suite=restriction_closed), PAIR, 2),
        Property("spectrum:te-sup<=te-tbt:det", "spectrum", ordered("te-sup-det", "te-tbt-det"), PAIR, 2),
        Property("spectrum:te-sup<=te-tbt:rand", "spectrum", ordered("te-sup-rand", "te-tbt-rand"), PAIR, 2),
        Property("spectrum:te:det=rand", "spectrum",
                 lambda c: next((m for m in (equal(f"te-{a}-det", f"te-{a}-rand")(c)
                                             for a in ("may", "must", "mm", "sup")) if m), None),
                 PAIR, 2),
        Property("spectrum:te-tbt:rand<=det", "spectrum", ordered("te-tbt-rand", "te-tbt-det"),
                 replace(PAIR, alphabet_size=3), 2),
        Property("spectrum:tr-dis-rand<=te-may", "spectrum",
                 ordered("tr-dis-rand", "te-may-det", large_suite=trace_closed), PAIR, 1),
        Property("spectrum:tr-tbt<=te-tbt:det", "spectrum",
                 ordered("tr-tbt-det", "te-tbt-det", large_suite=escape_closed), PAIR, 1),
        Property("spectrum:tr-tbt<=te-tbt:rand", "spectrum",
                 ordered("tr-tbt-rand", "te-tbt-rand", large_suite=escape_closed), PAIR, 1),
        Property("spectrum:tr-sup<=te-sup", "spectrum",
                 ordered("tr-sup-det", "te-sup-det", large_suite=linear_closed), PAIR, 1),
    ]
    for d, strict in [("tr-tbt-det", True), ("tr-tbt-rand", True), ("tr-sup-det", True),
                      ("tr-sup-rand", True), ("te-may-det", False), ("te-must-det", False),
                      ("te-mm-det", False), ("te-tbt-det", True), ("te-tbt-rand", True),
                      ("te-sup-det", True), ("te-sup-rand", True)]:
        testing = d.startswith("te")
        props.append(Property(f"nonexp:{d}", "nonexp", nonexpansive(d, strict), QUAD,
                              n_tests=1 if testing else 0, quadruple=True))
    for kind in ("fully-nondeterministic", "fully-probabilistic"):
        props.append(Property(f"compat:{kind}", "compat", compat(kind),
                              replace(PAIR, kind=kind, max_transitions=3 if kind != "fully-probabilistic" else 1,
                                      alphabet_size=2)))
    props.append(Property("selftest:flipped-tbt<=dis", "selftest",
                          flipped("tr-tbt-det", "tr-dis-det"), PAIR, expect_failure=True))
    return {p.name: p for p in props}


PROPERTIES = _registry()


def select(selector: str) -> list:
    """Properties matching ``all``, a group name, an exact name or a name prefix."""
    if selector == "all":
        return [p for p in PROPERTIES.values() if p.group != "selftest"]
    if selector in PROPERTIES:
        return [PROPERTIES[selector]]
    hits = [p for p in PROPERTIES.values() if p.group == selector or p.name.startswith(selector)]
    if not hits:
        raise KeyError(f"no property matches {selector!r}")
    return hits


# --- running and shrinking -----------------------------------------------------

def make_case(prop: Property, seed: int, params: Optional[GenParams] = None) -> Case:
    params = (params or prop.params).with_seed(seed)
    inst = generate_random_pts(params, "P")
    rng = random.Random(seed * 7919 + 17)
    acts = inst.pts.actions
    tests = tuple(generate_random_test(rng, acts, max_states=3, name=f"o{i}")
                  for i in range(prop.n_tests))
    other, other_roots = None, ()
    if prop.quadruple:
        second = generate_random_pts(params.with_seed(seed + 10**9), "Q")
        other, other_roots = second.pts, second.roots
    depth = prop.depth
    if depth is None:
        depth = max(1, int(max(structure_info(inst.pts, r).depth for r in inst.roots)))
    return Case(inst.pts, inst.roots, tests, other, other_roots, depth)


def run_check(prop: Property, case: Case) -> Optional[str]:
    return prop.check(case)


def _prune(p: Pts, roots) -> Optional[Pts]:
    keep = set()
    for r in roots:
        keep.update(reachable_states(p, r))
    states = [s for s in p.states if s in keep]
    trans = [(tr.source, tr.label, tr.target.items()) for tr in p.transitions if tr.source in keep]
    try:
        return validate_pts(p.name, states, p.actions, roots[0], trans)
    except ModelError:
        return None


def _variants(p: Pts, roots):
    """Smaller systems: one transition dropped, or one distribution simplified."""
    trans = list(p.transitions)
    for i in range(len(trans)):
        rest = trans[:i] + trans[i + 1:]
        yield [(t.source, t.label, t.target.items()) for t in rest]
    for i, tr in enumerate(trans):
        if len(tr.target) > 1:
            first = tr.target.support[0]
            dirac = [(first, ONE)]
            uniform = [(s, Fraction(1, len(tr.target))) for s in tr.target.support]
            for dist in (dirac, uniform):
                if dist == list(tr.target.items()):
                    continue
                new = [(t.source, t.label, t.target.items()) for t in trans]
                new[i] = (tr.source, tr.label, dist)
                yield new


def shrink(prop: Property, case: Case, budget: int = 200) -> Case:
    """Greedily simplify ``case`` while the property keeps failing."""
    def fails(c):
        try:
            return run_check(prop, c) is not None
        except (CapExceeded, ModelError, ValueError):
            return False

    improved = True
    while improved and budget > 0:
        improved = False
        for attr, roots_attr in (("pts", "roots"), ("other", "other_roots")):
            p = getattr(case, attr)
            if p is None:
                continue
            roots = getattr(case, roots_attr)
            for raw in _variants(p, roots):
                budget -= 1
                if budget <= 0:
                    break
                try:
                    cand = validate_pts(p.name, p.states, p.actions, p.init, raw)
                except ModelError:
                    continue
                cand = _prune(cand, roots)
                if cand is None:
                    continue
                trial = replace(case, **{attr: cand})
                if fails(trial):
                    case, improved = trial, True
                    break
            if improved:
                break
        if not improved and len(case.tests) > 1:
            for i in range(len(case.tests)):
                trial = replace(case, tests=case.tests[:i] + case.tests[i + 1:])
                budget -= 1
                if fails(trial):
                    case, improved = trial, True
                    break
    return case


def case_to_text(case: Case) -> str:
    model = Model()
    header = [f"# roots: {' '.join(map(str, case.roots))}; depth {case.depth}"]
    model.systems[case.pts.name] = rename_states(case.pts)
    if case.other is not None:
        header.append(f"# second system roots: {' '.join(map(str, case.other_roots))}")
        model.systems[case.other.name] = rename_states(case.other)
    for o in case.tests:
        base = rename_states(o.base)
        model.systems[o.name] = validate_npt(base, str(o.success))
    return "\n".join(header) + "\n" + emit_model(model)


@dataclass
class PropertyReport:
    name: str
    trials: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    expect_failure: bool = False
    counterexamples: list = field(default_factory=list)  # (seed, message, model text)

    @property
    def ok(self) -> bool:
        return (self.failed > 0) if self.expect_failure else (self.failed == 0)


def run_property(prop: Property, trials: int, seed: int = 0, params: Optional[GenParams] = None,
                 shrink_failures: bool = True, max_counterexamples: int = 3,
                 stop_after: Optional[int] = None) -> PropertyReport:
    report = PropertyReport(prop.name, expect_failure=prop.expect_failure)
    attempt = 0
    while report.passed + report.failed < trials and attempt < trials * 3:
        case_seed = seed * 1_000_003 + attempt
        attempt += 1
        try:
            case = make_case(prop, case_seed, params)
            message = run_check(prop, case)
        except CapExceeded:
            report.skipped += 1
            continue
        report.trials += 1
        if message is None:
            report.passed += 1
            continue
        report.failed += 1
        if len(report.counterexamples) < max_counterexamples:
            if shrink_failures:
                case = shrink(prop, case)
                message = run_check(prop, case) or message
            report.counterexamples.append((case_seed, message, case_to_text(case)))
        if stop_after is not None and report.failed >= stop_after:
            break
    return report


def run_property_suite(selector: str, trials: int, seed: int = 0,
                       params: Optional[GenParams] = None, **kwargs) -> list:
    return [run_property(p, trials, seed, params, **kwargs) for p in select(selector)]


def run_fixed(prop: Property, case: Case) -> Optional[str]:
    """Run one property on a hand-built case (used for known witnesses)."""
    return run_check(prop, case)
