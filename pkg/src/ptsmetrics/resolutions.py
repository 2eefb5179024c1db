"""Resolutions of nondeterminism and the probabilities they can achieve.

Deterministic resolutions live on the depth-bounded unfolding of a system:
every node either halts or picks one outgoing transition of its state.
A randomized resolution flips a coin at a node to pick among equally
labeled transitions; the coin outcome is remembered, so the scheduler can
continue differently after the same transition.  The consequence used
throughout is that, for a fixed first label, the randomized values form
the convex hull of the deterministic ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .intervals import AchievableSet
from .limits import CapExceeded, max_memo, max_resolutions
from .pts import Pts

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ResolutionNode:
    """One node of a deterministic resolution.

    ``choice`` is the index into ``pts.out(state)`` or ``None`` for halt.
    ``children`` pairs each support state's probability with its subtree.
    """

    state: object
    choice: Optional[int]
    label: Optional[str]
    children: tuple = ()

    def describe(self) -> str:
        if self.choice is None:
            return f"{self.state}:halt"
        inner = ", ".join(f"{p}*{c.describe()}" for p, c in self.children)
        return f"{self.state}:{self.label}#{self.choice}({inner})"


@dataclass(frozen=True)
class ResolutionTree:
    root: ResolutionNode
    depth: int


def count_det_resolutions(pts: Pts, root, depth: int, maximal: bool = False) -> int:
    """Number of choice functions on the depth-bounded unfolding."""
    memo = {}

    def count(state, d):
        if d == 0:
            return 1
        key = (state, d)
        if key not in memo:
            out = pts.out(state)
            total = 1 if (not out or not maximal) else 0
            for tr in out:
                prod = 1
                for child in tr.target.support:
                    prod *= count(child, d - 1)
                total += prod
            memo[key] = total
        return memo[key]

    return count(root, depth)


def enumerate_det_resolutions(pts: Pts, root, depth: int, maximal: bool = False,
                              cap: Optional[int] = None) -> Iterator[ResolutionTree]:
    """Yield every deterministic resolution of depth ``depth`` from ``root``.

    Order: halt first (where allowed), then transitions by index, with
    children varying lexicographically.  Raises :class:`CapExceeded` before
    yielding anything when the count exceeds ``cap``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    cap = max_resolutions() if cap is None else cap
    total = count_det_resolutions(pts, root, depth, maximal)
    if total > cap:
        raise CapExceeded("deterministic resolutions", total, cap)

    def nodes(state, d):
        if d == 0:
            yield ResolutionNode(state, None, None)
            return
        out = pts.out(state)
        if not out or not maximal:
            yield ResolutionNode(state, None, None)
        for idx, tr in enumerate(out):
            support = tr.target.items()
            subtrees = [list(nodes(child, d - 1)) for child, _ in support]
            for combo in itertools.product(*subtrees):
                children = tuple((p, sub) for (_, p), sub in zip(support, combo))
                yield ResolutionNode(state, idx, tr.label, children)

    for node in nodes(root, depth):
        yield ResolutionTree(node, depth)


def trace_distribution(tree: ResolutionTree, depth: Optional[int] = None,
                       success=None) -> dict:
    """Probability of each trace of length <= ``depth`` under ``tree``.

    Only traces with positive probability are listed, plus the empty trace.
    With ``success`` given, only computations ending in a success state
    are counted.
    """
    depth = tree.depth if depth is None else depth
    if depth > tree.depth:
        raise ValueError("depth exceeds the resolution's depth bound")
    values: dict = {}

    def walk(node, trace, mass):
        if success is None or node.state in success:
            values[trace] = values.get(trace, ZERO) + mass
        if len(trace) == depth or node.choice is None:
            return
        for p, child in node.children:
            walk(child, trace + (node.label,), mass * p)

    walk(tree.root, (), ONE)
    values.setdefault((), ZERO)
    return values


class Resolver:
    """Memoized per-(state, trace) computations on one system.

    ``success`` switches to success-filtered probabilities (testing); in that
    case resolutions are always maximal.
    """

    def __init__(self, pts: Pts, maximal: bool = False, success=None, memo_cap=None):
        self.pts = pts
        self.success = None if success is None else frozenset(success)
        self.maximal = True if success is not None else maximal
        self.memo_cap = max_memo() if memo_cap is None else memo_cap
        self._max = {}
        self._min = {}
        self._det = {}
        self._vectors = {}

    def _store(self, table, key, value):
        if len(table) >= self.memo_cap:
            raise CapExceeded("memo entries", len(table) + 1, self.memo_cap)
        table[key] = value
        return value

    def base(self, state) -> Fraction:
        if self.success is None:
            return ONE
        return ONE if state in self.success else ZERO

    def _can_dodge(self, state, label) -> bool:
        """True when some resolution of ``state`` gives a ``label``-trace mass 0 at once."""
        out = self.pts.out(state)
        if not out or not self.maximal:
            return True
        return any(tr.label != label for tr in out)

    def max_prob(self, state, trace) -> Fraction:
        trace = tuple(trace)
        if not trace:
            return self.base(state)
        key = (state, trace)
        if key in self._max:
            return self._max[key]
        best = ZERO
        for tr in self.pts.out(state):
            if tr.label == trace[0]:
                v = sum((p * self.max_prob(s, trace[1:]) for s, p in tr.target.items()), ZERO)
                if v > best:
                    best = v
        return self._store(self._max, key, best)

    def min_first(self, state, trace) -> Optional[Fraction]:
        """Least value over resolutions that start with a ``trace[0]`` transition."""
        best = None
        for tr in self.pts.out(state):
            if tr.label == trace[0]:
                v = sum((p * self.min_prob(s, trace[1:]) for s, p in tr.target.items()), ZERO)
                if best is None or v < best:
                    best = v
        return best

    def min_prob(self, state, trace) -> Fraction:
        trace = tuple(trace)
        if not trace:
            return self.base(state)
        key = (state, trace)
        if key in self._min:
            return self._min[key]
        if self._can_dodge(state, trace[0]):
            value = ZERO
        else:
            value = self.min_first(state, trace)
        return self._store(self._min, key, value)

    def det_set(self, state, trace) -> AchievableSet:
        trace = tuple(trace)
        if not trace:
            return AchievableSet.point(self.base(state))
        key = (state, trace)
        if key in self._det:
            return self._det[key]
        values = set()
        if self._can_dodge(state, trace[0]):
            values.add(ZERO)
        for tr in self.pts.out(state):
            if tr.label != trace[0]:
                continue
            sums = {ZERO}
            for s, p in tr.target.items():
                child = self.det_set(s, trace[1:]).point_values()
                sums = {acc + p * v for acc in sums for v in child}
                if len(sums) > self.memo_cap:
                    raise CapExceeded("achievable values", len(sums), self.memo_cap)
            values |= sums
        return self._store(self._det, key, AchievableSet.points(values))

    def rand_set(self, state, trace) -> AchievableSet:
        trace = tuple(trace)
        if not trace:
            return AchievableSet.point(self.base(state))
        if not self.maximal:
            # weight on halting scales any mixture down to 0
            return AchievableSet.interval(ZERO, self.max_prob(state, trace))
        parts = []
        if self._can_dodge(state, trace[0]):
            parts.append((ZERO, ZERO))
        lo = self.min_first(state, trace)
        if lo is not None:
            parts.append((lo, self.max_prob(state, trace)))
        return AchievableSet(parts)

    def achievable(self, state, trace, scheduler: str = "det") -> AchievableSet:
        if scheduler == "det":
            return self.det_set(state, trace)
        if scheduler == "rand":
            return self.rand_set(state, trace)
        raise ValueError(f"unknown scheduler class {scheduler!r}")

    def vectors(self, state, depth: int) -> dict:
        """Distinct trace-distribution vectors of deterministic resolutions.

        Returns ``{label: set of vectors}``, where the key is the label of
        the root transition and ``None`` holds the halting (all-zero) vector.
        A vector is a sorted tuple of ``(trace, probability)`` pairs over
        nonempty traces of length <= ``depth`` with positive probability.
        """
        key = (state, depth)
        if key in self._vectors:
            return self._vectors[key]
        groups: dict = {}
        out = self.pts.out(state)
        if depth == 0 or not out or not self.maximal:
            groups[None] = {()}
        if depth > 0:
            for tr in out:
                combos = [{}]
                for s, p in tr.target.items():
                    child = set().union(*self.vectors(s, depth - 1).values())
                    nxt = set()
                    for acc in combos:
                        for vec in child:
                            merged = dict(acc)
                            for trace, q in vec:
                                merged[trace] = merged.get(trace, ZERO) + p * q
                            nxt.add(tuple(sorted(merged.items())))
                    combos = [dict(c) for c in nxt]
                    if len(combos) > max_resolutions():
                        raise CapExceeded("trace-distribution vectors", len(combos),
                                          max_resolutions())
                label = tr.label
                bucket = groups.setdefault(label, set())
                for acc in combos:
                    vec = {(label,): ONE}
                    for trace, q in acc.items():
                        vec[(label,) + trace] = q
                    bucket.add(tuple(sorted(vec.items())))
        return self._store(self._vectors, key, groups)


def achievable_set(pts: Pts, root, trace, scheduler: str = "det", maximal: bool = False,
                   success=None) -> AchievableSet:
    """Values of Pr(C(z, trace)) (or its success-filtered form) over a resolution class."""
    return Resolver(pts, maximal=maximal, success=success).achievable(root, trace, scheduler)


def max_trace_prob(pts: Pts, root, trace) -> Fraction:
    """Largest probability any resolution gives to ``trace``."""
    return Resolver(pts).max_prob(root, trace)


def success_trace_max(system, config, trace) -> Fraction:
    """Largest probability of performing ``trace`` and ending in success."""
    from .pts import structure_info

    if not structure_info(system.pts, config).acyclic:
        raise ValueError("success_trace_max needs an acyclic interaction system")
    return Resolver(system.pts, maximal=True, success=system.success).max_prob(config, trace)


def realizable_traces(resolvers_and_roots, depth: int) -> list:
    """Nonempty traces of length <= depth with positive max probability somewhere.

    ``resolvers_and_roots`` is a list of ``(Resolver, state)`` pairs; the
    result is sorted by length, then lexicographically.
    """
    found = set()
    for resolver, root in resolvers_and_roots:
        pts = resolver.pts
        level = {(): {root}}
        for _ in range(depth):
            nxt_level: dict = {}
            for trace, states in level.items():
                for s in states:
                    for tr in pts.out(s):
                        nxt_level.setdefault(trace + (tr.label,), set()).update(tr.target.support)
            for trace in nxt_level:
                if resolver.max_prob(root, trace) > 0:
                    found.add(trace)
            level = nxt_level
    return sorted(found, key=lambda t: (len(t), t))
