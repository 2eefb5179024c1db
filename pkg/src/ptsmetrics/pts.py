"""Probabilistic transition systems, tests and their synchronous products.

All probabilities are :class:`fractions.Fraction`; nothing in this module
touches floating point.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

StateId = Hashable
Action = str
Trace = tuple  # tuple of Action; () is the empty trace


class ModelError(ValueError):
    """Raised when a candidate system violates a model invariant.

    ``problems`` lists every violation found, as ``(message, transition_index)``
    pairs; the index is ``None`` for problems not tied to one transition.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(msg for msg, _ in self.problems))


def _sort_key(state):
    return (0, state) if isinstance(state, str) else (1, repr(state))


def as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction, int or a decimal string")
    return Fraction(value)


class Distribution(Mapping):
    """Finitely supported distribution over states, stored canonically."""

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, entries):
        items = entries.items() if isinstance(entries, Mapping) else entries
        merged: dict = {}
        for state, p in items:
            merged[state] = merged.get(state, Fraction(0)) + as_fraction(p)
        self._items = tuple(sorted(merged.items(), key=lambda kv: _sort_key(kv[0])))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    @classmethod
    def dirac(cls, state) -> "Distribution":
        return cls({state: Fraction(1)})

    def __getitem__(self, state):
        return self._map[state]

    def __iter__(self):
        return (s for s, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Distribution):
            return self._items == other._items
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{s!r}: {p}" for s, p in self._items)
        return f"Distribution({{{body}}})"

    @property
    def support(self) -> tuple:
        return tuple(s for s, _ in self._items)

    def items(self):
        return self._items

    def total(self) -> Fraction:
        return sum((p for _, p in self._items), Fraction(0))

    def is_dirac(self) -> bool:
        return len(self._items) == 1 and self._items[0][1] == 1

    def product(self, other: "Distribution", pair=tuple) -> "Distribution":
        return Distribution(
            (pair((s1, s2)), p1 * p2) for s1, p1 in self._items for s2, p2 in other._items
        )


class Transition(NamedTuple):
    source: StateId
    label: Action
    target: Distribution


@dataclass(frozen=True)
class Pts:
    """A finite probabilistic transition system with a designated root.

    Build instances through :func:`validate_pts`; the constructor trusts
    its arguments.
    """

    name: str
    states: tuple
    actions: tuple
    transitions: tuple
    init: StateId
    _out: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        out = {s: [] for s in self.states}
        for tr in self.transitions:
            out[tr.source].append(tr)
        object.__setattr__(self, "_out", {s: tuple(v) for s, v in out.items()})

    def __hash__(self):
        return hash((self.name, self.states, self.transitions, self.init))

    def out(self, state) -> tuple:
        """Outgoing transitions of ``state`` in declaration order."""
        return self._out[state]

    def is_deadlock(self, state) -> bool:
        return not self._out[state]

    def enabled_labels(self, state) -> tuple:
        seen = []
        for tr in self._out[state]:
            if tr.label not in seen:
                seen.append(tr.label)
        return tuple(seen)

    def successors(self, state) -> Iterator:
        for tr in self._out[state]:
            yield from tr.target.support

    def has_state(self, state) -> bool:
        return state in self._out

    def with_init(self, state) -> "Pts":
        if state not in self._out:
            raise KeyError(state)
        return Pts(self.name, self.states, self.actions, self.transitions, state)


@dataclass(frozen=True)
class Npt:
    """A test: a finite PTS with a terminal success state."""

    base: Pts
    success: StateId

    @property
    def name(self) -> str:
        return self.base.name

    @property
    def init(self):
        return self.base.init


class Configuration(NamedTuple):
    process: StateId
    test: StateId


@dataclass(frozen=True)
class InteractionSystem:
    pts: Pts
    root: Configuration
    success: frozenset

    def is_successful(self, config) -> bool:
        return config in self.success


def validate_pts(name, states, actions, init, transitions) -> Pts:
    """Check a raw system description and return a canonical :class:`Pts`.

    ``transitions`` is an iterable of ``(source, label, entries)`` where
    ``entries`` is a mapping or an iterable of ``(state, probability)``.
    Raises :class:`ModelError` listing every violation.
    """
    problems = []
    states = tuple(states)
    actions = tuple(actions)
    state_set = set()
    for s in states:
        if s in state_set:
            problems.append((f"state {s!r} declared twice", None))
        state_set.add(s)
    action_set = set(actions)
    if len(action_set) != len(actions):
        problems.append(("duplicate action in alphabet", None))
    if init not in state_set:
        problems.append((f"init state {init!r} is not declared", None))

    built = []
    seen = set()
    for idx, (source, label, entries) in enumerate(transitions):
        if source not in state_set:
            problems.append((f"unknown source state {source!r}", idx))
        if label not in action_set:
            problems.append((f"undeclared action {label!r}", idx))
        pairs = list(entries.items() if isinstance(entries, Mapping) else entries)
        if not pairs:
            problems.append(("empty distribution", idx))
            continue
        targets = [s for s, _ in pairs]
        if len(set(targets)) != len(targets):
            problems.append(("state listed twice in one distribution", idx))
        ok = True
        for s, p in pairs:
            try:
                p = as_fraction(p)
            except (TypeError, ValueError):
                problems.append((f"probability {p!r} is not a rational", idx))
                ok = False
                continue
            if s not in state_set:
                problems.append((f"unknown target state {s!r}", idx))
            if not 0 < p <= 1:
                problems.append((f"probability {p} of {s!r} not in (0,1]", idx))
                ok = False
        if not ok:
            continue
        dist = Distribution(pairs)
        if dist.total() != 1:
            problems.append((f"distribution sums to {dist.total()}", idx))
            continue
        tr = Transition(source, label, dist)
        if tr in seen:
            problems.append((f"duplicate transition {source!r} --{label}-->", idx))
            continue
        seen.add(tr)
        built.append(tr)
    if problems:
        raise ModelError(problems)
    return Pts(str(name), states, actions, tuple(built), init)


def validate_npt(base: Pts, success) -> Npt:
    problems = []
    if not base.has_state(success):
        problems.append((f"success state {success!r} is not declared", None))
    elif base.out(success):
        problems.append((f"success state {success!r} has outgoing transitions", None))
    if problems:
        raise ModelError(problems)
    return Npt(base, success)


def _merge_actions(a1: Sequence, a2: Sequence) -> tuple:
    merged = list(a1)
    merged += [a for a in a2 if a not in merged]
    return tuple(merged)


def _product(p1: Pts, p2: Pts, roots, restrict: bool, pair, name: str) -> Pts:
    def moves(s1, s2):
        for tr1 in p1.out(s1):
            for tr2 in p2.out(s2):
                if tr1.label == tr2.label:
                    yield tr1.label, tr1.target.product(tr2.target, pair)

    if restrict:
        seen = set()
        queue = deque()
        for r in roots:
            r = pair(r)
            if r not in seen:
                seen.add(r)
                queue.append(r)
        while queue:
            s1, s2 = queue.popleft()
            for _, dist in moves(s1, s2):
                for nxt in dist.support:
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        rank1 = {s: i for i, s in enumerate(p1.states)}
        rank2 = {s: i for i, s in enumerate(p2.states)}
        states = tuple(sorted(seen, key=lambda st: (rank1[st[0]], rank2[st[1]])))
    else:
        states = tuple(pair((s1, s2)) for s1 in p1.states for s2 in p2.states)

    transitions = tuple(
        Transition(st, label, dist) for st in states for label, dist in moves(*st)
    )
    return Pts(name, states, _merge_actions(p1.actions, p2.actions), transitions, pair(roots[0]))


def parallel_compose(p1: Pts, p2: Pts, roots=None, restrict: bool = True) -> Pts:
    """Synchronous (CSP-style) parallel composition over shared labels.

    ``roots`` is a list of state pairs from which reachability is taken;
    it defaults to the pair of designated roots.  The first pair becomes
    the root of the product.  With ``restrict=False`` the full product is
    returned.
    """
    if roots is None:
        roots = [(p1.init, p2.init)]
    roots = [tuple(r) for r in roots]
    for s1, s2 in roots:
        if not p1.has_state(s1) or not p2.has_state(s2):
            raise KeyError((s1, s2))
    return _product(p1, p2, roots, restrict, tuple, f"{p1.name}||{p2.name}")


def build_interaction_system(p: Pts, o: Npt, root=None) -> InteractionSystem:
    """Product of process ``p`` (from ``root``) with test ``o``."""
    root = p.init if root is None else root
    if not p.has_state(root):
        raise KeyError(root)
    pts = _product(p, o.base, [(root, o.init)], True, Configuration._make, f"{p.name}|{o.name}")
    success = frozenset(c for c in pts.states if c.test == o.success)
    return InteractionSystem(pts, Configuration(root, o.init), success)


def process_test_product(p: Pts, state, o: Npt, name: Optional[str] = None) -> Npt:
    """The test ``state || o``: a process running alongside a test, seen as a test.

    Every configuration whose test part is the success state is merged into
    one success state, so the result is again a valid test.
    """
    system = build_interaction_system(p, o, state)
    top = ("", o.success)
    rename = {c: (top if c in system.success else tuple(c)) for c in system.pts.states}
    states = []
    for c in system.pts.states:
        if rename[c] not in states:
            states.append(rename[c])
    transitions, seen = [], set()
    for tr in system.pts.transitions:
        merged: dict = {}
        for s, q in tr.target.items():
            merged[rename[s]] = merged.get(rename[s], Fraction(0)) + q
        key = (rename[tr.source], tr.label, Distribution(merged))
        # merging success states can make two transitions identical
        if key not in seen:
            seen.add(key)
            transitions.append((key[0], key[1], merged))
    base = validate_pts(name or f"{state}|{o.name}", states, system.pts.actions,
                        rename[system.root], transitions)
    if top not in states:
        states.append(top)
        base = Pts(base.name, tuple(states), base.actions, base.transitions, base.init)
    return validate_npt(base, top)


def disjoint_union(p1: Pts, p2: Pts, tags=("L", "R"), name=None) -> Pts:
    """Side-by-side copy of two systems with states tagged ``(tag, state)``."""
    def tag(t, s):
        return (t, s)

    states = tuple(tag(tags[0], s) for s in p1.states) + tuple(tag(tags[1], s) for s in p2.states)
    transitions = tuple(
        Transition(tag(t, tr.source), tr.label,
                   Distribution((tag(t, s), q) for s, q in tr.target.items()))
        for t, p in zip(tags, (p1, p2)) for tr in p.transitions
    )
    return Pts(name or f"{p1.name}+{p2.name}", states, _merge_actions(p1.actions, p2.actions),
               transitions, tag(tags[0], p1.init))


@dataclass(frozen=True)
class Classification:
    fully_nondeterministic: bool
    fully_probabilistic: bool

    @property
    def kind(self) -> str:
        if self.fully_nondeterministic and self.fully_probabilistic:
            return "fully-nondeterministic+fully-probabilistic"
        if self.fully_nondeterministic:
            return "fully-nondeterministic"
        if self.fully_probabilistic:
            return "fully-probabilistic"
        return "general"


def classify(p: Pts) -> Classification:
    fn = all(tr.target.is_dirac() for tr in p.transitions)
    fp = all(len(p.out(s)) <= 1 for s in p.states)
    return Classification(fn, fp)


@dataclass(frozen=True)
class StructureInfo:
    acyclic: bool
    depth: float  # longest path from the root; math.inf when a cycle is reachable
    reachable: tuple
    cyclic_states: frozenset


def reachable_states(p: Pts, root) -> tuple:
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for nxt in p.successors(s):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return tuple(order)


def _strongly_connected(p: Pts, nodes) -> list:
    # iterative Tarjan
    index, low, on_stack = {}, {}, set()
    stack, comps, counter = [], [], [0]
    node_set = set(nodes)
    for start in nodes:
        if start in index:
            continue
        work = [(start, iter(list(p.successors(start))))]
        index[start] = low[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in node_set:
                    continue
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(list(p.successors(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def structure_info(p: Pts, root) -> StructureInfo:
    if not p.has_state(root):
        raise KeyError(root)
    reach = reachable_states(p, root)
    cyclic = set()
    for comp in _strongly_connected(p, reach):
        if len(comp) > 1 or comp[0] in set(p.successors(comp[0])):
            cyclic.update(comp)
    if cyclic:
        return StructureInfo(False, math.inf, reach, frozenset(cyclic))
    depth = {}
    for s in reversed(_topological(p, reach)):
        depth[s] = max((depth[n] + 1 for n in p.successors(s)), default=0)
    return StructureInfo(True, depth[root], reach, frozenset())


def _topological(p: Pts, nodes) -> list:
    order, seen = [], set()
    for start in nodes:
        if start in seen:
            continue
        seen.add(start)
        work = [(start, iter(list(p.successors(start))))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    work.append((w, iter(list(p.successors(w)))))
                    break
            else:
                work.pop()
                order.append(v)
    order.reverse()
    return order


def system_depth(p: Pts, roots: Iterable) -> float:
    return max((structure_info(p, r).depth for r in roots), default=0)
