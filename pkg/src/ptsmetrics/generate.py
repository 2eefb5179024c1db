"""Seeded random systems and tests for the property harness."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .pts import Npt, Pts, validate_npt, validate_pts

KINDS = ("general", "fully-nondeterministic", "fully-probabilistic")


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    max_states: int = 5
    max_transitions: int = 2
    max_support: int = 2
    max_denominator: int = 4
    alphabet_size: int = 2
    acyclic: bool = True
    kind: str = "general"
    min_transitions: int = 0
    n_roots: int = 2

    def __post_init__(self):
        for name in ("max_states", "max_transitions", "max_support", "max_denominator",
                     "alphabet_size", "n_roots"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.kind == "fully-probabilistic" and self.min_transitions > 1:
            raise ValueError("a fully probabilistic system has at most one transition per state")
        if self.min_transitions > self.max_transitions:
            raise ValueError("min_transitions exceeds max_transitions")
        if self.n_roots > self.max_states:
            raise ValueError("more roots than states")

    def with_seed(self, seed) -> "GenParams":
        return replace(self, seed=seed)


class RandomInstance(NamedTuple):
    pts: Pts
    roots: tuple


def alphabet(n: int) -> list:
    return [chr(ord("a") + i) for i in range(n)]


def random_distribution(rng: random.Random, targets, max_denominator: int) -> list:
    """Exact distribution over ``targets`` from bounded random integer weights."""
    weights = [rng.randint(1, max_denominator) for _ in targets]
    total = sum(weights)
    return [(s, Fraction(w, total)) for s, w in zip(targets, weights)]


def _random_transitions(rng, states, source_index, params, actions, pool):
    if params.kind == "fully-probabilistic":
        hi = min(1, params.max_transitions)
    else:
        hi = params.max_transitions
    lo = min(params.min_transitions, hi)
    count = rng.randint(lo, hi)
    out, seen = [], set()
    for _ in range(count * 3):
        if len(out) >= count or not pool:
            break
        label = rng.choice(actions)
        size = 1 if params.kind == "fully-nondeterministic" else rng.randint(1, min(params.max_support, len(pool)))
        targets = rng.sample(pool, size)
        dist = random_distribution(rng, targets, params.max_denominator)
        key = (label, frozenset(dist))
        if key in seen:
            continue
        seen.add(key)
        out.append((states[source_index], label, dist))
    return out


def generate_random_pts(params: GenParams, name: str = "rand") -> RandomInstance:
    """A random system and ``params.n_roots`` designated roots, determined by the seed."""
    rng = random.Random(params.seed)
    n = rng.randint(max(params.n_roots, 1), params.max_states)
    states = [f"q{i}" for i in range(n)]
    actions = alphabet(params.alphabet_size)
    transitions = []
    for i in range(n):
        pool = states[i + 1:] if params.acyclic else states
        transitions += _random_transitions(rng, states, i, params, actions, list(pool))
    pts = validate_pts(name, states, actions, states[0], transitions)
    return RandomInstance(pts, tuple(states[:params.n_roots]))


def generate_random_test(rng: random.Random, actions, max_states: int = 4,
                         max_transitions: int = 2, max_support: int = 2,
                         max_denominator: int = 3, name: str = "o") -> Npt:
    """A random acyclic test whose success state is ``top``."""
    n = rng.randint(1, max_states)
    states = [f"{name}{i}" for i in range(n)] + ["top"]
    transitions = []
    for i in range(n):
        pool = states[i + 1:]
        seen = set()
        for _ in range(rng.randint(1 if i == 0 else 0, max_transitions)):
            label = rng.choice(list(actions))
            size = rng.randint(1, min(max_support, len(pool)))
            dist = random_distribution(rng, rng.sample(pool, size), max_denominator)
            key = (label, frozenset(dist))
            if key not in seen:
                seen.add(key)
                transitions.append((states[i], label, dist))
    base = validate_pts(name, states, list(actions), states[0], transitions)
    return validate_npt(base, "top")


def linear_test(trace, actions, name: str = None) -> Npt:
    """Test that succeeds exactly after performing ``trace``."""
    trace = tuple(trace)
    name = name or "lin_" + ("".join(trace) or "eps")
    states = [f"l{i}" for i in range(len(trace))] + ["top"]
    transitions = [(states[i], a, [(states[i + 1], 1)]) for i, a in enumerate(trace)]
    base = validate_pts(name, states, list(actions), states[0], transitions)
    return validate_npt(base, "top")


def escape_test(trace, actions, name: str = None) -> Npt:
    """Linear test for ``trace`` that also accepts every move into a dead state.

    At step i it offers trace[i] towards step i+1, trace[i] towards a dead
    state, and every other label towards the dead state.  Whatever the
    process does, the test never blocks it before the trace is done.
    """
    trace = tuple(trace)
    name = name or "esc_" + ("".join(trace) or "eps")
    states = [f"e{i}" for i in range(len(trace))] + ["top", "dead"]
    transitions = []
    for i, a in enumerate(trace):
        transitions.append((states[i], a, [(states[i + 1], 1)]))
        transitions.append((states[i], a, [("dead", 1)]))
        for b in actions:
            if b != a:
                transitions.append((states[i], b, [("dead", 1)]))
    base = validate_pts(name, states, list(actions), states[0], transitions)
    return validate_npt(base, "top")


def restrict_to_trace(o: Npt, trace, name: str = None) -> Npt:
    """Test ``o`` cut down to the moves along ``trace``; success only at its end.

    States are ``(node, step)`` pairs of the test unfolded along ``trace``.
    """
    trace = tuple(trace)
    base = o.base
    top = ("#top", len(trace))
    states = [(base.init, 0)]
    transitions = []
    frontier = [(base.init, 0)]
    seen = set(frontier)
    while frontier:
        node, i = frontier.pop()
        if i == len(trace) or node == "#dead":
            continue
        for tr in base.out(node):
            if tr.label != trace[i]:
                continue
            entries = []
            for target, p in tr.target.items():
                if target == o.success:
                    key = top if i + 1 == len(trace) else ("#dead", i + 1)
                else:
                    key = (target, i + 1)
                entries.append((key, p))
                if key not in seen:
                    seen.add(key)
                    states.append(key)
                    frontier.append(key)
            transitions.append(((node, i), tr.label, entries))
    if top not in seen:
        states.append(top)
    pts = validate_pts(name or f"{o.name}|{''.join(trace)}", states, base.actions,
                       (base.init, 0), transitions)
    return validate_npt(pts, top)
