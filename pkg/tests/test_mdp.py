"""Optimal success probabilities against exhaustive memoryless policies."""
import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from ptsmetrics.generate import GenParams, generate_random_pts, generate_random_test
from ptsmetrics.mdp import opt_success_prob, solve_linear
from ptsmetrics.pts import (InteractionSystem, build_interaction_system, reachable_states,
                            structure_info, validate_npt, validate_pts)


def policy_values(system):
    """All success probabilities from the root under memoryless deterministic policies."""
    p = system.pts
    states = list(reachable_states(p, system.root))
    idx = {s: i for i, s in enumerate(states)}
    choices = [p.out(s) if (p.out(s) and s not in system.success) else (None,) for s in states]
    out = []
    for pick in itertools.product(*choices):
        # states that reach success with positive probability under this policy
        good = {s for s in states if s in system.success}
        changed = True
        while changed:
            changed = False
            for s, tr in zip(states, pick):
                if s not in good and tr is not None and any(x in good for x in tr.target.support):
                    good.add(s)
                    changed = True
        n = len(states)
        A, b = np.eye(n), np.zeros(n)
        for s, tr in zip(states, pick):
            i = idx[s]
            if s in system.success:
                b[i] = 1
            elif s in good:
                for x, q in tr.target.items():
                    A[i, idx[x]] -= float(q)
        out.append(np.linalg.solve(A, b)[idx[system.root]])
    return out


def cyclic_system(seed):
    inst = generate_random_pts(GenParams(seed=seed, max_states=4, max_transitions=2,
                                         acyclic=False, alphabet_size=2, min_transitions=1))
    p = inst.pts
    rng = random.Random(seed)
    success = {rng.choice(p.states)}
    trans = [(t.source, t.label, t.target.items()) for t in p.transitions if t.source not in success]
    q = validate_pts(p.name, p.states, p.actions, p.init, trans)
    return InteractionSystem(q, p.init, frozenset(success))


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("objective", ["sup", "inf"])
def test_policy_iteration_matches_exhaustive_policies(seed, objective):
    system = cyclic_system(seed)
    values = policy_values(system)
    best = max(values) if objective == "sup" else min(values)
    got = opt_success_prob(system, objective=objective, method="policy")
    assert abs(float(got) - best) < 1e-9


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("objective", ["sup", "inf"])
def test_dp_and_policy_iteration_agree_on_acyclic(seed, objective):
    inst = generate_random_pts(GenParams(seed=seed, max_states=5, min_transitions=1))
    o = generate_random_test(random.Random(seed), inst.pts.actions)
    system = build_interaction_system(inst.pts, o, inst.roots[0])
    assert structure_info(system.pts, system.root).acyclic
    dp = opt_success_prob(system, objective=objective, method="dp")
    pi = opt_success_prob(system, objective=objective, method="policy")
    assert dp == pi
    values = policy_values(system)
    assert abs(float(dp) - (max(values) if objective == "sup" else min(values))) < 1e-9


def test_fig3_examples(corpus):
    m = corpus("fig3.pts")
    p, o1 = m.systems["fig3"], m.systems["o1"]
    assert opt_success_prob(build_interaction_system(p, o1, "t"), objective="inf") == 1
    assert opt_success_prob(build_interaction_system(p, o1, "u"), objective="inf") == 0
    assert opt_success_prob(build_interaction_system(p, o1, "u"), objective="sup") == 1


def test_cycle_with_escape_exact():
    # a -x-> {a: 1/2, top: 1/2}: success reached with probability 1
    base = validate_pts("c", ["a", "top"], ["x"], "a", [("a", "x", [("a", F(1, 2)), ("top", F(1, 2))])])
    system = InteractionSystem(base, "a", frozenset({"top"}))
    assert opt_success_prob(system, objective="inf") == 1


def test_solve_linear_exact():
    x = solve_linear([[F(2), F(1)], [F(1), F(3)]], [F(1), F(2)])
    assert x == [F(1, 5), F(3, 5)]
