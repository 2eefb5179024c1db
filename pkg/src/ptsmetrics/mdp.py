"""Optimal probability of reaching success in an interaction system.

Acyclic systems are solved by a direct recursion.  Cyclic ones use policy
iteration over memoryless deterministic schedulers, with every policy
evaluated by exact Gaussian elimination.  Randomized schedulers cannot do
better or worse than deterministic ones here, so both share this code.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction

from .pts import reachable_states, structure_info

ZERO = Fraction(0)
ONE = Fraction(1)


def _expected(tr, values):
    return sum((p * values[s] for s, p in tr.target.items()), ZERO)


def _acyclic_value(pts, root, success, better):
    memo = {}

    def value(state):
        if state in memo:
            return memo[state]
        if state in success:
            v = ONE
        else:
            out = pts.out(state)
            if not out:
                v = ZERO
            else:
                v = None
                for tr in out:
                    cand = sum((p * value(s) for s, p in tr.target.items()), ZERO)
                    if v is None or better(cand, v):
                        v = cand
        memo[state] = v
        return v

    return value(root)


def solve_linear(matrix, rhs):
    """Solve ``matrix x = rhs`` exactly; the matrix must be nonsingular."""
    n = len(rhs)
    rows = [list(map(Fraction, matrix[i])) + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pr = rows[col]
        inv = 1 / pr[col]
        pr[:] = [v * inv for v in pr]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
    return [rows[i][n] for i in range(n)]


def _backward_reach(states, pts, targets, edges_ok):
    """States from which ``targets`` can be reached along allowed edges."""
    preds = {s: set() for s in states}
    for s in states:
        for tr in edges_ok(s):
            for t in tr.target.support:
                if t in preds:
                    preds[t].add(s)
    seen = set(t for t in targets if t in preds)
    queue = deque(seen)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def evaluate_policy(pts, states, success, policy, fixed_zero=frozenset()):
    """Reach probabilities under a memoryless policy ``{state: transition}``.

    States that cannot reach success under the policy get 0.
    """
    reach = _backward_reach(
        states, pts, [s for s in states if s in success],
        lambda s: [policy[s]] if s in policy and s not in fixed_zero else [])
    values = {s: (ONE if s in success else ZERO) for s in states}
    unknown = [s for s in states if s in reach and s not in success]
    if not unknown:
        return values
    index = {s: i for i, s in enumerate(unknown)}
    matrix = [[ZERO] * len(unknown) for _ in unknown]
    rhs = [ZERO] * len(unknown)
    for s in unknown:
        i = index[s]
        matrix[i][i] += ONE
        for t, p in policy[s].target.items():
            if t in index:
                matrix[i][index[t]] -= p
            elif t in success:
                rhs[i] += p
    for s, v in zip(unknown, solve_linear(matrix, rhs)):
        values[s] = v
    return values


def _policy_iteration(pts, root, success, objective):
    states = reachable_states(pts, root)
    if objective == "sup":
        can_reach = _backward_reach(states, pts, [s for s in states if s in success],
                                    lambda s: pts.out(s))
        zero = frozenset(s for s in states if s not in can_reach)
        better = lambda a, b: a > b  # noqa: E731
    else:
        # states where every resolution reaches success with positive probability
        positive = set(s for s in states if s in success)
        changed = True
        while changed:
            changed = False
            for s in states:
                if s in positive:
                    continue
                out = pts.out(s)
                if out and all(any(t in positive for t in tr.target.support) for tr in out):
                    positive.add(s)
                    changed = True
        zero = frozenset(s for s in states if s not in positive)
        better = lambda a, b: a < b  # noqa: E731

    policy = {s: pts.out(s)[0] for s in states
              if pts.out(s) and s not in success and s not in zero}
    while True:
        values = evaluate_policy(pts, states, success, policy, zero)
        for s in zero:
            values[s] = ZERO
        changed = False
        for s in policy:
            current = _expected(policy[s], values)
            best_tr, best_v = policy[s], current
            for tr in pts.out(s):
                v = _expected(tr, values)
                if better(v, best_v):
                    best_tr, best_v = tr, v
            if best_tr is not policy[s]:
                policy[s] = best_tr
                changed = True
        if not changed:
            return values[root]


def opt_success_prob(system, config=None, objective: str = "sup",
                     method: str = "auto") -> Fraction:
    """Optimal probability of reaching a success configuration.

    ``objective`` is ``"sup"`` or ``"inf"``; halting is allowed only at
    deadlocks.  ``method`` may force ``"dp"`` (acyclic only) or ``"policy"``.
    """
    if objective not in ("sup", "inf"):
        raise ValueError(f"unknown objective {objective!r}")
    config = system.root if config is None else config
    pts, success = system.pts, system.success
    if method == "auto":
        method = "dp" if structure_info(pts, config).acyclic else "policy"
    if method == "dp":
        better = (lambda a, b: a > b) if objective == "sup" else (lambda a, b: a < b)
        return _acyclic_value(pts, config, success, better)
    if method == "policy":
        return _policy_iteration(pts, config, success, objective)
    raise ValueError(f"unknown method {method!r}")
