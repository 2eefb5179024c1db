"""Brute-force reference computations used by the tests.

They work from explicitly enumerated deterministic resolutions (or, for
the LP, from scipy) and never call the distance code under test.
"""
from fractions import Fraction
from itertools import product
from math import lcm

import numpy as np
from scipy.optimize import linprog

from ptsmetrics.pts import build_interaction_system, structure_info
from ptsmetrics.quantifiers import Census

ZERO = Fraction(0)


def w(lam, trace):
    return Fraction(lam) ** (len(trace) - 1)


def interval_hausdorff(a, b):
    """sup over x in a of dist(x, b), for finite unions of closed intervals.

    The maximiser is an endpoint of a or a midpoint between two endpoints of
    b, so scanning a grid of step 1/(2N) (N = common denominator) is exact.
    """
    a, b = list(a), list(b)
    if not a:
        return ZERO
    dens = [x.denominator for iv in a + b for x in iv]
    step = Fraction(1, 2 * lcm(*dens))
    best = ZERO
    for lo, hi in a:
        x = lo
        while x <= hi:
            d = min(ZERO if blo <= x <= bhi else min(abs(x - blo), abs(x - bhi))
                    for blo, bhi in b)
            best = max(best, d)
            x += step
    return best


def census(p, root, depth, maximal=False, success=None):
    return Census(p, root, depth, maximal, success)


def all_traces(actions, depth):
    for n in range(1, depth + 1):
        yield from product(actions, repeat=n)


def tbt(ps, s, pt, t, depth, lam, scheduler):
    cs, ct = census(ps, s, depth), census(pt, t, depth)
    return _tbt_from_census(cs, ct, ps.actions, depth, lam, scheduler)


def _tbt_from_census(cs, ct, actions, depth, lam, scheduler):
    best = ZERO
    for trace in all_traces(actions, depth):
        if scheduler == "det":
            a = [(v, v) for v in cs.values(trace)]
            b = [(v, v) for v in ct.values(trace)]
        else:
            a = list(cs.rand_values(trace).components)
            b = list(ct.rand_values(trace).components)
        best = max(best, w(lam, trace) * interval_hausdorff(a, b))
    return best


def sup(ps, s, pt, t, depth, lam):
    cs, ct = census(ps, s, depth), census(pt, t, depth)
    return max([w(lam, tr) * max(ZERO, max(cs.values(tr)) - max(ct.values(tr)))
                for tr in all_traces(ps.actions, depth)], default=ZERO)


def _rows(c, lam):
    return [(label, {tr: w(lam, tr) * q for tr, q in d.items()}) for label, d in c.rows]


def dis_det(ps, s, pt, t, depth, lam):
    left, right = _rows(census(ps, s, depth), lam), _rows(census(pt, t, depth), lam)
    best = ZERO
    for _, d in left:
        closest = min(max([abs(d.get(k, ZERO) - e.get(k, ZERO)) for k in set(d) | set(e)],
                          default=ZERO) for _, e in right)
        best = max(best, closest)
    return best


def hull_distance_float(point, vectors):
    """min over mu >= 0, sum mu <= 1 of max_k |point_k - sum_j mu_j v_jk| (scipy)."""
    keys = sorted(set(point) | {k for v in vectors for k in v})
    if not keys:
        return 0.0
    if not vectors:
        return float(max(point.values(), default=0))
    m = len(vectors)
    V = np.array([[float(v.get(k, 0)) for v in vectors] for k in keys])
    d = np.array([float(point.get(k, 0)) for k in keys])
    # variables: mu_1..mu_m, delta
    A, b = [], []
    for i in range(len(keys)):
        A.append(list(V[i]) + [-1.0])
        b.append(d[i])
        A.append(list(-V[i]) + [-1.0])
        b.append(-d[i])
    A.append([1.0] * m + [0.0])
    b.append(1.0)
    res = linprog([0.0] * m + [1.0], A_ub=A, b_ub=b, bounds=[(0, None)] * (m + 1),
                  method="highs")
    assert res.success, res.message
    return res.fun


def dis_rand_float(ps, s, pt, t, depth, lam):
    left, right = _rows(census(ps, s, depth), lam), _rows(census(pt, t, depth), lam)
    best = 0.0
    for label, d in left:
        if label is None:
            continue
        cands = [e for lab, e in right if lab == label]
        best = max(best, hull_distance_float(d, cands))
    return best


def success_values(p, x, o):
    system = build_interaction_system(p, o, x)
    depth = int(structure_info(system.pts, system.root).depth)
    c = Census(system.pts, system.root, depth, maximal=True, success=system.success)
    return [sum(d.values(), ZERO) for _, d in c.rows]


def may_must(ps, s, pt, t, suite, approach):
    best = ZERO
    for name, o in suite.items():
        vs, vt = success_values(ps, s, o), success_values(pt, t, o)
        diffs = []
        if approach in ("may", "mm"):
            diffs.append(max(vs) - max(vt))
        if approach in ("must", "mm"):
            diffs.append(min(vs) - min(vt))
        best = max([best] + [suite.weight(name) * d for d in diffs])
    return best


def testing_trace_family(ps, s, pt, t, suite, approach, scheduler, lam=1):
    best = ZERO
    for name, o in suite.items():
        ss, st = build_interaction_system(ps, o, s), build_interaction_system(pt, o, t)
        depth = max(1, int(max(structure_info(ss.pts, ss.root).depth,
                               structure_info(st.pts, st.root).depth)))
        cs = Census(ss.pts, ss.root, depth, True, ss.success)
        ct = Census(st.pts, st.root, depth, True, st.success)
        actions = sorted(set(ss.pts.actions) | set(st.pts.actions))
        if approach == "sup":
            for tr in all_traces(actions, depth):
                best = max(best, w(lam, tr) * max(ZERO, max(cs.values(tr)) - max(ct.values(tr))))
        else:
            best = max(best, _tbt_from_census(cs, ct, actions, depth, lam, scheduler))
    return best
