"""Preorders decided straight from their quantifier form.

These work on explicitly enumerated deterministic resolutions and share no
code with the distance computations, so they serve as an oracle for the
kernel properties.  Everything is exponential; keep inputs small.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .intervals import AchievableSet
from .pts import build_interaction_system, structure_info
from .resolutions import enumerate_det_resolutions, trace_distribution

ZERO = Fraction(0)


def _nonzero(dist):
    return {k: v for k, v in dist.items() if k and v}


class Census:
    """All deterministic resolutions of one root, with their trace distributions."""

    def __init__(self, pts, root, depth, maximal=False, success=None):
        self.maximal = maximal
        self.rows = []  # (root label or None, {trace: prob})
        for tree in enumerate_det_resolutions(pts, root, depth, maximal):
            dist = _nonzero(trace_distribution(tree, depth, success))
            self.rows.append((tree.root.label, dist))

    def traces(self):
        return {k for _, d in self.rows for k in d}

    def values(self, trace):
        return {d.get(trace, ZERO) for _, d in self.rows}

    def rand_values(self, trace) -> AchievableSet:
        """Convex hull of the values per root label; halting roots give 0.

        Without maximality a mixture may also put weight on halting, which
        stretches every hull down to 0.
        """
        if not self.maximal:
            return AchievableSet.interval(ZERO, max(self.values(trace)))
        groups = {}
        for label, d in self.rows:
            groups.setdefault(label, []).append(d.get(trace, ZERO))
        return AchievableSet((min(v), max(v)) for v in groups.values())

    def vectors(self):
        return {frozenset(d.items()) for _, d in self.rows}

    def vectors_by_label(self):
        out = {}
        for label, d in self.rows:
            out.setdefault(label, set()).add(frozenset(d.items()))
        return out


def _set_included(a: AchievableSet, b: AchievableSet) -> bool:
    return all(any(blo <= lo and hi <= bhi for blo, bhi in b.components)
               for lo, hi in a.components)


def _rank_solve(columns, target):
    """Unique solution of sum x_j columns_j = target, or None.

    Returns None when the columns are dependent or the system is inconsistent.
    """
    n = len(target)
    m = len(columns)
    rows = [[columns[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][m] != 0 for i in range(r, n)):
        return None
    return [rows[i][m] for i in range(m)]


def in_hull_with_origin(point: dict, vectors) -> bool:
    """Is ``point`` a sub-convex combination of ``vectors`` (i.e. in conv(V + {0}))?

    Enumerates basic solutions of V mu = point over independent column
    subsets and checks that one is nonnegative with total weight <= 1.
    """
    if not any(point.values()):
        return True
    # All entries are nonnegative, so a vector with mass on a trace where the
    # point has none can only take weight 0.
    vectors = {frozenset(dict(v).items()) for v in vectors
               if all(point.get(k, ZERO) != 0 for k, q in dict(v).items() if q != 0)}
    keys = sorted(set(point), key=lambda t: (len(t), t))
    target = [point.get(k, ZERO) for k in keys]
    cols = sorted([dict(v).get(k, ZERO) for k in keys] for v in vectors)
    for size in range(1, min(len(cols), len(keys)) + 1):
        for subset in combinations(range(len(cols)), size):
            mu = _rank_solve([cols[j] for j in subset], target)
            if mu is not None and all(x >= 0 for x in mu) and sum(mu) <= 1:
                return True
    return False


def trace_preorder(approach, scheduler, ps, s, pt, t, depth) -> bool:
    """s below t for a trace preorder, decided on enumerated resolutions."""
    cs, ct = Census(ps, s, depth), Census(pt, t, depth)
    if approach == "dis":
        if scheduler == "det":
            return cs.vectors() <= ct.vectors()
        right = ct.vectors_by_label()
        for label, vecs in cs.vectors_by_label().items():
            if label is None:
                continue
            cands = [dict(v) for v in right.get(label, ())]
            for v in vecs:
                if not in_hull_with_origin(dict(v), cands):
                    return False
        return True
    traces = cs.traces() | ct.traces()
    for trace in traces:
        if approach == "sup":
            if max(cs.values(trace)) > max(ct.values(trace)):
                return False
        elif scheduler == "det":
            if not cs.values(trace) <= ct.values(trace):
                return False
        elif not _set_included(cs.rand_values(trace), ct.rand_values(trace)):
            return False
    return True


def _interaction_census(p, x, o):
    system = build_interaction_system(p, o, x)
    depth = int(structure_info(system.pts, system.root).depth)
    return Census(system.pts, system.root, depth, maximal=True, success=system.success)


def success_totals(census: Census) -> list:
    return [sum(d.values(), ZERO) for _, d in census.rows]


def testing_preorder(approach, scheduler, ps, s, pt, t, suite) -> bool:
    """s below t for a testing preorder over ``suite``, by enumeration."""
    for _, o in suite.items():
        cs, ct = _interaction_census(ps, s, o), _interaction_census(pt, t, o)
        if approach in ("may", "must", "mm"):
            ts, tt = success_totals(cs), success_totals(ct)
            if approach in ("may", "mm") and max(ts) > max(tt):
                return False
            if approach in ("must", "mm") and min(ts) > min(tt):
                return False
            continue
        for trace in cs.traces() | ct.traces():
            if approach == "sup":
                if max(cs.values(trace)) > max(ct.values(trace)):
                    return False
            elif scheduler == "det":
                if not cs.values(trace) <= ct.values(trace):
                    return False
            elif not _set_included(cs.rand_values(trace), ct.rand_values(trace)):
                return False
    return True
