"""Trace-distribution, trace-by-trace and supremal-probability distances.

Each family compares two states through the probabilities their
resolutions give to finite traces, weighting a trace of length n by
lambda**(n-1).  Hemimetrics measure how far the first state is from being
matched by the second; the pseudometric is the larger of both directions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from . import lp
from .intervals import hausdorff_one_sided
from .limits import CapExceeded, max_resolutions
from .pts import Pts, structure_info
from .resolutions import Resolver, realizable_traces

ZERO = Fraction(0)
ONE = Fraction(1)

APPROACHES = ("dis", "tbt", "sup")
SCHEDULERS = ("det", "rand")
DIRECTIONS = ("left", "right", "symmetric")


@dataclass(frozen=True)
class TraceMetricSpec:
    approach: str
    scheduler: str = "det"
    lam: Fraction = ONE
    depth: int = 2
    direction: str = "left"
    grid: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}")
        if self.scheduler not in SCHEDULERS:
            raise ValueError(f"scheduler must be one of {SCHEDULERS}")
        if not 0 < self.lam <= 1:
            raise ValueError("lambda must lie in (0, 1]")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if self.grid is not None:
            if self.grid < 1:
                raise ValueError("grid must be a positive integer")
            if (self.approach, self.scheduler) != ("dis", "rand"):
                raise ValueError("grid only applies to dis with randomized schedulers")


@dataclass(frozen=True)
class MetricResult:
    """A computed distance.

    The true (depth-unbounded) value lies in ``[value, value + truncation_bound]``;
    ``truncation_bound`` is ``None`` when no bound is known (lambda = 1 on a
    cyclic system).  ``exact`` is false for grid approximations.
    """

    value: Fraction
    truncation_bound: Optional[Fraction]
    exact: bool = True
    grid: Optional[int] = None
    witness: Optional[dict] = None
    meta: dict = field(default_factory=dict)

    @property
    def lower_estimate_only(self) -> bool:
        return self.truncation_bound is None


def weight(lam: Fraction, trace) -> Fraction:
    return lam ** (len(trace) - 1) if trace else ZERO


def truncation_bound(systems_and_roots, depth: int, lam: Fraction) -> Optional[Fraction]:
    """Slack between the depth-bounded value and the unbounded one."""
    deepest = max(structure_info(p, r).depth for p, r in systems_and_roots)
    if deepest <= depth:
        return ZERO
    if lam < 1:
        return lam ** depth
    return None


# --- trace-by-trace and supremal-probability families -------------------------

def tbt_distance(rs: Resolver, s, rt: Resolver, t, depth, lam, scheduler):
    best, witness = ZERO, None
    for trace in realizable_traces([(rs, s), (rt, t)], depth):
        a = rs.achievable(s, trace, scheduler)
        b = rt.achievable(t, trace, scheduler)
        d = weight(lam, trace) * hausdorff_one_sided(a, b)
        if d > best:
            best = d
            witness = {"trace": trace, "left": str(a), "right": str(b)}
    return best, witness


def sup_distance(rs: Resolver, s, rt: Resolver, t, depth, lam):
    best, witness = ZERO, None
    for trace in realizable_traces([(rs, s), (rt, t)], depth):
        ms, mt = rs.max_prob(s, trace), rt.max_prob(t, trace)
        d = weight(lam, trace) * max(ZERO, ms - mt)
        if d > best:
            best = d
            witness = {"trace": trace, "left": str(ms), "right": str(mt)}
    return best, witness


# --- trace-distribution family -----------------------------------------------

def _vector_table(groups_s, groups_t, lam):
    """Weighted vectors of both sides as integer rows over a shared trace index."""
    traces = sorted({tr for g in (groups_s, groups_t) for vs in g.values()
                     for v in vs for tr, _ in v}, key=lambda t: (len(t), t))
    index = {tr: i for i, tr in enumerate(traces)}

    def rows(groups):
        out = []
        for label in sorted(groups, key=lambda x: (x is not None, x or "")):
            for vec in sorted(groups[label]):
                row = [ZERO] * len(traces)
                for tr, q in vec:
                    row[index[tr]] = weight(lam, tr) * q
                out.append((label, vec, row))
        return out

    return traces, rows(groups_s), rows(groups_t)


def _as_int_matrix(rows, scale):
    data = [[int(v * scale) for v in r] for r in rows]
    bound = max((abs(v) for r in data for v in r), default=0)
    dtype = np.int64 if bound < 2**61 else object
    return np.array(data, dtype=dtype).reshape(len(rows), -1)


def _minimax(left_rows, right_rows):
    """max over left rows of min over right rows of the L-infinity distance."""
    if not right_rows:
        raise ValueError("right side has no vectors")
    dens = {v.denominator for r in left_rows + right_rows for v in r}
    scale = math.lcm(*dens) if dens else 1
    L = _as_int_matrix(left_rows, scale)
    R = _as_int_matrix(right_rows, scale)
    best, arg = -1, None
    chunk = max(1, 2_000_000 // max(1, R.size))
    for start in range(0, len(L), chunk):
        block = L[start:start + chunk]
        dist = np.abs(block[:, None, :] - R[None, :, :]).max(axis=2, initial=0)
        inner = dist.min(axis=1)
        i = int(np.argmax(inner))
        if inner[i] > best:
            best, arg = int(inner[i]), start + i
    return Fraction(best, scale), arg


def dis_det_distance(rs: Resolver, s, rt: Resolver, t, depth, lam):
    traces, left, right = _vector_table(rs.vectors(s, depth), rt.vectors(t, depth), lam)
    value, arg = _minimax([r for _, _, r in left], [r for _, _, r in right])
    witness = None
    if value > 0:
        witness = {"left_vector": {" ".join(k): str(q) for k, q in left[arg][1]}}
    return value, witness


def distance_to_hull(d_row, candidate_rows) -> Fraction:
    """Weighted L-infinity distance from ``d_row`` to conv(candidates and the zero vector).

    Solved exactly through the dual of
    min delta  s.t.  |d - sum mu_j y_j| <= delta,  sum mu_j <= 1,  mu, delta >= 0.
    """
    n_tr = len(d_row)
    if not candidate_rows:
        return max(d_row, default=ZERO)
    m = len(candidate_rows)
    # primal constraints M x >= r with x = (mu_1..mu_m, delta)
    M, r = [], []
    for k in range(n_tr):
        col = [y[k] for y in candidate_rows]
        M.append(col + [ONE])
        r.append(d_row[k])
        M.append([-v for v in col] + [ONE])
        r.append(-d_row[k])
    M.append([-ONE] * m + [ZERO])
    r.append(-ONE)
    cost = [ZERO] * m + [ONE]
    transposed = [[M[i][j] for i in range(len(M))] for j in range(m + 1)]
    value, _ = lp.maximize(r, transposed, cost)
    return value


def dis_rand_distance(rs: Resolver, s, rt: Resolver, t, depth, lam):
    """Exact randomized trace-distribution hemimetric.

    A randomized resolution of t that starts with label a has trace vectors
    filling conv(D_a(t) + {0}), D_a being the deterministic ones.  Distance to
    a convex set is convex, so the worst left vector is a deterministic one,
    and for a left vector starting with a only t's a-hull can be closest
    (every other hull is at distance at least its mass on the trace a).
    """
    traces, left, right = _vector_table(rs.vectors(s, depth), rt.vectors(t, depth), lam)
    by_label: dict = {}
    for label, vec, row in right:
        if label is not None:
            by_label.setdefault(label, []).append(row)
    best, witness = ZERO, None
    for label, vec, row in left:
        if label is None:
            continue
        cands = by_label.get(label, [])
        if any(row == c for c in cands):
            continue
        cheap = min([max(abs(a - b) for a, b in zip(row, c)) for c in cands]
                    + [max(row)])
        if cheap <= best:
            continue
        d = distance_to_hull(row, cands)
        if d > best:
            best = d
            witness = {"left_vector": {" ".join(k): str(q) for k, q in vec}}
    return best, witness


def _grid_points(rows_by_label, n_traces, grid):
    """All mixtures with weights in multiples of 1/grid (rest goes to halting)."""
    points = [tuple([ZERO] * n_traces)]
    for label, rows in rows_by_label.items():
        m = len(rows)
        count = comb(grid + m, m)
        if count + len(points) > max_resolutions():
            raise CapExceeded("grid mixtures", count + len(points), max_resolutions())
        # weights k_1..k_m >= 0 with sum <= grid, via stars and bars
        for bars in combinations(range(grid + m), m):
            ks, prev = [], -1
            for b in bars:
                ks.append(b - prev - 1)
                prev = b
            if sum(ks) > grid:
                continue
            point = [ZERO] * n_traces
            for k, row in zip(ks, rows):
                if k:
                    f = Fraction(k, grid)
                    for i, v in enumerate(row):
                        point[i] += f * v
            points.append(tuple(point))
    return sorted(set(points))


def dis_rand_grid_distance(rs: Resolver, s, rt: Resolver, t, depth, lam, grid):
    traces, left, right = _vector_table(rs.vectors(s, depth), rt.vectors(t, depth), lam)

    def grouped(rows):
        out: dict = {}
        for label, _, row in rows:
            if label is not None:
                out.setdefault(label, []).append(row)
        return out

    gl = _grid_points(grouped(left), len(traces), grid)
    gr = _grid_points(grouped(right), len(traces), grid)
    value, arg = _minimax([list(p) for p in gl], [list(p) for p in gr])
    witness = None
    if value > 0:
        witness = {"left_point": [str(v) for v in gl[arg]], "traces": [" ".join(t) for t in traces]}
    return value, witness


# --- public entry points -----------------------------------------------------

def directed_trace_distance(ps: Pts, s, pt: Pts, t, spec: TraceMetricSpec):
    """h(s, t) for one direction, as ``(value, witness)``."""
    rs, rt = Resolver(ps), Resolver(pt)
    if spec.approach == "tbt":
        return tbt_distance(rs, s, rt, t, spec.depth, spec.lam, spec.scheduler)
    if spec.approach == "sup":
        return sup_distance(rs, s, rt, t, spec.depth, spec.lam)
    if spec.scheduler == "det":
        return dis_det_distance(rs, s, rt, t, spec.depth, spec.lam)
    if spec.grid is not None:
        return dis_rand_grid_distance(rs, s, rt, t, spec.depth, spec.lam, spec.grid)
    return dis_rand_distance(rs, s, rt, t, spec.depth, spec.lam)


def _meta(spec: TraceMetricSpec, direction):
    return {"family": "trace", "approach": spec.approach, "scheduler": spec.scheduler,
            "lambda": str(spec.lam), "depth": spec.depth, "direction": direction,
            "grid": spec.grid}


def trace_hemimetric(p: Pts, s, t, spec: TraceMetricSpec, p_t: Optional[Pts] = None) -> MetricResult:
    """Hemimetric between ``s`` and ``t``; ``direction="right"`` swaps them.

    ``t`` lives in ``p_t`` when given, otherwise in ``p``.
    """
    p_t = p if p_t is None else p_t
    if spec.direction == "symmetric":
        return trace_pseudometric(p, s, t, spec, p_t)
    if spec.direction == "right":
        ps, a, pt, b = p_t, t, p, s
    else:
        ps, a, pt, b = p, s, p_t, t
    value, witness = directed_trace_distance(ps, a, pt, b, spec)
    bound = truncation_bound([(p, s), (p_t, t)], spec.depth, spec.lam)
    exact = spec.grid is None
    return MetricResult(value, bound, exact, spec.grid, witness, _meta(spec, spec.direction))


def trace_pseudometric(p: Pts, s, t, spec: TraceMetricSpec, p_t: Optional[Pts] = None) -> MetricResult:
    p_t = p if p_t is None else p_t
    left = trace_hemimetric(p, s, t, replace(spec, direction="left"), p_t)
    right = trace_hemimetric(p, s, t, replace(spec, direction="right"), p_t)
    pick = left if left.value >= right.value else right
    witness = None
    if pick.witness is not None:
        witness = dict(pick.witness, direction=pick.meta["direction"])
    return replace(pick, witness=witness, meta=_meta(spec, "symmetric"))
