import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from ptsmetrics import lp
from ptsmetrics.trace_metrics import distance_to_hull
from oracles import hull_distance_float


def rand_frac(rng, lo=0, hi=5):
    return F(rng.randint(lo * 4, hi * 4), 4)


@pytest.mark.parametrize("seed", range(40))
def test_simplex_matches_scipy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 4)
    c = [rand_frac(rng, -2, 3) for _ in range(n)]
    A = [[rand_frac(rng, -1, 3) for _ in range(n)] for _ in range(m)]
    b = [rand_frac(rng, 0, 4) for _ in range(m)]
    # box constraints keep the problem bounded
    A += [[F(int(i == j)) for j in range(n)] for i in range(n)]
    b += [F(3)] * n
    value, x = lp.maximize(c, A, b)
    ref = linprog([-float(v) for v in c], A_ub=np.array(A, dtype=float), b_ub=[float(v) for v in b],
                  bounds=[(0, None)] * n, method="highs")
    assert ref.success
    assert abs(float(value) + ref.fun) < 1e-9
    assert all(v >= 0 for v in x)
    assert all(sum(a * xi for a, xi in zip(row, x)) <= bi for row, bi in zip(A, b))
    assert sum(ci * xi for ci, xi in zip(c, x)) == value


def test_unbounded_detected():
    with pytest.raises(lp.Unbounded):
        lp.maximize([F(1)], [[F(-1)]], [F(1)])


@pytest.mark.parametrize("seed", range(40))
def test_distance_to_hull_matches_scipy(seed):
    rng = random.Random(1000 + seed)
    k, m = rng.randint(1, 5), rng.randint(0, 4)
    d = [F(rng.randint(0, 8), 8) for _ in range(k)]
    cands = [[F(rng.randint(0, 8), 8) for _ in range(k)] for _ in range(m)]
    exact = distance_to_hull(d, cands)
    ref = hull_distance_float({i: v for i, v in enumerate(d)},
                              [{i: v for i, v in enumerate(c)} for c in cands])
    assert abs(float(exact) - ref) < 1e-9


def test_distance_to_hull_examples():
    half = [F(1, 2), F(1, 2)]
    assert distance_to_hull(half, [[F(1), F(0)], [F(0), F(1)]]) == 0
    assert distance_to_hull([F(1), F(1)], [[F(1), F(0)], [F(0), F(1)]]) == F(1, 2)
    assert distance_to_hull([F(1, 4)], []) == F(1, 4)
