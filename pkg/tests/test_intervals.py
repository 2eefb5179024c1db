from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from ptsmetrics.intervals import AchievableSet, hausdorff_one_sided
from oracles import interval_hausdorff

frac = st.builds(lambda n, d: F(n, d), st.integers(0, 12), st.sampled_from([1, 2, 3, 4, 6, 12])) \
    .filter(lambda q: q <= 1)
interval = st.tuples(frac, frac).map(lambda p: (min(p), max(p)))
sets = st.lists(interval, min_size=1, max_size=4).map(AchievableSet)


def test_normalisation_merges_overlaps():
    s = AchievableSet([(F(0), F(1, 2)), (F(1, 4), F(3, 4)), (F(1), F(1))])
    assert s.components == ((F(0), F(3, 4)), (F(1), F(1)))
    assert AchievableSet.points([F(1, 2), F(0)]).is_discrete()


def test_fig1_sets():
    a = AchievableSet.points([F(0), F(1, 2), F(1)])
    b = AchievableSet.points([F(0), F(1, 10), F(1)])
    assert hausdorff_one_sided(a, b) == F(2, 5)
    assert hausdorff_one_sided(b, a) == F(1, 10)
    assert hausdorff_one_sided(AchievableSet.interval(0, 1), a) == F(1, 4)


@given(sets, sets)
@settings(max_examples=300)
def test_hausdorff_matches_grid_scan(a, b):
    assert hausdorff_one_sided(a, b) == interval_hausdorff(a.components, b.components)


@given(sets, sets, sets)
@settings(max_examples=200)
def test_hausdorff_triangle_and_identity(a, b, c):
    assert hausdorff_one_sided(a, a) == 0
    assert hausdorff_one_sided(a, c) <= hausdorff_one_sided(a, b) + hausdorff_one_sided(b, c)


@given(sets, sets)
def test_hausdorff_zero_iff_included(a, b):
    included = all(any(blo <= lo and hi <= bhi for blo, bhi in b.components)
                   for lo, hi in a.components)
    assert (hausdorff_one_sided(a, b) == 0) == included


@given(sets, frac)
def test_distance_to_point(a, x):
    assert a.distance_to(x) == interval_hausdorff([(x, x)], a.components)
    assert a.contains(x) == (a.distance_to(x) == 0)
