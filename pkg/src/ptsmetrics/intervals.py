"""Finite unions of closed rational intervals."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple

Interval = Tuple[Fraction, Fraction]


class AchievableSet:
    """Normalized union of disjoint closed intervals, sorted by lower end.

    Points are stored as degenerate intervals ``(x, x)``.
    """

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Interval] = ()):
        parts = sorted((Fraction(lo), Fraction(hi)) for lo, hi in components)
        merged = []
        for lo, hi in parts:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self.components = tuple(merged)

    @classmethod
    def point(cls, x) -> "AchievableSet":
        return cls([(x, x)])

    @classmethod
    def points(cls, xs) -> "AchievableSet":
        return cls((x, x) for x in xs)

    @classmethod
    def interval(cls, lo, hi) -> "AchievableSet":
        return cls([(lo, hi)])

    def union(self, other: "AchievableSet") -> "AchievableSet":
        return AchievableSet(self.components + other.components)

    def is_empty(self) -> bool:
        return not self.components

    def min(self) -> Fraction:
        return self.components[0][0]

    def max(self) -> Fraction:
        return self.components[-1][1]

    def is_discrete(self) -> bool:
        return all(lo == hi for lo, hi in self.components)

    def point_values(self) -> tuple:
        if not self.is_discrete():
            raise ValueError("set contains a non-degenerate interval")
        return tuple(lo for lo, _ in self.components)

    def contains(self, x) -> bool:
        x = Fraction(x)
        return any(lo <= x <= hi for lo, hi in self.components)

    def distance_to(self, x) -> Fraction:
        """Distance from the point ``x`` to the nearest element of the set."""
        if not self.components:
            raise ValueError("distance to an empty set")
        x = Fraction(x)
        best = None
        for lo, hi in self.components:
            d = lo - x if x < lo else (x - hi if x > hi else Fraction(0))
            if best is None or d < best:
                best = d
        return best

    def __eq__(self, other):
        if isinstance(other, AchievableSet):
            return self.components == other.components
        return NotImplemented

    def __hash__(self):
        return hash(self.components)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        parts = [str(lo) if lo == hi else f"[{lo}, {hi}]" for lo, hi in self.components]
        return "{" + ", ".join(parts) + "}"


def hausdorff_one_sided(a: AchievableSet, b: AchievableSet) -> Fraction:
    """sup over x in ``a`` of the distance from x to ``b``.

    The function x -> dist(x, b) is piecewise linear with local maxima only
    at the midpoints of b's gaps, so it suffices to look at a's endpoints
    and at those midpoints that fall inside a.
    """
    if a.is_empty() or b.is_empty():
        raise ValueError("one-sided Hausdorff distance needs nonempty sets")
    candidates = [x for comp in a.components for x in comp]
    bc = b.components
    for (_, hi), (lo, _) in zip(bc, bc[1:]):
        mid = (hi + lo) / 2
        if a.contains(mid):
            candidates.append(mid)
    return max(b.distance_to(x) for x in candidates)
