"""A small exact simplex solver over Fractions.

Only the form needed by the distance computations is supported:
maximize c.x subject to A x <= b, x >= 0 with b >= 0, so the slack basis
is feasible from the start.  Bland's rule guarantees termination.
"""
from fractions import Fraction


class Unbounded(ArithmeticError):
    pass


def maximize(c, A, b):
    """Return ``(value, x)`` for max c.x s.t. A x <= b, x >= 0 (b >= 0)."""
    m = len(A)
    n = len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("right-hand side must be nonnegative")
    # tableau rows: [A | I | b], objective row holds reduced costs -c
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        rows.append(row)
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    width = n + m
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise Unbounded("objective is unbounded")
        pivot = rows[leave][enter]
        prow = [v / pivot for v in rows[leave]]
        rows[leave] = prow
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [v - f * pv for v, pv in zip(rows[i], prow)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * pv for v, pv in zip(obj, prow)]
        basis[leave] = enter
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    return obj[-1], x
