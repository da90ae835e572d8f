"""Exact linear programming over the rationals.

A dense two-phase tableau simplex with Bland's rule.  Every number is a
``fractions.Fraction`` so feasibility and optimality decisions are exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: list = field(default_factory=list)


def _pivot(tab, basis, row, col):
    prow = tab[row]
    p = prow[col]
    if p != 1:
        prow = [v / p for v in prow]
        tab[row] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for i, r in enumerate(tab):
        if i == row:
            continue
        f = r[col]
        if f:
            for j in nz:
                r[j] -= f * prow[j]
    basis[row] = col


def _run(tab, basis, ncols, allowed):
    """Maximise the objective held in the last row (stored as reduced costs)."""
    m = len(tab) - 1
    obj = tab[-1]
    while True:
        col = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        row = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            return UNBOUNDED
        _pivot(tab, basis, row, col)


def linprog(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=(), maximize=True):
    """Optimise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are non-negative unless their index is listed in ``free``.
    Returns an :class:`LPResult`; ``x`` holds exact values for the
    original variables when the status is optimal.
    """
    n = len(c)
    free = sorted(set(free))
    # column layout: original vars, negative parts of free vars, slacks
    cols = n + len(free)
    neg_of = {v: n + k for k, v in enumerate(free)}

    def expand(row):
        out = [Fraction(v) for v in row] + [Fraction(0)] * len(free)
        for v, j in neg_of.items():
            out[j] = -out[v]
        return out

    rows, rhs = [], []
    n_slack = len(A_ub)
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        r = expand(a) + [Fraction(0)] * n_slack
        r[cols + i] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(b))
    for a, b in zip(A_eq, b_eq):
        rows.append(expand(a) + [Fraction(0)] * n_slack)
        rhs.append(Fraction(b))
    width = cols + n_slack
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # phase one: one artificial per row
    total = width + m
    tab = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(rows[i] + art + [rhs[i]])
    basis = [width + i for i in range(m)]
    obj = [Fraction(0)] * (total + 1)
    for i in range(m):
        for j in range(width):
            obj[j] -= tab[i][j]
        obj[-1] -= tab[i][-1]
    tab.append(obj)
    _run(tab, basis, total, [True] * total)
    if tab[-1][-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= width:
            col = next((j for j in range(width) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)

    sign = Fraction(1 if maximize else -1)
    cost = [sign * v for v in expand(c)] + [Fraction(0)] * n_slack
    obj = [-v for v in cost] + [Fraction(0)] * m + [Fraction(0)]
    for i in range(m):
        b = basis[i]
        if b < width and cost[b]:
            f = cost[b]
            for j in range(total + 1):
                obj[j] += f * tab[i][j]
    tab[-1] = obj
    allowed = [True] * width + [False] * m
    status = _run(tab, basis, total, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    vals = [Fraction(0)] * total
    for i in range(m):
        vals[basis[i]] = tab[i][-1]
    x = vals[:n]
    for v, j in neg_of.items():
        x[v] -= vals[j]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)
