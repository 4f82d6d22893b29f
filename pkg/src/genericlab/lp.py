"""Exact rational simplex for equality-form linear programs.

    minimise c.x  subject to  A x = b,  x >= 0

Two phases with Bland's smallest-index rule, so the method terminates on
degenerate problems.  All arithmetic is on ``fractions.Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple = ()
    basis: tuple = ()
    pivots: int = 0
    extra: dict = field(default_factory=dict)


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows          # list of dict col -> Fraction (sparse)
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, col):
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            inv = 1 / piv
            for k in row:
                row[k] *= inv
            self.rhs[r] *= inv
        items = list(row.items())
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(col)
            if not f:
                continue
            for k, v in items:
                nv = other.get(k, 0) - f * v
                if nv:
                    other[k] = nv
                else:
                    other.pop(k, None)
            self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost, ncols):
        """Reduced cost per column for the current basis (dense list)."""
        red = [Fraction(cost.get(j, 0)) for j in range(ncols)]
        for r, bcol in enumerate(self.basis):
            cb = cost.get(bcol, 0)
            if not cb:
                continue
            for k, v in self.rows[r].items():
                red[k] -= cb * v
        return red

    def objective(self, cost):
        return sum((Fraction(cost.get(b, 0)) * self.rhs[r] for r, b in enumerate(self.basis)), Fraction(0))

    def run(self, cost, ncols, allowed):
        """Bland's rule iterations; returns OPTIMAL or UNBOUNDED."""
        while True:
            red = self.reduced_costs(cost, ncols)
            enter = next((j for j in range(ncols) if j in allowed and red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for r, row in enumerate(self.rows):
                a = row.get(enter)
                if a is None or a <= 0:
                    continue
                ratio = self.rhs[r] / a
                key = (ratio, self.basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def solve_lp(c, A, b):
    """Solve ``min c.x, A x = b, x >= 0`` exactly.

    ``A`` is a dense list of rows or a list of sparse ``{col: coeff}`` dicts.
    """
    n = len(c)
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        d = {j: Fraction(v) for j, v in (row.items() if isinstance(row, dict) else enumerate(row)) if v}
        bi = Fraction(bi)
        if bi < 0:
            d = {j: -v for j, v in d.items()}
            bi = -bi
        rows.append(d)
        rhs.append(bi)
    m = len(rows)
    # artificial variable for row r is column n + r
    for r in range(m):
        rows[r][n + r] = Fraction(1)
    tab = _Tableau(rows, rhs, [n + r for r in range(m)])
    phase1 = {n + r: 1 for r in range(m)}
    tab.run(phase1, n + m, set(range(n + m)))
    if tab.objective(phase1) != 0:
        return LPResult(INFEASIBLE, pivots=tab.pivots)
    # drive remaining artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= n:
            col = next((k for k in sorted(tab.rows[r]) if k < n), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    for row in tab.rows:
        for k in [k for k in row if k >= n]:
            del row[k]
    cost = {j: Fraction(v) for j, v in enumerate(c) if v}
    status = tab.run(cost, n, set(range(n)))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for r, bcol in enumerate(tab.basis):
        x[bcol] = tab.rhs[r]
    return LPResult(OPTIMAL, tab.objective(cost), tuple(x), tuple(tab.basis), tab.pivots)


def _solve_square(M, b):
    """Gauss-Jordan on a square Fraction system; ``None`` if singular."""
    n = len(M)
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _rank_rows(A, b):
    """Indices of a maximal independent set of rows; ``None`` if inconsistent."""
    ncols = len(A[0]) if A else 0
    basis = []      # reduced rows kept so far, with their pivot column
    keep = []
    for i, (row, bi) in enumerate(zip(A, b)):
        v = list(row) + [bi]
        for pivcol, brow in basis:
            if v[pivcol] != 0:
                f = v[pivcol] / brow[pivcol]
                v = [x - f * y for x, y in zip(v, brow)]
        pc = next((j for j in range(ncols) if v[j] != 0), None)
        if pc is None:
            if v[ncols] != 0:
                return None
            continue
        basis.append((pc, v))
        keep.append(i)
    return keep
