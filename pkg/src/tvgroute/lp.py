"""Exact-rational two-phase simplex over sparse tableau rows.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  Pricing is Dantzig's rule until
degenerate pivots accumulate, after which Bland's rule is used for the rest
of the solve, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

ZERO = Fraction(0)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: Fraction | None = None
    x: dict[int, Fraction] = field(default_factory=dict)
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[dict[int, Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj: dict[int, Fraction] = {}
        self.obj_rhs = ZERO  # holds -objective
        self.pivots = 0
        self.degenerate = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        p = row[col]
        if p != 1:
            row = {k: v / p for k, v in row.items()}
            self.rows[r] = row
            self.rhs[r] = self.rhs[r] / p
        b = self.rhs[r]
        if b == 0:
            self.degenerate += 1
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(col)
            if f is None:
                continue
            for k, v in row.items():
                nv = other.get(k, ZERO) - f * v
                if nv:
                    other[k] = nv
                else:
                    other.pop(k, None)
            if b:
                self.rhs[i] -= f * b
        f = self.obj.get(col)
        if f is not None:
            for k, v in row.items():
                nv = self.obj.get(k, ZERO) - f * v
                if nv:
                    self.obj[k] = nv
                else:
                    self.obj.pop(k, None)
            self.obj_rhs -= f * b
        self.basis[r] = col
        self.pivots += 1

    def entering(self, allowed, bland: bool) -> int | None:
        best, best_val = None, ZERO
        for j, d in self.obj.items():
            if d >= 0 or j not in allowed:
                continue
            if bland:
                if best is None or j < best:
                    best = j
            elif d < best_val or (d == best_val and best is not None and j < best):
                best, best_val = j, d
        return best

    def leaving(self, col: int) -> int | None:
        best, best_ratio = None, None
        for i, row in enumerate(self.rows):
            a = row.get(col)
            if a is None or a <= 0:
                continue
            ratio = self.rhs[i] / a
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[i] < self.basis[best])
            ):
                best, best_ratio = i, ratio
        return best

    def run(self, allowed, max_pivots: int) -> str:
        bland_after = 2 * len(self.rows) + 10
        while True:
            col = self.entering(allowed, self.degenerate > bland_after)
            if col is None:
                return "optimal"
            r = self.leaving(col)
            if r is None:
                return "unbounded"
            self.pivot(r, col)
            if self.pivots > max_pivots:
                raise RuntimeError("simplex pivot limit exceeded")


def solve(
    n_vars: int,
    cost: dict[int, Fraction],
    rows: list[dict[int, Fraction]],
    rhs: list[Fraction],
    max_pivots: int = 1_000_000,
) -> LPResult:
    """Minimize ``sum(cost[j] x_j)`` subject to equality rows and ``x >= 0``.

    ``rows[i]`` maps variable index to coefficient; variables are ``0..n_vars-1``.
    """
    t_rows, t_rhs = [], []
    for row, b in zip(rows, rhs):
        row = {j: Fraction(v) for j, v in row.items() if v}
        b = Fraction(b)
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        if not row:
            if b != 0:
                return LPResult("infeasible")
            continue
        t_rows.append(row)
        t_rhs.append(b)

    m = len(t_rows)
    art0 = n_vars
    for i, row in enumerate(t_rows):
        row[art0 + i] = Fraction(1)
    tab = _Tableau(t_rows, t_rhs, [art0 + i for i in range(m)])

    # phase 1: minimize the sum of artificials
    for i, row in enumerate(t_rows):
        for j, v in row.items():
            if j < art0:
                tab.obj[j] = tab.obj.get(j, ZERO) - v
        tab.obj_rhs -= t_rhs[i]
    tab.obj = {j: v for j, v in tab.obj.items() if v}
    structural = range(n_vars)
    status = tab.run(structural, max_pivots)
    assert status == "optimal"
    if -tab.obj_rhs > 0:
        return LPResult("infeasible", pivots=tab.pivots)

    # drive remaining artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= art0:
            col = next((j for j in sorted(tab.rows[r]) if j < art0), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    for row in tab.rows:
        for j in [j for j in row if j >= art0]:
            del row[j]

    # phase 2
    cost = {j: Fraction(v) for j, v in cost.items() if v}
    tab.obj = dict(cost)
    tab.obj_rhs = ZERO
    for i, bvar in enumerate(tab.basis):
        cb = cost.get(bvar)
        if not cb:
            continue
        for j, v in tab.rows[i].items():
            nv = tab.obj.get(j, ZERO) - cb * v
            if nv:
                tab.obj[j] = nv
            else:
                tab.obj.pop(j, None)
        tab.obj_rhs -= cb * tab.rhs[i]
    tab.degenerate = 0
    status = tab.run(structural, max_pivots)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    x = {b: v for b, v in zip(tab.basis, tab.rhs) if v}
    return LPResult("optimal", -tab.obj_rhs, x, tab.pivots)
