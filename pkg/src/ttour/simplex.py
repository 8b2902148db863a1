"""Dense tableau simplex over exact rationals with Bland's rule.

Only the form ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0`` is
supported; the slack basis is then feasible and no phase one is needed.
Both LPs in this package can be brought into that form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)


class UnboundedError(ArithmeticError):
    pass


@dataclass
class LpResult:
    x: list[Fraction]
    value: Fraction
    duals: list[Fraction]  # one per row of A, all >= 0 at optimality
    basis: list[int]  # column index per row; slacks are numbered n..n+rows-1
    pivots: int


def maximize(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]],
             b: Sequence[Fraction], max_pivots: int = 100_000) -> LpResult:
    n = len(c)
    rows = len(A)
    if any(Fraction(bi) < 0 for bi in b):
        raise ValueError("right-hand side must be nonnegative")
    width = n + rows
    # each row: coefficient dict {col: value} kept sparse, plus rhs
    tab: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for i, row in enumerate(A):
        d = {j: Fraction(a) for j, a in enumerate(row) if a}
        d[n + i] = Fraction(1)
        tab.append(d)
        rhs.append(Fraction(b[i]))
    # reduced costs  d_j = c_B B^-1 A_j - c_j ; optimal when all >= 0
    red = {j: -Fraction(cj) for j, cj in enumerate(c) if cj}
    obj = _ZERO
    basis = [n + i for i in range(rows)]

    pivots = 0
    while True:
        entering = min((j for j, v in red.items() if v < 0), default=None)
        if entering is None:
            break
        leave = None
        best = None
        for i in range(rows):
            a = tab[i].get(entering)
            if a is not None and a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedError("objective is unbounded")
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")

        prow = tab[leave]
        piv = prow[entering]
        if piv != 1:
            inv = 1 / piv
            for j in prow:
                prow[j] *= inv
            rhs[leave] *= inv
        prhs = rhs[leave]
        for i in range(rows):
            if i == leave:
                continue
            row = tab[i]
            f = row.get(entering)
            if f is None:
                continue
            for j, a in prow.items():
                v = row.get(j, _ZERO) - f * a
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
            rhs[i] -= f * prhs
        f = red.get(entering)
        if f is not None:
            for j, a in prow.items():
                v = red.get(j, _ZERO) - f * a
                if v:
                    red[j] = v
                else:
                    red.pop(j, None)
            obj -= f * prhs
        basis[leave] = entering

    x = [_ZERO] * width
    for i, j in enumerate(basis):
        x[j] = rhs[i]
    duals = [red.get(n + i, _ZERO) for i in range(rows)]
    return LpResult(x=x[:n], value=obj, duals=duals, basis=basis, pivots=pivots)
