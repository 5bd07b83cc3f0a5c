"""Exact linear programming over Fraction: two-phase simplex, Bland's rule.

Solves   min c.x  s.t.  A x = b,  x >= 0   with rational data and no rounding.
Bland's pivoting rule (smallest eligible index enters, smallest basic index
leaves on ties) guarantees termination on degenerate instances.  Sized for
desk scale: tens of rows, a couple hundred columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...]
    value: Optional[Fraction]


def _run_simplex(tab: list[list[Fraction]], basis: list[int], costs: list[Fraction]) -> None:
    """Pivot ``tab`` (rows = constraints, last column = rhs) to optimality in place."""
    nrows = len(tab)
    ncols = len(tab[0]) - 1
    while True:
        # Reduced costs r_j = c_j - c_B . column_j, recomputed per iteration;
        # at this scale that is as cheap as maintaining a cost row.
        entering = -1
        for j in range(ncols):
            if j in basis:
                continue
            r = costs[j] - sum(costs[basis[i]] * tab[i][j] for i in range(nrows))
            if r < 0:
                entering = j
                break
        if entering < 0:
            return
        leaving = -1
        best: Optional[Fraction] = None
        for i in range(nrows):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving < 0:
            raise _Unbounded()
        _pivot(tab, basis, leaving, entering)


class _Unbounded(Exception):
    pass


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    inv = 1 / tab[row][col]
    tab[row] = [x * inv for x in tab[row]]
    prow = tab[row]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
    basis[row] = col


def solve_lp(
    objective: Sequence[Fraction],
    eq_lhs: Sequence[Sequence[Fraction]],
    eq_rhs: Sequence[Fraction],
) -> LPResult:
    """Minimize objective.x subject to eq_lhs x = eq_rhs, x >= 0, exactly."""
    nvars = len(objective)
    rows = [
        [Fraction(v) for v in row] + [Fraction(b)]
        for row, b in zip(eq_lhs, eq_rhs)
    ]
    for row in rows:
        if len(row) - 1 != nvars:
            raise ValueError(f"constraint width {len(row) - 1} does not match {nvars} variables")
        if row[-1] < 0:
            row[:] = [-x for x in row]

    nrows = len(rows)
    # Phase 1: artificial variable per row, identity basis.
    tab = [row[:-1] + [Fraction(1) if i == j else Fraction(0) for j in range(nrows)] + [row[-1]]
           for i, row in enumerate(rows)]
    basis = [nvars + i for i in range(nrows)]
    phase1_costs = [Fraction(0)] * nvars + [Fraction(1)] * nrows
    try:
        _run_simplex(tab, basis, phase1_costs)
    except _Unbounded:  # phase-1 objective is bounded below by 0
        raise AssertionError("phase-1 simplex cannot be unbounded")
    infeasibility = sum(phase1_costs[basis[i]] * tab[i][-1] for i in range(nrows))
    if infeasibility != 0:
        return LPResult(INFEASIBLE, (), None)

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep: list[int] = []
    for i in range(len(tab)):
        if basis[i] < nvars:
            keep.append(i)
            continue
        col = next((j for j in range(nvars) if tab[i][j] != 0), None)
        if col is None:
            continue  # redundant constraint
        _pivot(tab, basis, i, col)
        keep.append(i)
    tab = [tab[i][:nvars] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    phase2_costs = [Fraction(c) for c in objective]
    try:
        _run_simplex(tab, basis, phase2_costs)
    except _Unbounded:
        return LPResult(UNBOUNDED, (), None)

    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    value = sum(phase2_costs[j] * x[j] for j in range(nvars))
    return LPResult(OPTIMAL, tuple(x), value)
