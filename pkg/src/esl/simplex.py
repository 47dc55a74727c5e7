"""Exact linear programming over the rationals.

Two-phase primal simplex on a dense tableau of ``Fraction`` entries.
Pivoting uses Bland's rule, so the method terminates on every instance
without any tolerance knobs; optima are exact rationals.  Problem sizes in
this package are tiny (a handful of generators plus slacks), so no effort
is spent on sparsity or revised-simplex updates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class InfeasibleError(ValueError):
    """The constraint system A x = b, x >= 0 has no solution."""


class UnboundedError(ValueError):
    """The objective is unbounded below on the feasible region."""


def solve_min(
    cost: Sequence[Fraction],
    eq_matrix: Sequence[Sequence[Fraction]],
    eq_rhs: Sequence[Fraction],
) -> tuple[Fraction, list[Fraction]]:
    """Minimize cost.x subject to eq_matrix @ x = eq_rhs and x >= 0.

    Returns the optimal value and one optimal vertex, both exact.
    Raises InfeasibleError or UnboundedError accordingly.
    """
    num_rows = len(eq_matrix)
    num_cols = len(cost)
    if any(len(row) != num_cols for row in eq_matrix) or len(eq_rhs) != num_rows:
        raise ValueError("inconsistent LP dimensions")

    # Normalize rows so every right-hand side is nonnegative.
    rows = []
    rhs = []
    for row, b in zip(eq_matrix, eq_rhs):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)

    # Phase I tableau: original columns, then one artificial per row.
    tableau = [rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(num_rows)] + [rhs[i]]
               for i in range(num_rows)]
    basis = [num_cols + i for i in range(num_rows)]
    total_cols = num_cols + num_rows

    phase1_cost = [Fraction(0)] * num_cols + [Fraction(1)] * num_rows
    value = _run_simplex(tableau, basis, phase1_cost, total_cols)
    if value != 0:
        raise InfeasibleError("no feasible point")

    # Drive any artificial variables still basic (at level 0) out of the basis.
    for i, var in enumerate(basis):
        if var < num_cols:
            continue
        pivot_col = next((j for j in range(num_cols) if tableau[i][j] != 0), None)
        if pivot_col is None:
            continue  # redundant row; harmless to keep
        _pivot(tableau, basis, i, pivot_col)

    # Phase II on the original columns only.
    phase2_cost = [Fraction(v) for v in cost] + [Fraction(0)] * num_rows
    value = _run_simplex(tableau, basis, phase2_cost, num_cols)

    solution = [Fraction(0)] * num_cols
    for i, var in enumerate(basis):
        if var < num_cols:
            solution[var] = tableau[i][-1]
    return value, solution


def _run_simplex(tableau, basis, cost, eligible_cols) -> Fraction:
    """Iterate Bland-rule pivots until optimal; returns the objective value."""
    num_rows = len(tableau)
    while True:
        # Reduced costs: c_j - c_B . B^{-1} A_j, computed from the tableau.
        reduced = []
        for j in range(eligible_cols):
            r = cost[j]
            for i in range(num_rows):
                if cost[basis[i]] != 0:
                    r -= cost[basis[i]] * tableau[i][j]
            reduced.append(r)

        entering = next((j for j in range(eligible_cols) if reduced[j] < 0), None)
        if entering is None:
            value = Fraction(0)
            for i in range(num_rows):
                if cost[basis[i]] != 0:
                    value += cost[basis[i]] * tableau[i][-1]
            return value

        # Ratio test; Bland's rule breaks ties by smallest basis variable index.
        leaving = None
        best_ratio = None
        for i in range(num_rows):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leaving]
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving is None:
            raise UnboundedError("objective unbounded below")

        _pivot(tableau, basis, leaving, entering)


def _pivot(tableau, basis, row: int, col: int) -> None:
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            factor = tableau[i][col]
            tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[row])]
    basis[row] = col
