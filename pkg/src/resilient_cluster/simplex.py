"""Dense-tableau simplex over exact rationals or floats, with Bland's rule.

Handles max c.x subject to A x <= b, x >= 0 with b >= 0 — the shape every LP
in this package takes once cast as a packing / bounded-coverage problem — so
the all-slack basis is feasible and no phase-1 is needed. Bland's pivoting rule
rules out cycling; in exact mode every comparison and division is rational, so
optimality is not a tolerance statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"

FLOAT_PIVOT_TOL = 1e-9


class SolverPrecisionExceeded(RuntimeError):
    """Floating-point pivoting degenerated; retry in exact arithmetic."""


@dataclass(frozen=True)
class SimplexResult:
    status: str
    x: tuple
    value: object
    duals: tuple  # y >= 0 with y.A >= c componentwise and y.b == value at optimum


def maximize(c, A, b, exact: bool = True) -> SimplexResult:
    m = len(A)
    nv = len(c)
    if exact:
        c = [Fraction(v) for v in c]
        rows = [[Fraction(v) for v in row] for row in A]
        rhs = [Fraction(v) for v in b]
        tol = 0
    else:
        c = [float(v) for v in c]
        rows = [[float(v) for v in row] for row in A]
        rhs = [float(v) for v in b]
        tol = FLOAT_PIVOT_TOL
    if any(len(row) != nv for row in rows) or len(rhs) != m:
        raise ValueError("inconsistent LP dimensions")
    if any(v < -tol for v in rhs):
        raise ValueError("rhs must be nonnegative (all-slack start)")

    width = nv + m
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    tableau = []
    for i in range(m):
        row = rows[i] + [zero] * m + [rhs[i] if rhs[i] > 0 else zero]
        row[nv + i] = one
        tableau.append(row)
    zrow = list(c) + [zero] * m
    basis = list(range(nv, nv + m))

    max_iters = 2000 + 50 * (m + nv)
    iters = 0
    while True:
        enter = -1
        for j in range(width):
            if zrow[j] > tol:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_ratio = None
        for i in range(m):
            a = tableau[i][enter]
            if a > tol:
                ratio = tableau[i][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return SimplexResult(UNBOUNDED, (), None, ())
        piv_row = tableau[leave]
        piv = piv_row[enter]
        inv = 1 / piv if exact else 1.0 / piv
        piv_row[:] = [v * inv for v in piv_row]
        for i in range(m):
            if i == leave:
                continue
            f = tableau[i][enter]
            if f:
                row = tableau[i]
                row[:] = [row[j] - f * piv_row[j] for j in range(width + 1)]
        f = zrow[enter]
        if f:
            zrow[:] = [zrow[j] - f * piv_row[j] for j in range(width)]
        basis[leave] = enter
        iters += 1
        if iters > max_iters:
            if exact:
                raise RuntimeError("simplex failed to terminate under Bland's rule")
            raise SolverPrecisionExceeded(f"no convergence after {iters} pivots")

    x = [zero] * nv
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = tableau[i][-1]
    value = sum(cv * xv for cv, xv in zip(c, x))
    duals = tuple(-zrow[nv + i] for i in range(m))
    return SimplexResult(OPTIMAL, tuple(x), value, duals)
