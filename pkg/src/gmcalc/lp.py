"""Exact rational feasibility for cone membership (phase-one simplex, Bland's rule)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactlin import Vec


def in_cone(x: Vec, generators: Sequence[Vec]) -> bool:
    """Is x a nonnegative rational combination of the generators?  Exact."""
    n = len(x)
    m = len(generators)
    if all(v == 0 for v in x):
        return True
    if m == 0:
        return False
    # rows: sum_j c_j g_j[i] + a_i = x[i], with rows flipped so x[i] >= 0
    rows = []
    rhs = []
    for i in range(n):
        srow = [g[i] for g in generators]
        b = x[i]
        if b < 0:
            srow = [-v for v in srow]
            b = -b
        rows.append(srow)
        rhs.append(b)
    # tableau: columns = c_1..c_m, a_1..a_n | rhs; objective = sum of artificials
    width = m + n
    tableau = []
    for i in range(n):
        row = list(rows[i]) + [Fraction(1) if j == i else Fraction(0) for j in range(n)] + [rhs[i]]
        tableau.append(row)
    basis = [m + i for i in range(n)]
    # phase-one reduced costs: structural columns get -sum of their constraint
    # coefficients, the basic artificial columns must stay at zero
    obj = [Fraction(0)] * (width + 1)
    for i in range(n):
        for j in range(m):
            obj[j] -= tableau[i][j]
        obj[width] -= tableau[i][width]

    def pivot(pr: int, pc: int) -> None:
        p = tableau[pr][pc]
        tableau[pr] = [v / p for v in tableau[pr]]
        for r in range(n):
            if r != pr and tableau[r][pc] != 0:
                f = tableau[r][pc]
                tableau[r] = [a - f * b for a, b in zip(tableau[r], tableau[pr])]
        if obj[pc] != 0:
            f = obj[pc]
            for j in range(width + 1):
                obj[j] -= f * tableau[pr][j]
        basis[pr] = pc

    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise RuntimeError("simplex failed to terminate")
        pc = next((j for j in range(width) if obj[j] < 0), None)
        if pc is None:
            break
        ratios = [
            (tableau[r][width] / tableau[r][pc], basis[r], r)
            for r in range(n)
            if tableau[r][pc] > 0
        ]
        if not ratios:
            break  # unbounded direction cannot happen in phase one
        _, _, pr = min(ratios, key=lambda t: (t[0], t[1]))
        pivot(pr, pc)
    return -obj[width] == 0


def in_cone_nonzero(x: Vec, generators: Sequence[Vec]) -> bool:
    """Is x a nonzero nonnegative combination (x itself nonzero and in the cone)?"""
    if all(v == 0 for v in x):
        return False
    return in_cone(x, generators)
