"""Exact rational linear feasibility.

Solves "find x >= 0 with A x >= b" in Fraction arithmetic by a phase-I
simplex with Bland's rule.  Exactness is the point: an infeasible
verdict from this module is a proof, and the returned point is a vertex
of the (slack-augmented) polyhedron, deterministic for a given input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["feasible_point"]

_MAX_PIVOTS = 200_000


def feasible_point(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction] | None:
    """Return x >= 0 with rows @ x >= rhs, or None if none exists."""
    m = len(rows)
    rhs = [Fraction(v) for v in rhs]
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged constraint matrix")
    n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        if any(v > 0 for v in rhs):
            return None
        return [Fraction(0)] * n

    # Normalize to rhs >= 0, tracking the sense of each row.
    mat: list[list[Fraction]] = []
    b: list[Fraction] = []
    senses: list[str] = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        if rhs[i] < 0:
            mat.append([-v for v in row])
            b.append(-rhs[i])
            senses.append("<=")
        else:
            mat.append(row)
            b.append(rhs[i])
            senses.append(">=")

    # Tableau columns: n structural, m slack/surplus, artificials, rhs.
    need_art = [i for i in range(m) if senses[i] == ">=" and b[i] > 0]
    total = n + m + len(need_art)
    tab = [[Fraction(0)] * (total + 1) for _ in range(m)]
    basis = [0] * m
    art_at = {}
    next_art = 0
    for i in range(m):
        for j in range(n):
            tab[i][j] = mat[i][j]
        tab[i][total] = b[i]
        if senses[i] == "<=":
            tab[i][n + i] = Fraction(1)
            basis[i] = n + i
        elif b[i] == 0:
            # flip the degenerate >= row so its surplus can start basic
            for j in range(n):
                tab[i][j] = -tab[i][j]
            tab[i][n + i] = Fraction(1)
            basis[i] = n + i
        else:
            tab[i][n + i] = Fraction(-1)
            col = n + m + next_art
            tab[i][col] = Fraction(1)
            basis[i] = col
            art_at[i] = col
            next_art += 1
    artificial = set(art_at.values())

    # Phase-I objective: minimize the artificial sum. cost holds the
    # reduced-cost row of "maximize -sum(artificials)" expressed in the
    # current basis; entries > 0 are improving.
    cost = [Fraction(0)] * (total + 1)
    for i in range(m):
        if basis[i] in artificial:
            for j in range(total + 1):
                cost[j] += tab[i][j]
    for col in artificial:
        cost[col] = Fraction(0)

    basic = set(basis)
    for _ in range(_MAX_PIVOTS):
        enter = None
        for j in range(total):
            if j in artificial or j in basic:
                continue
            if cost[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][total] / tab[i][enter]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise RuntimeError("phase-I objective unbounded; malformed input")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * p for a, p in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * p for a, p in zip(cost, tab[leave])]
        basic.discard(basis[leave])
        basic.add(enter)
        basis[leave] = enter
    else:
        raise RuntimeError("pivot budget exhausted")

    if cost[total] != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][total]
    return x
