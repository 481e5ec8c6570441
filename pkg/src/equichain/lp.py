"""Exact feasibility of ``A x = b, x >= 0`` over the rationals.

Phase-one simplex on an integer tableau (Edmonds' integer-preserving pivoting:
every entry is an integer over one common denominator, divisions are exact),
Bland's rule for termination. Infeasible systems come back with a Farkas
vector ``z`` satisfying ``z·A_j >= 0`` for every column and ``z·b < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    x: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    pivots: int = 0


def solve_nonneg(columns: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Feasibility:
    """Decide whether ``b`` is a nonnegative combination of ``columns``.

    ``columns[j][i]`` is entry ``i`` of column ``j``; every column has ``len(b)`` rows.
    """
    r = len(b)
    k = len(columns)
    if r == 0:
        return Feasibility(True, tuple(Fraction(0) for _ in range(k)), None)
    if any(len(col) != r for col in columns):
        raise ValueError("column length does not match right-hand side")

    # integer rows, right-hand side made nonnegative; scale[i] maps back to the input row
    scale = []
    rows = []
    for i in range(r):
        entries = [Fraction(col[i]) for col in columns] + [Fraction(b[i])]
        den = lcm(*(q.denominator for q in entries))
        s = den if entries[-1] >= 0 else -den
        scale.append(s)
        rows.append([q.numerator * (s // q.denominator) for q in entries])

    width = k + r  # structural columns then artificials
    T = []
    for i in range(r):
        art = [0] * r
        art[i] = 1
        T.append(rows[i][:k] + art + [rows[i][k]])
    obj = [-sum(T[i][j] for i in range(r)) for j in range(k)] + [0] * r + [-sum(T[i][-1] for i in range(r))]
    T.append(obj)
    basis = [k + i for i in range(r)]
    d = 1
    pivots = 0

    while True:
        z = T[r]
        entering = next((j for j in range(width) if z[j] < 0), None)
        if entering is None:
            break
        leave = None
        for i in range(r):
            a = T[i][entering]
            if a <= 0:
                continue
            if leave is None:
                leave = i
                continue
            # ratio T[i][-1]/a vs T[leave][-1]/T[leave][entering]; ties -> smaller basic index
            lhs = T[i][-1] * T[leave][entering]
            rhs = T[leave][-1] * a
            if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                leave = i
        if leave is None:  # pragma: no cover - phase one is bounded below by 0
            raise RuntimeError("phase-one objective unbounded")
        p = T[leave][entering]
        prow = T[leave]
        for i in range(r + 1):
            if i == leave:
                continue
            row = T[i]
            f = row[entering]
            if f == 0:
                T[i] = [(p * v) // d for v in row]
            else:
                T[i] = [(p * v - f * w) // d for v, w in zip(row, prow)]
        d = p
        basis[leave] = entering
        pivots += 1

    value = Fraction(-T[r][-1], d)
    if value == 0:
        x = [Fraction(0)] * k
        for i, j in enumerate(basis):
            if j < k:
                x[j] = Fraction(T[i][-1], d)
        return Feasibility(True, tuple(x), None, pivots)

    # duals of the phase-one problem: y_i = 1 - reduced cost of artificial i
    y = [1 - Fraction(T[r][k + i], d) for i in range(r)]
    farkas = tuple(-y[i] * scale[i] for i in range(r))
    return Feasibility(False, None, farkas, pivots)
