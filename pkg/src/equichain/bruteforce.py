"""Slow reference deciders used to cross-check the production oracles.

Neither function shares code with :mod:`equichain.oracles` or
:mod:`equichain.lp`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .exact import RationalVector

Row = tuple[tuple[Fraction, ...], Fraction]  # coefficients·x >= rhs


def _normalize(coeffs: Sequence[Fraction], rhs: Fraction) -> Row:
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        scale = abs(rhs) or Fraction(1)
    return tuple(c / scale for c in coeffs), rhs / scale


def fourier_motzkin_cone_contains(gens: Sequence[RationalVector], v: RationalVector) -> bool:
    """Decide ``v ∈ cone(gens)`` by projecting ``{λ >= 0 : Σ λ_j g_j = v}`` onto nothing.

    Equalities are used to substitute variables away first; the remaining
    inequalities are eliminated one variable at a time.
    """
    gens = list(gens)
    k = len(gens)
    dim = max([v.width()] + [g.width() for g in gens])
    eqs = [([Fraction(g[i]) for g in gens], Fraction(v[i])) for i in range(1, dim + 1)]
    ineqs: list[Row] = [(tuple(Fraction(int(j == t)) for j in range(k)), Fraction(0)) for t in range(k)]

    # substitute through the equalities
    while eqs:
        coeffs, rhs = eqs.pop()
        t = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if t is None:
            if rhs != 0:
                return False
            continue
        a = coeffs[t]
        # x_t = (rhs - Σ_{j≠t} c_j x_j) / a
        def subst(row_c, row_r):
            f = row_c[t] / a
            new_c = [c - f * cj for c, cj in zip(row_c, coeffs)]
            new_c[t] = Fraction(0)
            return new_c, row_r - f * rhs
        eqs = [subst(c, r) for c, r in eqs]
        ineqs = [tuple_row(*subst(list(c), r)) for c, r in ineqs]

    rows = {_normalize(c, r) for c, r in ineqs}
    for t in range(k):
        pos = [r for r in rows if r[0][t] > 0]
        neg = [r for r in rows if r[0][t] < 0]
        rest = {r for r in rows if r[0][t] == 0}
        for (pc, pr), (nc, nr) in product(pos, neg):
            fp, fn = -nc[t], pc[t]
            c = tuple(fp * a + fn * b for a, b in zip(pc, nc))
            rest.add(_normalize(c, fp * pr + fn * nr))
        rows = rest
    # all variables gone: every row reads 0 >= rhs
    return all(r <= 0 for _, r in rows)


def tuple_row(coeffs, rhs) -> Row:
    return tuple(coeffs), rhs


def box_monoid_contains(gens: Sequence[RationalVector], v: RationalVector) -> bool:
    """Decide ``v ∈ Mon(gens)`` by trying every multiplicity vector in the box."""
    gens = [g for g in gens if not g.is_zero()]
    if v.is_zero():
        return True
    dim = max([v.width()] + [g.width() for g in gens])
    target = np.array([int(x) for x in v.dense(dim)], dtype=np.int64)
    G = np.array([[int(x) for x in g.dense(dim)] for g in gens], dtype=np.int64).reshape(len(gens), dim)
    bounds = []
    for row in G:
        nz = row > 0
        bounds.append(int(np.min(target[nz] // row[nz])) if nz.any() else 0)
    if not gens:
        return False
    grids = np.meshgrid(*[np.arange(b + 1) for b in bounds], indexing="ij")
    mults = np.stack([g.ravel() for g in grids], axis=1)
    sums = mults @ G
    return bool(np.any(np.all(sums == target, axis=1)))
