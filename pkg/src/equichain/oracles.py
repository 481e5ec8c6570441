"""Membership, equality and redundancy for the four closure operations.

Every decision comes with a certificate that can be replayed exactly:

* cone: nonnegative coefficients, or a Farkas normal separating the query;
* monoid: nonnegative integer multiplicities, or the exhausted search box;
* monomial ideal: a dividing generator and the quotient, or per-generator
  obstructions;
* identity: the element itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import AmbientError, DimensionError, Element, Monomial, RationalVector, format_fraction
from .lp import solve_nonneg
from .maps import MapFamily, PiMap


class ClosureKind(str, Enum):
    IDENTITY = "identity"
    CONE = "cone"
    MONOID = "monoid"
    IDEAL = "ideal"

    @classmethod
    def parse(cls, text: str | ClosureKind) -> ClosureKind:
        if isinstance(text, ClosureKind):
            return text
        t = text.strip().lower()
        aliases = {"monomial-ideal": "ideal", "monomialideal": "ideal", "id": "identity"}
        try:
            return cls(aliases.get(t, t))
        except ValueError:
            raise ValueError(f"unknown closure kind {text!r}") from None


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class ConeCombination:
    terms: tuple[tuple[RationalVector, Fraction], ...]

    def replay(self) -> RationalVector:
        out = RationalVector()
        for g, lam in self.terms:
            out = out + g.scale(lam)
        return out

    def verify(self, gens: Iterable[RationalVector], v: RationalVector) -> bool:
        pool = set(gens)
        return all(lam >= 0 and g in pool for g, lam in self.terms) and self.replay() == v

    def to_json(self):
        return {"type": "cone-combination",
                "terms": [{"generator": str(g), "lambda": format_fraction(lam)} for g, lam in self.terms]}


@dataclass(frozen=True)
class FarkasNormal:
    """``normal·g >= 0`` for every generator but ``normal·v < 0``."""

    normal: RationalVector

    def verify(self, gens: Iterable[RationalVector], v: RationalVector) -> bool:
        return all(self.normal.dot(g) >= 0 for g in gens) and self.normal.dot(v) < 0

    def to_json(self):
        return {"type": "farkas", "normal": str(self.normal)}


@dataclass(frozen=True)
class MonoidCombination:
    terms: tuple[tuple[RationalVector, int], ...]

    def replay(self) -> RationalVector:
        out = RationalVector()
        for g, m in self.terms:
            out = out + g.scale(m)
        return out

    def verify(self, gens: Iterable[RationalVector], v: RationalVector) -> bool:
        pool = set(gens)
        return all(m >= 0 and g in pool for g, m in self.terms) and self.replay() == v

    def to_json(self):
        return {"type": "monoid-combination",
                "terms": [{"generator": str(g), "multiplicity": m} for g, m in self.terms]}


@dataclass(frozen=True)
class ExhaustedSearch:
    """Non-membership in a monoid: every multiplicity vector inside ``box`` fails."""

    candidates: tuple[RationalVector, ...]
    box: tuple[int, ...]

    def verify(self, gens: Iterable[RationalVector], v: RationalVector) -> bool:
        pool = set(self.candidates)
        supp = v.support()
        for g in gens:
            if g.is_zero() or g in pool:
                continue
            if g.support() <= supp and _box(g, v) > 0:
                return False  # a usable generator was left out of the search
        # independent re-check by breadth-first search over reachable partial sums
        return not _monoid_reachable(self.candidates, v)

    def to_json(self):
        return {"type": "exhausted-search", "candidates": [str(g) for g in self.candidates], "box": list(self.box)}


@dataclass(frozen=True)
class Divisor:
    divisor: Monomial
    quotient: Monomial

    def replay(self) -> Monomial:
        return self.divisor * self.quotient

    def verify(self, gens: Iterable[Monomial], u: Monomial) -> bool:
        return self.divisor in set(gens) and self.replay() == u

    def to_json(self):
        return {"type": "divisor", "divisor": str(self.divisor), "quotient": str(self.quotient)}


@dataclass(frozen=True)
class NoDivisor:
    """For each generator a variable whose exponent exceeds the one in the query."""

    obstructions: tuple[tuple[Monomial, tuple[int, int]], ...]

    def verify(self, gens: Iterable[Monomial], u: Monomial) -> bool:
        d = u.as_dict()
        blocked = {g: key for g, key in self.obstructions}
        return all(g in blocked and g.as_dict().get(blocked[g], 0) > d.get(blocked[g], 0) for g in gens)

    def to_json(self):
        return {"type": "no-divisor",
                "obstructions": [{"generator": str(g), "variable": f"x[{i},{j}]"} for g, (i, j) in self.obstructions]}


@dataclass(frozen=True)
class Literal:
    element: Element
    present: bool

    def verify(self, gens, x) -> bool:
        return (x in set(gens)) == self.present and x == self.element

    def to_json(self):
        return {"type": "literal", "element": str(self.element), "present": self.present}


@dataclass(frozen=True)
class Membership:
    member: bool
    certificate: object = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.member

    def __iter__(self):
        yield self.member
        yield self.certificate


# -- cones --------------------------------------------------------------------


def _check_orthant(elements: Iterable[RationalVector]) -> None:
    for x in elements:
        if not isinstance(x, RationalVector):
            raise AmbientError(f"expected a vector, got {x!r}")
        if not x.is_nonneg():
            raise AmbientError(f"{x} leaves the nonnegative orthant")


def _is_multiple(g: RationalVector, v: RationalVector) -> bool:
    if len(g.entries) != len(v.entries):
        return False
    (_, g0), (_, v0) = g.entries[0], v.entries[0]
    return all(i == j and p * v0 == q * g0 for (i, p), (j, q) in zip(g.entries, v.entries))


def cone_contains(gens: Iterable[RationalVector], v: RationalVector, *, orthant: bool = True) -> Membership:
    """Is ``v`` a nonnegative combination of ``gens``?

    In the nonnegative orthant only generators with support inside ``supp(v)``
    can take part, which shrinks the linear program to ``|supp(v)|`` rows.
    ``orthant=False`` drops that restriction and admits arbitrary signs.
    """
    gens = list(dict.fromkeys(gens))
    if orthant:
        _check_orthant(gens + [v])
    if v.is_zero():
        return Membership(True, ConeCombination(()))
    if v in gens:
        return Membership(True, ConeCombination(((v, Fraction(1)),)))

    if orthant:
        supp = v.support()
        cands = [g for g in gens if not g.is_zero() and g.support() <= supp]
        rows = sorted(supp)
    else:
        cands = [g for g in gens if not g.is_zero()]
        rows = sorted(v.support().union(*(g.support() for g in cands)))

    for g in cands:
        # positive multiple of a single generator
        if _is_multiple(g, v):
            t = v.entries[0][1] / g.entries[0][1]
            if t > 0:
                return Membership(True, ConeCombination(((g, t),)))

    cols = [[g[i] for i in rows] for g in cands]
    res = solve_nonneg(cols, [v[i] for i in rows])
    if res.feasible:
        terms = tuple((g, lam) for g, lam in zip(cands, res.x) if lam != 0)
        return Membership(True, ConeCombination(terms))

    normal = dict(zip(rows, res.farkas))
    if orthant:
        # lift the normal: coordinates outside supp(v) get a weight large enough
        # that every discarded generator stays on the nonnegative side
        big = Fraction(0)
        used = set(cands)
        for g in gens:
            if g in used or g.is_zero():
                continue
            inside = sum((q * normal[i] for i, q in g.entries if i in normal), Fraction(0))
            outside = sum((q for i, q in g.entries if i not in normal), Fraction(0))
            big = max(big, -inside / outside)
        if big > 0:
            for g in gens:
                for i, _ in g.entries:
                    if i not in normal:
                        normal[i] = big
    return Membership(False, FarkasNormal(RationalVector.from_dict(normal)))


# -- monoids ------------------------------------------------------------------


def _check_integral(elements: Iterable[RationalVector]) -> None:
    _check_orthant(elements)
    for x in elements:
        if not x.is_integral():
            raise AmbientError(f"{x} is not an integer vector")


def _box(g: RationalVector, v: RationalVector) -> int:
    return min(int(v[i] // q) for i, q in g.entries)


def _monoid_reachable(cands: Sequence[RationalVector], v: RationalVector) -> bool:
    target = v.dense()
    reach = {tuple([0] * len(target))}
    frontier = list(reach)
    while frontier:
        nxt = []
        for s in frontier:
            for g in cands:
                t = tuple(a + b for a, b in zip(s, g.dense(len(target))))
                if all(a <= b for a, b in zip(t, target)) and t not in reach:
                    reach.add(t)
                    nxt.append(t)
        frontier = nxt
    return tuple(target) in reach


def monoid_contains(gens: Iterable[RationalVector], v: RationalVector) -> Membership:
    """Is ``v`` a nonnegative integer combination of ``gens``?

    Multiplicity of ``g`` is bounded by ``min_j floor(v_j / g_j)`` over ``supp(g)``,
    so a depth-first search over that box is complete.
    """
    gens = list(dict.fromkeys(gens))
    _check_integral(gens + [v])
    if v.is_zero():
        return Membership(True, MonoidCombination(()))
    supp = v.support()
    cands = [g for g in gens if not g.is_zero() and g.support() <= supp and _box(g, v) > 0]
    # big generators first: they have the smallest boxes
    cands.sort(key=lambda g: (-sum(q for _, q in g.entries), g.sort_key()), reverse=False)
    box = tuple(_box(g, v) for g in cands)
    rows = sorted(supp)
    target = tuple(int(v[i]) for i in rows)
    dense = [tuple(int(g[i]) for i in rows) for g in cands]

    failed: set[tuple[int, tuple[int, ...]]] = set()
    mult = [0] * len(cands)

    def search(k: int, rest: tuple[int, ...]) -> bool:
        if not any(rest):
            return True
        if k == len(cands) or (k, rest) in failed:
            return False
        g = dense[k]
        top = min(r // a for r, a in zip(rest, g) if a)
        for m in range(top, -1, -1):
            nxt = tuple(r - m * a for r, a in zip(rest, g))
            mult[k] = m
            if search(k + 1, nxt):
                return True
        mult[k] = 0
        failed.add((k, rest))
        return False

    if search(0, target):
        terms = tuple((g, m) for g, m in zip(cands, mult) if m)
        return Membership(True, MonoidCombination(terms))
    return Membership(False, ExhaustedSearch(tuple(cands), box))


# -- monomial ideals ----------------------------------------------------------


def _check_rows(gens: Sequence[Monomial], u: Monomial) -> None:
    for g in list(gens) + [u]:
        if not isinstance(g, Monomial):
            raise AmbientError(f"expected a monomial, got {g!r}")
        if g.rows != u.rows:
            raise DimensionError(f"row counts differ: {g} has {g.rows}, {u} has {u.rows}")


def ideal_contains(gens: Iterable[Monomial], u: Monomial) -> Membership:
    gens = list(dict.fromkeys(gens))
    _check_rows(gens, u)
    for g in gens:
        if g.divides(u):
            return Membership(True, Divisor(g, u.quotient(g)))
    d = u.as_dict()
    obstructions = []
    for g in gens:
        key = next(k for k, e in g.exponents if e > d.get(k, 0))
        obstructions.append((g, key))
    return Membership(False, NoDivisor(tuple(obstructions)))


# -- dispatch -----------------------------------------------------------------


def closure_contains(kind: ClosureKind | str, gens: Iterable[Element], x: Element) -> Membership:
    kind = ClosureKind.parse(kind)
    gens = list(gens)
    if kind is ClosureKind.IDENTITY:
        present = x in set(gens)
        return Membership(present, Literal(x, present))
    if kind is ClosureKind.IDEAL:
        if not isinstance(x, Monomial):
            raise AmbientError(f"ideal closure needs monomials, got {x!r}")
        return ideal_contains(gens, x)
    if not isinstance(x, RationalVector):
        raise AmbientError(f"{kind.value} closure needs vectors, got {x!r}")
    if kind is ClosureKind.CONE:
        return cone_contains(gens, x)
    return monoid_contains(gens, x)


def closure_equal(kind: ClosureKind | str, a: Iterable[Element], b: Iterable[Element]) -> bool:
    """Equality of the closures of two finite sets, by mutual generator membership."""
    a, b = list(a), list(b)
    return all(closure_contains(kind, b, x) for x in a) and all(closure_contains(kind, a, y) for y in b)


def reduce_generators(kind: ClosureKind | str, gens: Iterable[Element]) -> list[Element]:
    """Greedy left-to-right removal of generators lying in the closure of the rest."""
    kind = ClosureKind.parse(kind)
    keep = list(dict.fromkeys(gens))
    if kind is ClosureKind.IDENTITY:
        return keep
    i = 0
    while i < len(keep):
        g = keep[i]
        rest = keep[:i] + keep[i + 1:]
        if kind is not ClosureKind.IDEAL:
            if g.is_zero():
                del keep[i]
                continue
            # in the orthant only generators inside supp(g) can contribute
            supp = g.support()
            rest = [h for h in rest if h.support() <= supp]
        if closure_contains(kind, rest, g):
            del keep[i]
        else:
            i += 1
    return keep


# -- Inc-divisibility (Higman order on monomials) ------------------------------


def inc_divides(u: Monomial, w: Monomial) -> tuple[bool, PiMap | None]:
    """Is there an increasing ``pi: [width u] -> [width w]`` with ``pi(u) | w``?

    Columns are matched left to right; a column of ``u`` may only land on a
    column of ``w`` that dominates it, and enough room must remain to its right.
    """
    if u.rows != w.rows:
        raise DimensionError(f"row counts differ: {u.rows} vs {w.rows}")
    m, n = u.width(), w.width()
    if m == 0:
        return True, None
    if m > n:
        return False, None
    ucols = [u.column(j) for j in range(1, m + 1)]
    wcols = [w.column(j) for j in range(1, n + 1)]
    image = [0] * m

    def extend(j: int, lo: int) -> bool:
        if j == m:
            return True
        for t in range(lo, n - (m - 1 - j) + 1):
            if all(x <= y for x, y in zip(ucols[j], wcols[t - 1])):
                image[j] = t
                if extend(j + 1, t + 1):
                    return True
        return False

    if extend(0, 1):
        return True, PiMap(MapFamily.INC, m, n, tuple(image))
    return False, None


def inc_reduce(monomials: Iterable[Monomial]) -> list[Monomial]:
    """Minimal elements under Inc-divisibility, in input order."""
    items = list(dict.fromkeys(monomials))
    keep = []
    for idx, u in enumerate(items):
        if not any(j != idx and inc_divides(v, u)[0] for j, v in enumerate(items)):
            keep.append(u)
    return keep
