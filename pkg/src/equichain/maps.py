"""The map families Sym and Inc and their action on vectors and monomials.

``Inc_{m,n}`` is represented by its restrictions to ``[m]``: the strictly
increasing maps ``[m] -> [n]``. ``Sym_{m,n}`` is the set of all injections
``[m] -> [n]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, permutations
from math import comb, perm
from typing import Iterable, Iterator, Sequence

from .exact import DimensionError, Element, Monomial, RationalVector, canonical


class MapFamily(str, Enum):
    SYM = "sym"
    INC = "inc"

    @classmethod
    def parse(cls, text: str | MapFamily) -> MapFamily:
        if isinstance(text, MapFamily):
            return text
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown map family {text!r}; expected 'sym' or 'inc'") from None


@dataclass(frozen=True)
class PiMap:
    family: MapFamily
    m: int
    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.m or self.m > self.n:
            raise DimensionError(f"{self.family.value} map [{self.m}] -> [{self.n}] with image {self.image}")
        if len(set(self.image)) != self.m or any(not 1 <= k <= self.n for k in self.image):
            raise ValueError(f"image {self.image} is not an injection into [{self.n}]")
        if self.family is MapFamily.INC and any(a >= b for a, b in zip(self.image, self.image[1:])):
            raise ValueError(f"image {self.image} is not strictly increasing")

    @classmethod
    def identity(cls, family: MapFamily, n: int) -> PiMap:
        return cls(MapFamily.parse(family), n, n, tuple(range(1, n + 1)))

    def __call__(self, x: Element) -> Element:
        if isinstance(x, Monomial):
            return apply_to_monomial(self, x)
        return apply_to_vector(self, x)

    def then(self, other: PiMap) -> PiMap:
        """The composite ``other ∘ self``."""
        if other.m != self.n:
            raise DimensionError(f"cannot compose [{self.m}]->[{self.n}] with [{other.m}]->[{other.n}]")
        fam = MapFamily.INC if self.family is other.family is MapFamily.INC else MapFamily.SYM
        return PiMap(fam, self.m, other.n, tuple(other.image[k - 1] for k in self.image))

    def __str__(self) -> str:
        return f"{self.family.value}[{','.join(map(str, self.image))}]"


def enumerate_maps(family: MapFamily | str, m: int, n: int) -> list[PiMap]:
    """All maps of ``family`` from ``[m]`` to ``[n]`` in lexicographic order of images."""
    family = MapFamily.parse(family)
    if not 1 <= m <= n:
        raise DimensionError(f"need 1 <= m <= n, got m={m}, n={n}")
    gen = combinations if family is MapFamily.INC else permutations
    return [PiMap(family, m, n, img) for img in gen(range(1, n + 1), m)]


def count_maps(family: MapFamily | str, m: int, n: int) -> int:
    return comb(n, m) if MapFamily.parse(family) is MapFamily.INC else perm(n, m)


def apply_to_vector(pi: PiMap, v: RationalVector) -> RationalVector:
    if v.width() > pi.m:
        raise DimensionError(f"vector of width {v.width()} is not in the domain of {pi}")
    return RationalVector.from_dict({pi.image[k - 1]: q for k, q in v.entries})


def apply_to_monomial(pi: PiMap, u: Monomial) -> Monomial:
    if u.width() > pi.m:
        raise DimensionError(f"monomial of width {u.width()} is not in the domain of {pi}")
    return Monomial.from_dict({(i, pi.image[j - 1]): e for (i, j), e in u.exponents}, u.rows)


def _columns(x: Element) -> list[tuple[int, object]]:
    """(position, value) pairs of the support; the value for a monomial is its exponent column."""
    if isinstance(x, Monomial):
        return [(j, x.column(j)) for j in sorted(x.support())]
    return list(x.entries)


def _rebuild(template: Element, placed: Iterable[tuple[int, object]]) -> Element:
    if isinstance(template, Monomial):
        acc = {}
        for j, col in placed:
            for i, e in enumerate(col, 1):
                if e:
                    acc[(i, j)] = e
        return Monomial.from_dict(acc, template.rows)
    return RationalVector.from_dict(dict(placed))


def _distinct_permutations(values: Sequence) -> Iterator[tuple]:
    """Distinct orderings of a multiset, lexicographic (next-permutation)."""
    a = sorted(values, key=repr)
    keys = [repr(v) for v in a]
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and keys[i] >= keys[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while keys[j] <= keys[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        keys[i], keys[j] = keys[j], keys[i]
        a[i + 1:] = reversed(a[i + 1:])
        keys[i + 1:] = reversed(keys[i + 1:])


def _sym_orbit_of(x: Element, n: int) -> set[Element]:
    # Sym_{m,n}(x) = Sym(n)(x): every placement of the support values into [n]
    cols = _columns(x)
    values = [v for _, v in cols]
    out = set()
    for positions in combinations(range(1, n + 1), len(cols)):
        for arrangement in _distinct_permutations(values):
            out.add(_rebuild(x, zip(positions, arrangement)))
    return out


def orbit(family: MapFamily | str, gens: Iterable[Element], m: int, n: int) -> tuple[Element, ...]:
    """``Pi_{m,n}(gens)`` as a canonically ordered, duplicate-free tuple."""
    family = MapFamily.parse(family)
    gens = list(gens)
    if m > n:
        raise DimensionError(f"need m <= n, got m={m}, n={n}")
    for g in gens:
        if g.width() > m:
            raise DimensionError(f"generator {g} of width {g.width()} does not lie in level {m}")
    if not gens:
        return ()
    if m == 0:
        return canonical(gens)
    if family is MapFamily.SYM:
        seen_patterns = set()
        out: set[Element] = set()
        for g in gens:
            pattern = (type(g), getattr(g, "rows", 0), tuple(sorted((repr(v) for _, v in _columns(g)))))
            if pattern in seen_patterns:
                continue
            seen_patterns.add(pattern)
            out |= _sym_orbit_of(g, n)
        return canonical(out)
    maps = enumerate_maps(family, m, n)
    return canonical(pi(g) for g in gens for pi in maps)


def orbit_by_enumeration(family: MapFamily | str, gens: Iterable[Element], m: int, n: int) -> tuple[Element, ...]:
    """Reference implementation of :func:`orbit`: apply every map explicitly."""
    maps = enumerate_maps(family, m, n)
    return canonical(pi(g) for g in gens for pi in maps)


def truncated_orbit(family: MapFamily | str, w: Element, n: int) -> tuple[Element, ...]:
    """``Pi(w) ∩ R_n``, computed as the orbit of ``w`` from its own width."""
    if n < w.width():
        raise DimensionError(f"level {n} is below the width {w.width()} of {w}")
    return orbit(family, [w], w.width(), n)


def factor_sym(pi: PiMap) -> tuple[PiMap, PiMap]:
    """Split an injection into ``inc ∘ perm`` with ``inc`` increasing and ``perm`` in Sym(m)."""
    ordered = tuple(sorted(pi.image))
    inc = PiMap(MapFamily.INC, pi.m, pi.n, ordered)
    rank = {v: k for k, v in enumerate(ordered, 1)}
    perm_ = PiMap(MapFamily.SYM, pi.m, pi.m, tuple(rank[v] for v in pi.image))
    return inc, perm_
