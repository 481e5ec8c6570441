"""Exact scalars, sparse nonnegative-orthant vectors and monomials.

Elements of every ambient level live in one sparse representation, so a vector
of width 2 *is* the same object at level 2, level 5 or in the limit. Level
truncation is a view (a width check), never a copy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction, str]


class EquichainError(Exception):
    """Base class for all library errors."""


class DimensionError(EquichainError, ValueError):
    """An element does not fit into the requested level."""


class AmbientError(EquichainError, ValueError):
    """An element violates the ambient (negative entry, non-integer, ...)."""


def to_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise AmbientError(f"not a rational number: {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise AmbientError(f"not a rational number: {x!r}") from exc
    # floats are rejected on purpose: 0.1 is not the rational 1/10
    raise AmbientError(f"not an exact rational: {x!r}")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RationalVector:
    """Finitely supported vector of R^(N), stored as sorted ``(index, value)`` pairs.

    Indices are 1-based and zero entries are never stored.
    """

    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        prev = 0
        for i, q in self.entries:
            if not isinstance(i, int) or i <= prev:
                raise ValueError("entries must have strictly increasing positive indices")
            if q == 0:
                raise ValueError("zero entries must not be stored")
            prev = i

    @classmethod
    def from_dense(cls, values: Iterable[Scalar]) -> RationalVector:
        return cls(tuple((i, q) for i, q in enumerate(map(to_fraction, values), 1) if q != 0))

    @classmethod
    def from_dict(cls, mapping: Mapping[int, Scalar]) -> RationalVector:
        items = []
        for i, x in sorted(mapping.items()):
            if i < 1:
                raise DimensionError(f"index {i} out of range; indices start at 1")
            q = to_fraction(x)
            if q != 0:
                items.append((i, q))
        return cls(tuple(items))

    @classmethod
    def basis(cls, i: int, scale: Scalar = 1) -> RationalVector:
        return cls.from_dict({i: scale})

    @classmethod
    def zero(cls) -> RationalVector:
        return cls(())

    def width(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.entries)

    def __getitem__(self, i: int) -> Fraction:
        for j, q in self.entries:
            if j == i:
                return q
            if j > i:
                break
        return Fraction(0)

    def dense(self, n: int | None = None) -> tuple[Fraction, ...]:
        n = self.width() if n is None else n
        if n < self.width():
            raise DimensionError(f"width {self.width()} exceeds level {n}")
        out = [Fraction(0)] * n
        for i, q in self.entries:
            out[i - 1] = q
        return tuple(out)

    def embed(self, n: int) -> RationalVector:
        if n < self.width():
            raise DimensionError(f"cannot embed a width-{self.width()} vector into level {n}")
        return self

    def is_zero(self) -> bool:
        return not self.entries

    def is_nonneg(self) -> bool:
        return all(q > 0 for _, q in self.entries)

    def is_integral(self) -> bool:
        return all(q.denominator == 1 for _, q in self.entries)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def __add__(self, other: RationalVector) -> RationalVector:
        acc = self.as_dict()
        for i, q in other.entries:
            acc[i] = acc.get(i, 0) + q
        return RationalVector.from_dict(acc)

    def __sub__(self, other: RationalVector) -> RationalVector:
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> RationalVector:
        c = to_fraction(c)
        if c == 0:
            return RationalVector()
        return RationalVector(tuple((i, c * q) for i, q in self.entries))

    def dot(self, other: RationalVector) -> Fraction:
        d = other.as_dict()
        return sum((q * d[i] for i, q in self.entries if i in d), Fraction(0))

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.dense()

    def __str__(self) -> str:
        return "[" + ", ".join(format_fraction(q) for q in self.dense()) + "]"

    def __repr__(self) -> str:
        return f"RationalVector({self})"


def vec_width(v: RationalVector) -> int:
    return v.width()


def vec_support(v: RationalVector) -> frozenset[int]:
    return v.support()


def embed(v: RationalVector, n: int) -> RationalVector:
    return v.embed(n)


@dataclass(frozen=True)
class Monomial:
    """Monomial in the variables ``x[i, j]`` with ``i`` in ``[rows]`` and ``j >= 1``.

    ``exponents`` holds sorted ``((i, j), e)`` triples with ``e > 0``.
    """

    exponents: tuple[tuple[tuple[int, int], int], ...] = ()
    rows: int = 1

    def __post_init__(self):
        prev = (0, 0)
        for (i, j), e in self.exponents:
            if not (1 <= i <= self.rows) or j < 1:
                raise DimensionError(f"variable x[{i},{j}] outside {self.rows} rows")
            if (i, j) <= prev:
                raise ValueError("exponent keys must be strictly increasing")
            if not isinstance(e, int) or e <= 0:
                raise ValueError("exponents must be positive integers")
            prev = (i, j)

    @classmethod
    def from_dict(cls, mapping: Mapping[tuple[int, int], int], rows: int = 1) -> Monomial:
        items = []
        for (i, j), e in sorted(mapping.items()):
            if int(e) != e or e < 0:
                raise AmbientError(f"exponent of x[{i},{j}] must be a nonnegative integer, got {e}")
            if e:
                items.append(((i, j), int(e)))
        return cls(tuple(items), rows)

    @classmethod
    def one(cls, rows: int = 1) -> Monomial:
        return cls((), rows)

    def width(self) -> int:
        return max((j for (_, j), _ in self.exponents), default=0)

    def support(self) -> frozenset[int]:
        return frozenset(j for (_, j), _ in self.exponents)

    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.exponents)

    def column(self, j: int) -> tuple[int, ...]:
        d = self.as_dict()
        return tuple(d.get((i, j), 0) for i in range(1, self.rows + 1))

    def divides(self, other: Monomial) -> bool:
        d = other.as_dict()
        return all(d.get(k, 0) >= e for k, e in self.exponents)

    def __mul__(self, other: Monomial) -> Monomial:
        self._check_rows(other)
        acc = self.as_dict()
        for k, e in other.exponents:
            acc[k] = acc.get(k, 0) + e
        return Monomial.from_dict(acc, self.rows)

    def quotient(self, divisor: Monomial) -> Monomial:
        self._check_rows(divisor)
        if not divisor.divides(self):
            raise ValueError(f"{divisor} does not divide {self}")
        acc = self.as_dict()
        for k, e in divisor.exponents:
            acc[k] -= e
        return Monomial.from_dict(acc, self.rows)

    def embed(self, n: int) -> Monomial:
        if n < self.width():
            raise DimensionError(f"cannot embed a width-{self.width()} monomial into level {n}")
        return self

    def is_zero(self) -> bool:
        # the constant monomial plays the role of the neutral element
        return not self.exponents

    def _check_rows(self, other: Monomial) -> None:
        if other.rows != self.rows:
            raise DimensionError(f"row counts differ: {self.rows} vs {other.rows}")

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.column(j) for j in range(1, self.width() + 1))

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for (i, j), e in sorted(self.exponents, key=lambda t: (t[0][1], t[0][0])):
            parts.append(f"x[{i},{j}]" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Monomial({self})"


def mono_width(u: Monomial) -> int:
    return u.width()


def mono_support(u: Monomial) -> frozenset[int]:
    return u.support()


Element = Union[RationalVector, Monomial]


def canonical(elements: Iterable[Element]) -> tuple[Element, ...]:
    """Duplicate-free, canonically ordered tuple.

    The order is descending lexicographic on dense coordinates (columns of the
    exponent table for monomials), so ``(3, 1)`` precedes ``(1, 3)`` and
    ``e1 + 5 e3`` precedes ``e1``.
    """
    return tuple(sorted(set(elements), key=lambda x: x.sort_key(), reverse=True))


_FRAC = r"-?\d+(?:/\d+)?"
_MONO_FACTOR = re.compile(r"x\[\s*(\d+)\s*,\s*(\d+)\s*\](?:\s*\^\s*(\d+))?")


def parse_vector(text: str) -> RationalVector:
    """Parse ``[a1, a2/b2, ...]``; entries are integers or fractions."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise AmbientError(f"vector must be written as [a1, a2, ...]: {text!r}")
    body = s[1:-1].strip()
    if not body:
        return RationalVector()
    items = [t.strip().strip('"') for t in body.split(",")]
    for t in items:
        if not re.fullmatch(_FRAC, t):
            raise AmbientError(f"bad vector entry {t!r} in {text!r}")
    return RationalVector.from_dense(items)


def parse_vector_list(text: str) -> list[RationalVector]:
    """Parse ``[[...], [...]]`` (or ``[]``)."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise AmbientError(f"vector list must be written as [[...], ...]: {text!r}")
    inner = s[1:-1]
    return [parse_vector(m.group(0)) for m in re.finditer(r"\[[^\[\]]*\]", inner)]


def parse_monomial(text: str, rows: int | None = None) -> Monomial:
    """Parse ``x[i,j]^e*x[k,l]`` (exponent 1 may be omitted) or ``1``."""
    s = text.strip()
    if s == "1":
        return Monomial.one(rows or 1)
    acc: dict[tuple[int, int], int] = {}
    for part in s.split("*"):
        m = _MONO_FACTOR.fullmatch(part.strip())
        if not m:
            raise AmbientError(f"bad monomial factor {part!r} in {text!r}")
        key = (int(m.group(1)), int(m.group(2)))
        acc[key] = acc.get(key, 0) + int(m.group(3) or 1)
    if rows is None:
        rows = max(i for i, _ in acc)
    return Monomial.from_dict(acc, rows)


def parse_monomial_list(text: str, rows: int | None = None) -> list[Monomial]:
    s = text.strip()
    if s.startswith("[") and s.endswith("]") and not s.startswith("[["):
        # tolerate a bracketed list, but not a vector
        if not s[1:].lstrip().startswith(("x", "1", "]")):
            raise AmbientError(f"not a monomial list: {text!r}")
        s = s[1:-1]
    parts = [p for p in re.split(r"[,\s]+(?![^\[]*\])", s) if p.strip()]
    monos = [parse_monomial(p, rows) for p in parts]
    if rows is None and monos:
        r = max(u.rows for u in monos)
        monos = [Monomial(u.exponents, r) for u in monos]
    return monos
