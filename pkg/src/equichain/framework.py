"""Probe-based checks of the closure-system axioms.

Closures are infinite sets, so every check here samples finitely many probes.
A pass is evidence; a failure comes with an explicit witness and is a proof.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, perm
from typing import Iterable, Sequence

from .exact import Element, Monomial, RationalVector
from .maps import MapFamily, enumerate_maps, orbit
from .oracles import ClosureKind, Membership, closure_contains, cone_contains
from .spec import Ambient, AmbientKind

DEFAULT_PROBES = 32
DEFAULT_SEED = 0
MAX_NUMERATOR = 7


@dataclass(frozen=True)
class SampleSet:
    elements: tuple[Element, ...]
    level: int
    seed: int | None = None


@dataclass(frozen=True)
class Violation:
    what: str
    witness: Element
    detail: str = ""

    def to_json(self):
        out = {"what": self.what, "witness": str(self.witness)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class CheckResult:
    name: str
    probes: int
    seed: int | None
    violations: tuple[Violation, ...] = ()
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self):
        out = {"check": self.name, "passed": self.passed, "probes": self.probes, "seed": self.seed,
               "violations": [v.to_json() for v in self.violations]}
        out.update(self.extra)
        return out


def _contains(kind: ClosureKind, ambient: Ambient | None, gens, x) -> Membership:
    if ambient is not None and ambient.kind is AmbientKind.FULL_REAL:
        if kind is ClosureKind.IDENTITY:
            return closure_contains(kind, gens, x)
        return cone_contains(gens, x, orthant=False)
    return closure_contains(kind, gens, x)


def _default_ambient(kind: ClosureKind, elements: Sequence[Element]) -> Ambient:
    if kind is ClosureKind.IDEAL or (elements and isinstance(elements[0], Monomial)):
        rows = max((u.rows for u in elements), default=1)
        return Ambient(AmbientKind.MONOMIAL, rows)
    if kind is ClosureKind.MONOID:
        return Ambient(AmbientKind.NONNEG_INT)
    return Ambient(AmbientKind.NONNEG_REAL)


def random_element(ambient: Ambient, level: int, rng: random.Random) -> Element:
    """A random element of the ambient at ``level`` with small entries."""
    if ambient.kind is AmbientKind.MONOMIAL:
        acc = {}
        for j in range(1, level + 1):
            for i in range(1, ambient.rows + 1):
                if rng.random() < 0.5:
                    acc[(i, j)] = rng.randint(1, 3)
        return Monomial.from_dict(acc, ambient.rows)
    entries = {}
    for j in range(1, level + 1):
        if rng.random() < 0.3:
            continue
        if ambient.kind is AmbientKind.NONNEG_INT:
            entries[j] = rng.randint(0, MAX_NUMERATOR)
        else:
            num = rng.randint(0, MAX_NUMERATOR)
            if ambient.kind is AmbientKind.FULL_REAL and rng.random() < 0.5:
                num = -num
            entries[j] = Fraction(num, rng.randint(1, MAX_NUMERATOR))
    return RationalVector.from_dict(entries)


def random_member(kind: ClosureKind, gens: Sequence[Element], rng: random.Random) -> Element | None:
    """An element of the closure of ``gens`` built from a random combination."""
    gens = list(gens)
    if kind is ClosureKind.IDENTITY:
        return rng.choice(gens) if gens else None
    if kind is ClosureKind.IDEAL:
        if not gens:
            return None
        g = rng.choice(gens)
        width = max(g.width(), 1)
        cofactor = {}
        for j in range(1, width + 1):
            if rng.random() < 0.5:
                cofactor[(rng.randint(1, g.rows), j)] = rng.randint(1, 2)
        return g * Monomial.from_dict(cofactor, g.rows)
    out = RationalVector()
    for g in gens:
        if rng.random() < 0.5:
            continue
        if kind is ClosureKind.MONOID:
            c = Fraction(rng.randint(0, 3))
        else:
            c = Fraction(rng.randint(0, MAX_NUMERATOR), rng.randint(1, MAX_NUMERATOR))
        out = out + g.scale(c)
    return out


def _probe_pool(kind, ambient, gens, level, count, rng) -> list[Element]:
    probes = []
    for k in range(count):
        x = random_member(kind, gens, rng) if k % 2 == 0 else None
        if x is None:
            x = random_element(ambient, level, rng)
        probes.append(x)
    return probes


def check_closure_axioms(kind: ClosureKind | str, samples: SampleSet, probes: int = DEFAULT_PROBES,
                         ambient: Ambient | None = None) -> CheckResult:
    """Extensivity, idempotence and monotonicity, tested on random probes."""
    kind = ClosureKind.parse(kind)
    gens = list(samples.elements)
    ambient = ambient or _default_ambient(kind, gens)
    seed = DEFAULT_SEED if samples.seed is None else samples.seed
    rng = random.Random(seed)
    violations = []

    for a in gens:
        if not _contains(kind, ambient, gens, a):
            violations.append(Violation("extensivity", a))

    pool = _probe_pool(kind, ambient, gens, samples.level, probes, rng)
    # idempotence: adding elements of the closure as generators changes nothing
    members = [x for x in pool if _contains(kind, ambient, gens, x)]
    enlarged = gens + [x for x in members if x not in gens]
    for x in pool:
        if bool(_contains(kind, ambient, enlarged, x)) != bool(_contains(kind, ambient, gens, x)):
            violations.append(Violation("idempotence", x))

    # monotonicity: a random subset has a smaller closure
    subset = [g for g in gens if rng.random() < 0.5]
    for x in pool:
        if _contains(kind, ambient, subset, x) and not _contains(kind, ambient, gens, x):
            violations.append(Violation("monotonicity", x))
    return CheckResult("closure-axioms", len(pool), seed, tuple(violations))


def check_consistency(kind: ClosureKind | str, ambient: Ambient | str, elements: Iterable[Element],
                      level: int, n: int, probes: Iterable[Element] | None = None, *,
                      count: int = DEFAULT_PROBES, seed: int = DEFAULT_SEED) -> CheckResult:
    """Compare ``(A ∩ S_n)^cl`` with ``A^cl ∩ S_n`` on probes of width at most ``n``.

    ``elements`` is a finite set at ``level``; closure membership in the limit is
    decided at ``level``, which contains every generator.
    """
    kind = ClosureKind.parse(kind)
    ambient = Ambient.parse(ambient) if isinstance(ambient, str) else ambient
    gens = list(elements)
    if n > level:
        raise ValueError(f"need n <= level, got n={n}, level={level}")
    truncated = [g for g in gens if g.width() <= n]
    if probes is None:
        rng = random.Random(seed)
        pool = []
        for k in range(count):
            x = random_member(kind, truncated, rng) if k % 3 == 0 else None
            if x is None:
                x = random_element(ambient, n, rng)
            pool.append(x)
    else:
        pool = list(probes)
        seed = None
    violations = []
    for v in pool:
        if v.width() > n:
            raise ValueError(f"probe {v} does not lie in level {n}")
        left = bool(_contains(kind, ambient, truncated, v))
        right = bool(_contains(kind, ambient, gens, v.embed(level)))
        if left != right:
            violations.append(Violation("consistency", v,
                                        f"truncated closure says {str(left).lower()}, "
                                        f"full closure says {str(right).lower()}"))
    return CheckResult("consistency", len(pool), seed, tuple(violations),
                       {"closure": kind.value, "ambient": str(ambient), "n": n, "level": level})


def check_compatibility(family: MapFamily | str, kind: ClosureKind | str, elements: Iterable[Element],
                        m: int, n: int, probes: Iterable[Element] | None = None, *,
                        count: int = DEFAULT_PROBES, seed: int = DEFAULT_SEED) -> CheckResult:
    """Every ``pi(w)`` with ``w`` in the closure of ``A`` must lie in the closure of ``Pi_{m,n}(A)``."""
    family = MapFamily.parse(family)
    kind = ClosureKind.parse(kind)
    gens = list(elements)
    if probes is None:
        rng = random.Random(seed)
        pool = [w for w in (random_member(kind, gens, rng) for _ in range(count)) if w is not None]
    else:
        pool = list(probes)
        seed = None
    image = orbit(family, gens, m, n)
    maps = enumerate_maps(family, m, n)
    violations = []
    for w in pool:
        if not closure_contains(kind, gens, w):
            raise ValueError(f"probe {w} is not in the closure of the sample")
        for pi in maps:
            x = pi(w)
            if not closure_contains(kind, image, x):
                violations.append(Violation("compatibility", x, f"image of {w} under {pi}"))
    return CheckResult("compatibility", len(pool), seed, tuple(violations),
                       {"family": family.value, "closure": kind.value, "m": m, "n": n})


def check_local_finiteness(family: MapFamily | str, m: int, n: int,
                           gens: Iterable[Element]) -> tuple[int, bool]:
    """Size of ``Pi_{m,n}(gens)`` and whether it respects ``|gens| * |Pi_{m,n}|``."""
    family = MapFamily.parse(family)
    gens = list(gens)
    count = len(orbit(family, gens, m, n))
    per_map = comb(n, m) if family is MapFamily.INC else perm(n, m)
    return count, count <= len(gens) * per_map
