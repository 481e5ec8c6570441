"""Level expansion and the local-global battery for invariant chains.

All verdicts are relative to a finite horizon ``N``. Nothing here claims a
statement about every level; reports label horizon-limited results as such.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable

from .exact import Element, EquichainError, Monomial
from .maps import MapFamily, orbit, truncated_orbit
from .oracles import ClosureKind, Membership, closure_contains, closure_equal, inc_reduce, reduce_generators
from .spec import AmbientKind, ChainSpec, Mode, SpecError

DEFAULT_HORIZON = 8


class InternalInconsistency(EquichainError):
    """Two computations that must agree did not."""


class Unrepresentable(SpecError):
    """The chain has levels that are not finitely generated."""


def _cert_json(m: Membership | None):
    if m is None or m.certificate is None:
        return None
    return m.certificate.to_json()


# -- bound chains ---------------------------------------------------------------


class Chain:
    """A chain specification with memoized levels and membership queries."""

    def __init__(self, spec: ChainSpec):
        if not spec.representable:
            raise Unrepresentable(f"{spec.name}: {spec.note or 'levels are not finitely generated'}")
        self.spec = spec
        self.kind = spec.closure
        self.family = spec.family
        self._env = spec.env()
        self._gens: dict[int, tuple[Element, ...]] = {0: ()}
        self._sets: dict[int, frozenset] = {0: frozenset()}
        self._reduced: dict[int, tuple[Element, ...]] = {}
        self._orbits: dict[tuple, tuple[Element, ...]] = {}
        self._member: dict[tuple, Membership] = {}

    def _clean(self, gens: Iterable[Element]) -> tuple[Element, ...]:
        out = []
        for g in gens:
            if self.kind is not ClosureKind.IDEAL and not isinstance(g, Monomial) and g.is_zero():
                continue  # the zero vector never changes a cone or a monoid
            out.append(g)
        return tuple(dict.fromkeys(out))

    def generators(self, n: int) -> tuple[Element, ...]:
        """Canonically ordered generators of ``A_n`` (not necessarily irredundant)."""
        if n < 0:
            raise ValueError("levels start at 1")
        top = max(self._gens)
        for k in range(top + 1, n + 1):
            self._gens[k] = self._expand_level(k)
            self._sets[k] = frozenset(self._gens[k])
        return self._gens[n]

    def _expand_level(self, n: int) -> tuple[Element, ...]:
        phase, base = self.spec.rule(n)
        if phase is None:
            return self._canon(base)
        new = []
        for t in phase.templates:
            new.extend(t.evaluate(n, self._env, self.spec.ambient))
        if phase.mode is Mode.TEMPLATE:
            return self._canon(new)
        prev = self._gens[n - 1]
        out = list(orbit(self.family, prev, n - 1, n)) if prev else []
        if new:
            out.extend(orbit(self.family, self._clean(new), n, n))
        return self._canon(out)

    def _canon(self, gens) -> tuple[Element, ...]:
        from .exact import canonical
        return canonical(self._clean(gens))

    def reduced(self, n: int) -> tuple[Element, ...]:
        if n not in self._reduced:
            gens = self.generators(n)
            phase, _ = self.spec.rule(n)
            if phase is not None and phase.mode is Mode.RECURSIVE and n > 1:
                # same closure from the orbit of the previous irredundant set; a subset of gens
                prev = self.reduced(n - 1)
                new = [t for tpl in phase.templates for t in tpl.evaluate(n, self._env, self.spec.ambient)]
                seed = set(orbit(self.family, prev, n - 1, n)) if prev else set()
                if new:
                    seed.update(orbit(self.family, self._clean(new), n, n))
                gens = self._canon(seed)
            if self.kind is ClosureKind.IDEAL:
                red = [u for u in gens if not any(v != u and v.divides(u) for v in gens)]
            else:
                red = reduce_generators(self.kind, gens)
            self._reduced[n] = tuple(red)
        return self._reduced[n]

    def contains(self, n: int, x: Element) -> Membership:
        """Membership of ``x`` in ``A_n``."""
        self.generators(n)
        key = ("level", n, x)
        if key not in self._member:
            if x in self._sets[n]:
                self._member[key] = closure_contains(self.kind, [x], x)
            else:
                self._member[key] = closure_contains(self.kind, self.reduced(n), x)
        return self._member[key]

    def step_orbit(self, n: int, family: MapFamily | None = None) -> tuple[Element, ...]:
        """``Pi_{n,n+1}(gens A_n)``, generated from the reduced generators."""
        family = family or self.family
        key = (family, n)
        if key not in self._orbits:
            gens = self.reduced(n)
            self._orbits[key] = orbit(family, gens, n, n + 1) if gens else ()
        return self._orbits[key]


@functools.lru_cache(maxsize=64)
def bind(spec: ChainSpec) -> Chain:
    return Chain(spec)


def _chain(spec: ChainSpec | Chain) -> Chain:
    return spec if isinstance(spec, Chain) else bind(spec)


def expand(spec: ChainSpec | Chain, n: int) -> tuple[Element, ...]:
    """A finite generating set of ``A_n``."""
    if n < 1:
        raise ValueError("levels start at 1")
    return _chain(spec).generators(n)


# -- invariance -----------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceVerdict:
    passed: bool
    horizon: int
    level: int | None = None
    witness: Element | None = None
    certificate: Membership | None = None

    def to_json(self):
        out = {"verdict": "pass" if self.passed else "fail", "horizon": self.horizon, "horizon_limited": True}
        if not self.passed:
            out["violation"] = {"n": self.level, "element": str(self.witness),
                                "certificate": _cert_json(self.certificate)}
        return out


def check_invariance(spec: ChainSpec | Chain, horizon: int) -> InvarianceVerdict:
    """Every element of ``Pi_{n,n+1}(gens A_n)`` must lie in ``A_{n+1}``, for ``n < N``."""
    if horizon < 2:
        raise ValueError("invariance needs a horizon of at least 2")
    ch = _chain(spec)
    for n in range(1, horizon):
        for x in orbit(ch.family, ch.generators(n), n, n + 1) if ch.generators(n) else ():
            mem = ch.contains(n + 1, x)
            if not mem:
                return InvarianceVerdict(False, horizon, n, x, mem)
    return InvarianceVerdict(True, horizon)


# -- stabilization ----------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """Comparison of ``Pi_{n,n+1}(A_n)^cl`` with ``A_{n+1}``."""

    n: int
    equal: bool
    witness: Element | None = None
    direction: str | None = None  # "new-generator" or "not-invariant"
    certificate: Membership | None = None

    def to_json(self):
        out = {"n": self.n, "equal": self.equal}
        if not self.equal:
            out.update({"direction": self.direction, "element": str(self.witness),
                        "certificate": _cert_json(self.certificate)})
        return out


def _step(ch: Chain, n: int, family: MapFamily) -> Step:
    image = ch.step_orbit(n, family)
    for x in image:
        mem = ch.contains(n + 1, x)
        if not mem:
            return Step(n, False, x, "not-invariant", mem)
    image_set = set(image)
    for g in ch.generators(n + 1):
        if g in image_set:
            continue
        mem = closure_contains(ch.kind, image, g)
        if not mem:
            return Step(n, False, g, "new-generator", mem)
    return Step(n, True)


STABILIZES = "stabilizes-by"
FAILS_EVERYWHERE = "fails-at-every-step-up-to"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: str
    index: int | None
    horizon: int
    family: MapFamily
    steps: tuple[Step, ...]

    @property
    def witnesses(self) -> tuple[Step, ...]:
        return tuple(s for s in self.steps if not s.equal)

    def to_json(self):
        return {"verdict": self.verdict, "index": self.index, "family": self.family.value,
                "verified_up_to": self.horizon, "horizon_limited": True,
                "witnesses": [s.to_json() for s in self.witnesses]}


def stability_index(spec: ChainSpec | Chain, horizon: int, family: MapFamily | str | None = None) -> StabilityVerdict:
    """Single-step comparison for ``1 <= n < N``; the index is one past the last failing step.

    ``family`` defaults to the chain's own family; passing ``inc`` for a
    Sym-invariant chain computes the index of the same chain viewed as Inc-invariant.
    """
    ch = _chain(spec)
    fam = ch.family if family is None else MapFamily.parse(family)
    steps = tuple(_step(ch, n, fam) for n in range(1, horizon))
    failing = [s.n for s in steps if not s.equal]
    if not steps:
        return StabilityVerdict(UNDETERMINED, None, horizon, fam, steps)
    if steps[-1].equal:
        return StabilityVerdict(STABILIZES, 1 + max(failing, default=0), horizon, fam, steps)
    if len(failing) == len(steps):
        return StabilityVerdict(FAILS_EVERYWHERE, None, horizon, fam, steps)
    return StabilityVerdict(UNDETERMINED, None, horizon, fam, steps)


# -- saturation -------------------------------------------------------------------


@dataclass(frozen=True)
class SaturationVerdict:
    n: int
    saturated: bool
    horizon: int
    witness: Element | None = None
    found_at: int | None = None
    certificate: Membership | None = None

    def to_json(self):
        out = {"n": self.n, "verdict": "saturated" if self.saturated else "not-saturated",
               "horizon": self.horizon, "horizon_limited": True, "witness": None}
        if not self.saturated:
            out["witness"] = {"element": str(self.witness), "level": self.found_at,
                              "certificate": _cert_json(self.certificate)}
        return out


def saturation_check(spec: ChainSpec | Chain, n: int, horizon: int) -> SaturationVerdict:
    """Is ``A_k ∩ S_n = A_n`` for every ``n < k <= N``?

    Because the closures are consistent in the nonnegative ambients, it is
    enough to test the generators of ``A_k`` of width at most ``n``.
    """
    ch = _chain(spec)
    if ch.spec.ambient.kind is AmbientKind.FULL_REAL:
        raise SpecError("saturation is not decidable by truncation in the full-real ambient")
    if not 1 <= n <= horizon:
        raise ValueError(f"need 1 <= n <= horizon, got n={n}, horizon={horizon}")
    for k in range(n + 1, horizon + 1):
        for g in ch.generators(k):
            if g.width() > n:
                continue
            mem = ch.contains(n, g)
            if not mem:
                return SaturationVerdict(n, False, horizon, g, k, mem)
    return SaturationVerdict(n, True, horizon)


# -- support sizes ------------------------------------------------------------------


@dataclass(frozen=True)
class LevelStats:
    n: int
    generator_count: int
    reduced_count: int
    max_support: int
    running_max: int

    def to_json(self):
        return {"n": self.n, "generator_count": self.generator_count, "reduced_count": self.reduced_count,
                "max_support": self.max_support, "running_max": self.running_max}


def support_bound(spec: ChainSpec | Chain, horizon: int) -> list[LevelStats]:
    """Largest support among irredundant generators of each level, with its running maximum."""
    ch = _chain(spec)
    out = []
    run = 0
    for n in range(1, horizon + 1):
        red = ch.reduced(n)
        top = max((len(g.support()) for g in red), default=0)
        run = max(run, top)
        out.append(LevelStats(n, len(ch.generators(n)), len(red), top, run))
    return out


# -- limit generators -----------------------------------------------------------------


@dataclass(frozen=True)
class LimitCandidates:
    generators: tuple[Element, ...]
    horizon: int

    def to_json(self):
        return {"status": "candidate", "horizon": self.horizon, "generators": [str(g) for g in self.generators]}


def _orbit_closure_contains(ch: Chain, kept: list[Element], x: Element, level: int) -> bool:
    pool = []
    for k in kept:
        if k.width() <= level:
            pool.extend(truncated_orbit(ch.family, k, level) if k.width() else [k])
    if x in set(pool):
        return True
    return bool(closure_contains(ch.kind, pool, x))


def limit_generators(spec: ChainSpec | Chain, horizon: int) -> LimitCandidates:
    """A small set ``G`` whose orbits generate every level up to ``N``.

    Whether ``G`` generates the limit beyond the horizon is not decided here.
    """
    ch = _chain(spec)
    pool = list(dict.fromkeys(g for n in range(1, horizon + 1) for g in ch.reduced(n)))
    if ch.kind is ClosureKind.IDEAL and ch.family is MapFamily.INC:
        return LimitCandidates(tuple(_canonical_small_first(inc_reduce(pool))), horizon)
    pool = _canonical_small_first(pool)
    kept: list[Element] = []
    for g in pool:
        if not _orbit_closure_contains(ch, kept, g, g.width()):
            kept.append(g)
    # a later generator may make an earlier one redundant
    for g in reversed(list(kept)):
        others = [k for k in kept if k != g]
        if _orbit_closure_contains(ch, others, g, g.width()):
            kept = others
    return LimitCandidates(tuple(kept), horizon)


def _canonical_small_first(gens: Iterable[Element]) -> list[Element]:
    from .exact import canonical
    order = {g: i for i, g in enumerate(canonical(gens))}
    return sorted(order, key=lambda g: (len(g.support()), g.width(), order[g]))


# -- the report -----------------------------------------------------------------------


def _mark(flag: bool | None) -> str:
    return {True: "yes", False: "no", None: "unknown"}[flag]


@dataclass
class LocalGlobalReport:
    spec: ChainSpec
    horizon: int
    levels: list[LevelStats]
    invariance: InvarianceVerdict
    stability: StabilityVerdict
    inc_view: StabilityVerdict | None
    saturation: list[SaturationVerdict]
    limit: LimitCandidates
    cross_checks: list[dict]
    framework_checks: list[dict] = field(default_factory=list)

    @property
    def stabilizes(self) -> bool:
        return self.stability.verdict == STABILIZES

    @property
    def eventually_saturated(self) -> bool:
        tail = [s for s in self.saturation if s.n >= tail_start(self.horizon)]
        return all(s.saturated for s in tail)

    @property
    def bounded_support(self) -> bool:
        tail = [lv for lv in self.levels if lv.n > tail_start(self.horizon)]
        return len({lv.running_max for lv in tail}) <= 1

    @property
    def eventually_finitely_generated(self) -> bool:
        return self.spec.representable

    def summary(self) -> dict:
        return {
            "stabilizes": _mark(self.stabilizes),
            "eventually_finitely_generated": _mark(self.eventually_finitely_generated),
            "eventually_saturated": _mark(self.eventually_saturated),
            "bounded_support": _mark(self.bounded_support),
        }

    def to_json(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "spec_name": self.spec.display_name(),
            "closure": self.spec.closure.value,
            "family": self.spec.family.value,
            "ambient": str(self.spec.ambient),
            "horizon": self.horizon,
            "levels": [lv.to_json() for lv in self.levels],
            "invariance": self.invariance.to_json(),
            "stability": self.stability.to_json(),
            "saturation": [s.to_json() for s in self.saturation],
            "limit_candidates": self.limit.to_json(),
            "summary": self.summary(),
            "cross_checks": self.cross_checks,
            "framework_checks": self.framework_checks,
        }
        if self.inc_view is not None:
            st = out["stability"]
            st["inc_view"] = {"verdict": self.inc_view.verdict, "index": self.inc_view.index}
            st["index_divergence"] = (self.inc_view.verdict, self.inc_view.index) != (
                self.stability.verdict, self.stability.index)
        return out


SCHEMA_VERSION = "1.0"


def tail_start(horizon: int) -> int:
    """First level of the tail window used for the "eventually" verdicts."""
    return max(2, ceil(horizon / 2))


def _cross_check_multistep(ch: Chain, stab: StabilityVerdict) -> dict | None:
    if stab.verdict != STABILIZES:
        return None
    r, N = stab.index, stab.horizon
    pairs = 0
    for m in range(max(r, 1), N):
        for n in range(m + 1, N + 1):
            image = orbit(ch.family, ch.reduced(m), m, n) if ch.reduced(m) else ()
            if not closure_equal(ch.kind, image, ch.reduced(n)):
                raise InternalInconsistency(
                    f"{ch.spec.display_name()}: single steps stabilize from {r} but "
                    f"Pi_{{{m},{n}}}(A_{m}) does not generate A_{n}")
            pairs += 1
    return {"check": "multi-step replay", "passed": True, "pairs": pairs}


def _cross_check_limit(ch: Chain, limit: LimitCandidates, horizon: int) -> dict:
    kept = list(limit.generators)
    for n in range(1, horizon + 1):
        pool = []
        for k in kept:
            if k.width() <= n:
                pool.extend(truncated_orbit(ch.family, k, n) if k.width() else [k])
        pool_set = set(pool)
        for g in ch.reduced(n):
            if g in pool_set:
                continue
            if ch.kind is ClosureKind.IDEAL:
                ok = any(p.divides(g) for p in pool)
            else:
                ok = bool(closure_contains(ch.kind, pool, g))
            if not ok:
                raise InternalInconsistency(
                    f"{ch.spec.display_name()}: limit candidates miss generator {g} of level {n}")
    return {"check": "limit candidates generate every level", "passed": True, "levels": horizon}


def local_global_report(spec: ChainSpec | Chain, horizon: int | None = None,
                        framework: bool = True, seed: int = 0) -> LocalGlobalReport:
    ch = _chain(spec)
    N = horizon or ch.spec.horizon or DEFAULT_HORIZON
    if N < 2:
        raise ValueError("the horizon must be at least 2")
    levels = support_bound(ch, N)
    inv = check_invariance(ch, N)
    stab = stability_index(ch, N)
    inc_view = stability_index(ch, N, MapFamily.INC) if ch.family is MapFamily.SYM else None
    sat = [saturation_check(ch, n, N) for n in range(1, N)]
    limit = limit_generators(ch, N)

    cross = []
    multi = _cross_check_multistep(ch, stab)
    if multi:
        cross.append(multi)
    cross.append(_cross_check_limit(ch, limit, N))
    report = LocalGlobalReport(ch.spec, N, levels, inv, stab, inc_view, sat, limit, cross)
    if ch.family is MapFamily.SYM and ch.kind is ClosureKind.CONE:
        # saturated with bounded support forces stabilization; at a finite horizon
        # this is only an observation, not a certificate
        predicted = report.eventually_saturated and report.bounded_support
        cross.append({"check": "saturated and bounded support imply stabilization",
                      "applies": predicted, "observed_stabilizes": report.stabilizes,
                      "passed": (not predicted) or report.stabilizes, "horizon_limited": True})
    if framework:
        report.framework_checks = framework_checks(ch, N, seed)
    return report


def framework_checks(ch: Chain, horizon: int, seed: int = 0) -> list[dict]:
    """Consistency and compatibility spot checks on the chain's own low levels."""
    from .framework import check_compatibility, check_consistency, check_local_finiteness

    out = []
    top = min(horizon, 4)
    out.append(check_consistency(ch.kind, ch.spec.ambient, ch.reduced(top), top, top - 1, seed=seed).to_json())
    m = min(2, horizon - 1)
    gens = ch.reduced(m)
    if gens:
        out.append(check_compatibility(ch.family, ch.kind, gens, m, m + 1, seed=seed).to_json())
        count, ok = check_local_finiteness(ch.family, m, m + 1, gens)
        out.append({"check": "local-finiteness", "passed": ok, "orbit_size": count, "m": m, "n": m + 1})
    return out
