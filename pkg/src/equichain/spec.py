"""Declarative chain descriptions.

A :class:`ChainSpec` lists explicit generators for a prefix of levels (the
*base*) followed by phases. A template phase defines ``A_n`` as the closure of
templates evaluated at ``n``; a recursive phase defines it as the closure of
``Pi_{n-1,n}(gens A_{n-1})`` together with the orbit of the new templates.

Integer expressions (ranges, indices, coefficients, exponents) are kept as
source text and evaluated on demand over ``n``, ``i`` and the chain parameters.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .exact import Element, EquichainError, Monomial, RationalVector, format_fraction
from .maps import MapFamily
from .oracles import ClosureKind


class SpecError(EquichainError):
    """A chain description is malformed or evaluates outside its ambient."""

    def __init__(self, message: str, *, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = []
        if source:
            where.append(source)
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{':'.join(where)}: {message}" if where else message)


# -- expressions ----------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _check_node(node: ast.AST, text: str) -> None:
    if isinstance(node, ast.Expression):
        _check_node(node.body, text)
    elif isinstance(node, ast.BinOp):
        if not (type(node.op) in _BINOPS or isinstance(node.op, ast.Pow)):
            raise SpecError(f"operator not allowed in {text!r}")
        _check_node(node.left, text)
        _check_node(node.right, text)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise SpecError(f"operator not allowed in {text!r}")
        _check_node(node.operand, text)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            raise SpecError(f"only integer literals are allowed, got {node.value!r} in {text!r}")
    elif isinstance(node, ast.Name):
        pass
    else:
        raise SpecError(f"unsupported syntax in expression {text!r}")


def _eval(node: ast.AST, env: Mapping[str, Fraction], text: str) -> Fraction:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env, text)
    if isinstance(node, ast.Constant):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise SpecError(f"unknown name {node.id!r} in {text!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp):
        x = _eval(node.operand, env, text)
        return -x if isinstance(node.op, ast.USub) else x
    left = _eval(node.left, env, text)
    right = _eval(node.right, env, text)
    if isinstance(node.op, ast.Pow):
        if right.denominator != 1 or right < 0:
            raise SpecError(f"exponent must be a nonnegative integer in {text!r}")
        return left ** int(right)
    if isinstance(node.op, ast.Div) and right == 0:
        raise SpecError(f"division by zero in {text!r}")
    return _BINOPS[type(node.op)](left, right)


@dataclass(frozen=True)
class Expr:
    """A polynomial expression in ``n``, ``i`` and named parameters; ``^`` is power."""

    text: str
    _tree: ast.Expression = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        text = self.text.strip()
        object.__setattr__(self, "text", text)
        if not text:
            raise SpecError("empty expression")
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError:
            raise SpecError(f"cannot parse expression {text!r}") from None
        _check_node(tree, text)
        object.__setattr__(self, "_tree", tree)

    def names(self) -> frozenset[str]:
        return frozenset(n.id for n in ast.walk(self._tree) if isinstance(n, ast.Name))

    def value(self, env: Mapping[str, Fraction | int]) -> Fraction:
        return _eval(self._tree, env, self.text)

    def integer(self, env: Mapping[str, Fraction | int], what: str = "value") -> int:
        v = self.value(env)
        if v.denominator != 1:
            raise SpecError(f"{what} {self.text!r} evaluates to non-integer {format_fraction(v)}")
        return int(v)

    def __str__(self) -> str:
        return self.text


# -- ambients -------------------------------------------------------------------


class AmbientKind(str, Enum):
    NONNEG_REAL = "nonneg-real"
    NONNEG_INT = "nonneg-int"
    MONOMIAL = "monomial"
    FULL_REAL = "full-real"


@dataclass(frozen=True)
class Ambient:
    kind: AmbientKind
    rows: int = 1

    @classmethod
    def parse(cls, text: str) -> Ambient:
        t = text.strip().lower()
        if t.startswith("monomial"):
            rest = t[len("monomial"):].strip()
            rows = 1
            if rest:
                if not (rest.startswith("(") and rest.endswith(")") and rest[1:-1].strip().isdigit()):
                    raise SpecError(f"bad ambient {text!r}; expected monomial(c)")
                rows = int(rest[1:-1])
                if rows < 1:
                    raise SpecError("a monomial ambient needs at least one row")
            return cls(AmbientKind.MONOMIAL, rows)
        try:
            return cls(AmbientKind(t))
        except ValueError:
            raise SpecError(f"unknown ambient {text!r}") from None

    def __str__(self) -> str:
        return f"monomial({self.rows})" if self.kind is AmbientKind.MONOMIAL else self.kind.value

    def admits(self, closure: ClosureKind) -> bool:
        if self.kind is AmbientKind.FULL_REAL:
            return closure in (ClosureKind.CONE, ClosureKind.IDENTITY)
        if closure is ClosureKind.IDENTITY:
            return True
        return {
            ClosureKind.CONE: AmbientKind.NONNEG_REAL,
            ClosureKind.MONOID: AmbientKind.NONNEG_INT,
            ClosureKind.IDEAL: AmbientKind.MONOMIAL,
        }[closure] is self.kind

    def check(self, x: Element) -> None:
        """Raise :class:`SpecError` unless ``x`` belongs to this ambient."""
        if self.kind is AmbientKind.MONOMIAL:
            if not isinstance(x, Monomial) or x.rows != self.rows:
                raise SpecError(f"{x} is not a monomial with {self.rows} row(s)")
            return
        if not isinstance(x, RationalVector):
            raise SpecError(f"{x} is not a vector")
        if self.kind is AmbientKind.FULL_REAL:
            return
        if not x.is_nonneg():
            raise SpecError(f"{x} has a negative entry")
        if self.kind is AmbientKind.NONNEG_INT and not x.is_integral():
            raise SpecError(f"{x} is not an integer vector")


# -- templates ------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """``coeff e[index]`` for vectors, ``x[row, index]^coeff`` for monomials.

    With ``index_hi`` set the term stands for one entry per index in
    ``index..index_hi``, all with the same coefficient.
    """

    coeff: Expr
    index: Expr
    row: int | None = None
    index_hi: Expr | None = None

    def _index_text(self) -> str:
        return str(self.index) if self.index_hi is None else f"{self.index}..{self.index_hi}"

    def __str__(self) -> str:
        if self.row is None:
            return f"{_wrap(self.coeff)} e[{self._index_text()}]"
        exp = "" if self.coeff.text == "1" else f"^{_wrap(self.coeff)}"
        return f"x[{self.row},{self._index_text()}]{exp}"


def _wrap(e: Expr) -> str:
    t = e.text
    simple = t.isidentifier() or t.isdigit() or (t.startswith("(") and t.endswith(")") and _balanced(t[1:-1]))
    return t if simple else f"({t})"


def _balanced(t: str) -> bool:
    depth = 0
    for ch in t:
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth < 0:
            return False
    return depth == 0


@dataclass(frozen=True)
class GeneratorTemplate:
    """One generator, or a family of them indexed by ``i in lo..hi``."""

    terms: tuple[Term, ...]
    lo: Expr | None = None
    hi: Expr | None = None
    line: int | None = field(default=None, compare=False)

    def __str__(self) -> str:
        joiner = " * " if self.terms and self.terms[0].row is not None else " + "
        body = joiner.join(map(str, self.terms)) if self.terms else "0"
        if self.lo is None:
            return f"gen: {body}"
        return f"gen for i in {self.lo}..{self.hi}: {body}"

    def evaluate(self, n: int, env: Mapping[str, int], ambient: Ambient) -> list[Element]:
        base = dict(env, n=n)
        if self.lo is None:
            rng = [None]
        else:
            lo = self.lo.integer(base, "range bound")
            hi = self.hi.integer(base, "range bound")
            rng = range(lo, hi + 1)
        out = []
        for i in rng:
            scope = dict(base) if i is None else dict(base, i=i)
            out.append(self._one(n, scope, ambient, i))
        return out

    def _fail(self, n: int, i: int | None, msg: str) -> SpecError:
        at = f"level {n}" + ("" if i is None else f", i={i}")
        return SpecError(f"{at}, template '{self}': {msg}", line=self.line)

    def _one(self, n: int, scope: dict, ambient: Ambient, i: int | None) -> Element:
        seen = set()
        if ambient.kind is AmbientKind.MONOMIAL:
            acc: dict[tuple[int, int], int] = {}
            for t in self.terms:
                row = t.row if t.row is not None else 1
                if not 1 <= row <= ambient.rows:
                    raise self._fail(n, i, f"row {row} outside 1..{ambient.rows}")
                e = t.coeff.value(scope)
                if e.denominator != 1 or e < 0:
                    raise self._fail(n, i, f"exponent {format_fraction(e)} is not a nonnegative integer")
                for j in self._indices(t, n, scope, i):
                    if (row, j) in seen:
                        raise self._fail(n, i, f"variable x[{row},{j}] appears twice")
                    seen.add((row, j))
                    if e:
                        acc[(row, j)] = int(e)
            return Monomial.from_dict(acc, ambient.rows)
        entries: dict[int, Fraction] = {}
        for t in self.terms:
            if t.row is not None:
                raise self._fail(n, i, "monomial factor in a vector ambient")
            c = t.coeff.value(scope)
            if c < 0 and ambient.kind is not AmbientKind.FULL_REAL:
                raise self._fail(n, i, f"negative coefficient {format_fraction(c)}")
            if ambient.kind is AmbientKind.NONNEG_INT and c.denominator != 1:
                raise self._fail(n, i, f"non-integer coefficient {format_fraction(c)}")
            for j in self._indices(t, n, scope, i):
                if j in seen:
                    raise self._fail(n, i, f"index {j} appears twice")
                seen.add(j)
                if c:
                    entries[j] = c
        return RationalVector.from_dict(entries)

    def _index(self, e: Expr, n: int, scope: dict, i: int | None) -> int:
        j = e.value(scope)
        if j.denominator != 1:
            raise self._fail(n, i, f"index {e} is not an integer")
        j = int(j)
        if j < 1:
            raise self._fail(n, i, f"index {e} = {j} is below 1")
        if j > n:
            raise self._fail(n, i, f"index {e} = {j} exceeds the level")
        return j

    def _indices(self, t: Term, n: int, scope: dict, i: int | None) -> list[int]:
        if t.index_hi is None:
            return [self._index(t.index, n, scope, i)]
        lo = t.index.integer(scope, "index")
        hi = t.index_hi.integer(scope, "index")
        if hi < lo:
            return []
        if lo < 1:
            raise self._fail(n, i, f"index {t.index} = {lo} is below 1")
        if hi > n:
            raise self._fail(n, i, f"index {t.index_hi} = {hi} exceeds the level")
        return list(range(lo, hi + 1))


class Mode(str, Enum):
    TEMPLATE = "template"
    RECURSIVE = "recursive"


@dataclass(frozen=True)
class Phase:
    lo: Expr
    hi: Expr | None  # None: open-ended
    mode: Mode
    templates: tuple[GeneratorTemplate, ...] = ()
    line: int | None = field(default=None, compare=False)

    def bounds(self, env: Mapping[str, int]) -> tuple[int, int | None]:
        lo = self.lo.integer(env, "phase bound")
        hi = None if self.hi is None else self.hi.integer(env, "phase bound")
        return lo, hi


# -- chains ---------------------------------------------------------------------


@dataclass(frozen=True)
class ChainSpec:
    name: str
    ambient: Ambient
    closure: ClosureKind
    family: MapFamily
    base: tuple[tuple[int, tuple[Element, ...]], ...] = ()
    phases: tuple[Phase, ...] = ()
    params: tuple[tuple[str, int], ...] = ()
    horizon: int | None = None
    description: str = ""
    status: str = "representable"
    note: str = ""

    def __post_init__(self):
        if not self.ambient.admits(self.closure):
            raise SpecError(f"closure '{self.closure.value}' does not fit ambient '{self.ambient}'")
        if self.ambient.kind is AmbientKind.FULL_REAL:
            raise SpecError("the full-real ambient is only available to framework checks")
        if self.status not in ("representable", "stub"):
            raise SpecError(f"unknown status {self.status!r}")
        for level, gens in self.base:
            for g in gens:
                self.ambient.check(g)
                if g.width() > level:
                    raise SpecError(f"base generator {g} does not fit level {level}")
        if self.status == "representable":
            self.layout()

    @property
    def representable(self) -> bool:
        return self.status == "representable"

    def env(self) -> dict[str, int]:
        return dict(self.params)

    def with_params(self, **values: int) -> ChainSpec:
        known = dict(self.params)
        for k, v in values.items():
            if k not in known:
                raise SpecError(f"chain {self.name!r} has no parameter {k!r}")
            known[k] = int(v)
        return replace(self, params=tuple(sorted(known.items())))

    def layout(self) -> list[tuple[int, int | None, Phase | None]]:
        """Non-empty level ranges in order; ``None`` phase marks a base level."""
        env = self.env()
        out: list[tuple[int, int | None, Phase | None]] = []
        expected = 1
        for level, _ in self.base:
            if level != expected:
                raise SpecError(f"base levels must be 1, 2, ... in order; got {level}")
            out.append((level, level, None))
            expected += 1
        for ph in self.phases:
            lo, hi = ph.bounds(env)
            if hi is not None and hi < lo:
                continue  # empty for these parameters
            if lo != expected:
                raise SpecError(f"phase starting at {lo} leaves a gap or overlap (expected {expected})",
                                line=ph.line)
            if out and out[-1][1] is None:
                raise SpecError("a phase follows an open-ended phase", line=ph.line)
            out.append((lo, hi, ph))
            expected = None if hi is None else hi + 1
        if expected is not None:
            raise SpecError("phases must cover every level; the last phase has to be open-ended")
        return out

    def rule(self, n: int) -> tuple[Phase | None, tuple[Element, ...]]:
        """The phase governing level ``n`` (or its base generators)."""
        for lo, hi, ph in self.layout():
            if lo <= n and (hi is None or n <= hi):
                if ph is None:
                    return None, dict(self.base)[n]
                return ph, ()
        raise SpecError(f"no rule for level {n}")  # pragma: no cover - layout covers [1, inf)

    def display_name(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}?{','.join(f'{k}={v}' for k, v in self.params)}"


def format_level_generators(gens: tuple[Element, ...]) -> str:
    if gens and isinstance(gens[0], Monomial):
        return ", ".join(map(str, gens))
    return "[" + ", ".join(map(str, gens)) + "]"
