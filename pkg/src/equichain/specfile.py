"""Reading and writing ``.chain`` files.

Example::

    [chain]
    name = ex-inc-not-stable
    ambient = nonneg-real
    closure = cone
    family = inc

    [base]
    1: []

    [phase 2..]
    mode = template
    gen for i in 1..n-1: e[i]
    gen for i in 1..n-1: e[i] + n e[n]

    [expect]
    stability = fails-at-every-step

Vector templates join terms ``coeff e[index]`` with ``+``; monomial templates
join factors ``x[row,index]^exp`` with ``*``. An optional ``[expect]`` section
holds the verdicts a corpus run compares against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .exact import AmbientError, Element, Monomial, parse_monomial_list, parse_vector_list
from .maps import MapFamily
from .oracles import ClosureKind
from .spec import (
    Ambient,
    AmbientKind,
    ChainSpec,
    Expr,
    GeneratorTemplate,
    Mode,
    Phase,
    SpecError,
    Term,
    format_level_generators,
)

_SECTION = re.compile(r"^\[\s*(chain|base|expect|phase\s+(.*?)\s*\.\.\s*(.*?))\s*\]$")
_GEN = re.compile(r"^gen(?:\s+for\s+i\s+in\s+(.+?)\s*\.\.\s*(.+?))?\s*:\s*(.*)$")
_VTERM = re.compile(r"^(.*?)\s*\be\[(.+)\]$")
_MFACTOR = re.compile(r"^x\[\s*(\d+)\s*,(.+?)\](?:\s*\^\s*(.+))?$")

# parse-time semantic validation evaluates templates on this many levels per phase
_VALIDATE_LEVELS = 8


@dataclass
class SpecFile:
    spec: ChainSpec
    expect: dict[str, str] = field(default_factory=dict)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _index_range(text: str) -> tuple[Expr, Expr | None]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return Expr(lo), Expr(hi)
    return Expr(text), None


def _parse_terms(body: str, monomial: bool, line: int) -> tuple[Term, ...]:
    body = body.strip()
    if body in ("", "0", "1"):
        # the zero vector, or the constant monomial
        return ()
    terms = []
    if monomial:
        for part in _split_top(body, "*"):
            m = _MFACTOR.match(part)
            if not m:
                raise SpecError(f"cannot parse monomial factor {part!r}", line=line)
            lo, hi = _index_range(m.group(2))
            terms.append(Term(Expr(m.group(3) or "1"), lo, int(m.group(1)), hi))
    else:
        for part in _split_top(body, "+"):
            m = _VTERM.match(part)
            if not m:
                raise SpecError(f"cannot parse term {part!r}; expected '<coeff> e[<index>]'", line=line)
            coeff = m.group(1).strip().rstrip("*").strip() or "1"
            lo, hi = _index_range(m.group(2))
            terms.append(Term(Expr(coeff), lo, None, hi))
    return tuple(terms)


def _parse_generators(text: str, ambient: Ambient, line: int) -> tuple[Element, ...]:
    try:
        if ambient.kind is AmbientKind.MONOMIAL:
            t = text.strip()
            if t in ("", "[]"):
                return ()
            gens = parse_monomial_list(t, ambient.rows)
        else:
            gens = parse_vector_list(text)
    except (AmbientError, ValueError) as exc:
        raise SpecError(getattr(exc, "message", str(exc)), line=line) from None
    for g in gens:
        try:
            ambient.check(g)
        except SpecError as exc:
            raise SpecError(getattr(exc, "message", str(exc)), line=line) from None
    return tuple(gens)


def loads(text: str, source: str | None = None) -> SpecFile:
    """Parse the contents of a ``.chain`` file."""
    section = None
    chain: dict[str, tuple[str, int]] = {}
    base: list[tuple[int, tuple[Element, ...]]] = []
    phases: list[Phase] = []
    expect: dict[str, str] = {}
    cur_phase: dict | None = None
    ambient: Ambient | None = None

    def err(msg: str, line: int) -> SpecError:
        return SpecError(msg, line=line, source=source)

    def close_phase():
        nonlocal cur_phase
        if cur_phase is not None:
            if cur_phase["mode"] is None:
                raise err("phase without 'mode = template|recursive'", cur_phase["line"])
            if cur_phase["mode"] is Mode.TEMPLATE and not cur_phase["templates"]:
                raise err("template phase without generators", cur_phase["line"])
            phases.append(Phase(cur_phase["lo"], cur_phase["hi"], cur_phase["mode"],
                                tuple(cur_phase["templates"]), cur_phase["line"]))
            cur_phase = None

    def need_ambient(line: int) -> Ambient:
        nonlocal ambient
        if ambient is None:
            if "ambient" not in chain:
                raise err("the [chain] section with an 'ambient' key must come first", line)
            try:
                ambient = Ambient.parse(chain["ambient"][0])
            except SpecError as exc:
                raise err(exc.message, chain["ambient"][1]) from None
        return ambient

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _SECTION.match(stripped)
        if m:
            close_phase()
            head = m.group(1)
            if head.startswith("phase"):
                section = "phase"
                try:
                    lo = Expr(m.group(2))
                    hi = Expr(m.group(3)) if m.group(3).strip() else None
                except SpecError as exc:
                    raise err(exc.message, lineno) from None
                cur_phase = {"lo": lo, "hi": hi, "mode": None, "templates": [], "line": lineno}
            else:
                section = head
            continue
        if stripped.startswith("["):
            raise err(f"unknown section header {stripped!r}", lineno)
        if section is None:
            raise err("content before the first section", lineno)

        if section in ("chain", "expect"):
            if "=" not in stripped:
                raise err(f"expected 'key = value', got {stripped!r}", lineno)
            key, value = (s.strip() for s in stripped.split("=", 1))
            if section == "chain":
                if key in chain:
                    raise err(f"duplicate key {key!r}", lineno)
                chain[key] = (value, lineno)
            else:
                expect[key] = value
        elif section == "base":
            amb = need_ambient(lineno)
            if ":" not in stripped:
                raise err(f"expected '<level>: <generators>', got {stripped!r}", lineno)
            level, gens = stripped.split(":", 1)
            if not level.strip().isdigit():
                raise err(f"bad level {level.strip()!r}", lineno)
            base.append((int(level), _parse_generators(gens, amb, lineno)))
        else:
            amb = need_ambient(lineno)
            if stripped.startswith("mode"):
                key, _, value = stripped.partition("=")
                if key.strip() != "mode":
                    raise err(f"unexpected line {stripped!r}", lineno)
                try:
                    cur_phase["mode"] = Mode(value.strip().lower())
                except ValueError:
                    raise err(f"unknown mode {value.strip()!r}", lineno) from None
                continue
            g = _GEN.match(stripped)
            if not g:
                raise err(f"expected 'gen ...' or 'mode = ...', got {stripped!r}", lineno)
            try:
                terms = _parse_terms(g.group(3), amb.kind is AmbientKind.MONOMIAL, lineno)
                lo = Expr(g.group(1)) if g.group(1) else None
                hi = Expr(g.group(2)) if g.group(2) else None
            except SpecError as exc:
                raise err(exc.message, lineno) from None
            cur_phase["templates"].append(GeneratorTemplate(terms, lo, hi, lineno))
    close_phase()

    spec = _build(chain, base, phases, source)
    if spec.representable:
        validate(spec, source)
    return SpecFile(spec, expect)


def _build(chain, base, phases, source) -> ChainSpec:
    def get(key, default=None, required=True):
        if key in chain:
            return chain[key]
        if required and default is None:
            raise SpecError(f"[chain] is missing '{key}'", source=source)
        return default, None

    known = {"name", "ambient", "closure", "family", "horizon", "params", "description", "status", "note"}
    for key, (_, line) in chain.items():
        if key not in known:
            raise SpecError(f"unknown [chain] key {key!r}", line=line, source=source)

    name, _ = get("name")
    amb_text, amb_line = get("ambient")
    cl_text, cl_line = get("closure")
    fam_text, fam_line = get("family")
    try:
        ambient = Ambient.parse(amb_text)
    except SpecError as exc:
        raise SpecError(getattr(exc, "message", str(exc)), line=amb_line, source=source) from None
    try:
        closure = ClosureKind.parse(cl_text)
    except ValueError as exc:
        raise SpecError(getattr(exc, "message", str(exc)), line=cl_line, source=source) from None
    try:
        family = MapFamily.parse(fam_text)
    except ValueError as exc:
        raise SpecError(getattr(exc, "message", str(exc)), line=fam_line, source=source) from None

    horizon = None
    if "horizon" in chain:
        h, line = chain["horizon"]
        if not h.isdigit() or int(h) < 2:
            raise SpecError(f"horizon must be an integer >= 2, got {h!r}", line=line, source=source)
        horizon = int(h)
    params = []
    if "params" in chain:
        text, line = chain["params"]
        for item in filter(None, (s.strip() for s in text.split(","))):
            k, eq, v = item.partition("=")
            if not eq or not k.strip().isidentifier() or not v.strip().lstrip("-").isdigit():
                raise SpecError(f"bad parameter {item!r}; expected name=integer", line=line, source=source)
            if k.strip() in ("n", "i"):
                raise SpecError(f"parameter name {k.strip()!r} is reserved", line=line, source=source)
            params.append((k.strip(), int(v)))

    status = chain.get("status", ("representable", None))[0]
    try:
        return ChainSpec(
            name=name,
            ambient=ambient,
            closure=closure,
            family=family,
            base=tuple(base),
            phases=tuple(phases),
            params=tuple(sorted(params)),
            horizon=horizon,
            description=chain.get("description", ("", None))[0],
            status=status,
            note=chain.get("note", ("", None))[0],
        )
    except SpecError as exc:
        line = exc.line
        if line is None and "closure" in str(exc):
            line = cl_line
        raise SpecError(exc.message, line=line, source=source) from None


def validate(spec: ChainSpec, source: str | None = None) -> None:
    """Evaluate every template on its first levels so that semantic errors surface early."""
    env = spec.env()
    for lo, hi, ph in spec.layout():
        if ph is None:
            continue
        top = lo + _VALIDATE_LEVELS - 1 if hi is None else min(hi, lo + _VALIDATE_LEVELS - 1)
        for n in range(lo, top + 1):
            for t in ph.templates:
                try:
                    t.evaluate(n, env, spec.ambient)
                except SpecError as exc:
                    raise SpecError(exc.message, line=t.line, source=source) from None


def load(path: str | Path) -> SpecFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {p}: {exc.strerror}") from None
    return loads(text, source=str(p))


def parse_spec(path: str | Path) -> ChainSpec:
    return load(path).spec


def dumps(spec: ChainSpec, expect: dict[str, str] | None = None) -> str:
    """Serialize ``spec``; ``loads(dumps(spec)).spec == spec``."""
    out = ["[chain]", f"name = {spec.name}"]
    if spec.description:
        out.append(f"description = {spec.description}")
    out += [f"ambient = {spec.ambient}", f"closure = {spec.closure.value}", f"family = {spec.family.value}"]
    if spec.horizon is not None:
        out.append(f"horizon = {spec.horizon}")
    if spec.params:
        out.append("params = " + ", ".join(f"{k}={v}" for k, v in spec.params))
    if spec.status != "representable":
        out.append(f"status = {spec.status}")
    if spec.note:
        out.append(f"note = {spec.note}")
    if spec.base:
        out += ["", "[base]"]
        for level, gens in spec.base:
            text = format_level_generators(gens)
            if not gens:
                text = "[]"
            elif isinstance(gens[0], Monomial):
                text = ", ".join(map(str, gens))
            out.append(f"{level}: {text}")
    for ph in spec.phases:
        hi = "" if ph.hi is None else str(ph.hi)
        out += ["", f"[phase {ph.lo}..{hi}]", f"mode = {ph.mode.value}"]
        out += [str(t) for t in ph.templates]
    if expect:
        out += ["", "[expect]"] + [f"{k} = {v}" for k, v in expect.items()]
    return "\n".join(out) + "\n"
