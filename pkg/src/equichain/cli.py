"""``equichain`` command-line interface.

Exit codes: 0 success, 1 an example run disagrees with its expected verdicts,
2 usage error, 3 malformed or unrepresentable chain, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import corpus
from .chains import (
    DEFAULT_HORIZON,
    InternalInconsistency,
    expand,
    local_global_report,
    saturation_check,
    stability_index,
)
from .exact import (
    EquichainError,
    Monomial,
    format_fraction,
    parse_monomial,
    parse_monomial_list,
    parse_vector,
    parse_vector_list,
)
from .maps import MapFamily, orbit
from .oracles import ClosureKind, ConeCombination, Divisor, MonoidCombination, closure_contains
from .spec import SpecError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_SPEC, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(EquichainError):
    pass


def _horizon(args, spec=None) -> int:
    if getattr(args, "horizon", None):
        return args.horizon
    if spec is not None and spec.horizon:
        return spec.horizon
    env = os.environ.get("EQUICHAIN_HORIZON")
    if env:
        if not env.isdigit() or int(env) < 2:
            raise UsageError(f"EQUICHAIN_HORIZON must be an integer >= 2, got {env!r}")
        return int(env)
    return DEFAULT_HORIZON


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def _elements(text: str, monomial: bool | None = None):
    t = text.strip()
    if monomial is None:
        monomial = "x[" in t or t == "1"
    if monomial:
        return parse_monomial_list(t)
    return parse_vector_list(t) if t.startswith("[[") or t == "[]" else [parse_vector(t)]


def _element(text: str):
    t = text.strip()
    if "x[" in t or t == "1":
        return parse_monomial(t)
    return parse_vector(t)


def _show_gens(gens) -> str:
    if gens and isinstance(gens[0], Monomial):
        return " ".join(map(str, gens))
    return "\n".join(map(str, gens))


# -- subcommands -------------------------------------------------------------------


def cmd_expand(args) -> int:
    sf = corpus.resolve(args.spec)
    gens = expand(sf.spec, args.n)
    if args.json:
        print(_dump({"spec_name": sf.spec.display_name(), "n": args.n, "generators": [str(g) for g in gens]}))
    else:
        print(_show_gens(gens))
    return EXIT_OK


def cmd_orbit(args) -> int:
    gens = _elements(args.gens)
    out = orbit(MapFamily.parse(args.family), gens, args.m, args.n)
    if args.json:
        print(_dump({"family": args.family, "m": args.m, "n": args.n, "orbit": [str(x) for x in out]}))
    else:
        print(_show_gens(out))
    return EXIT_OK


def _describe(kind: ClosureKind, gens, mem) -> str:
    cert = mem.certificate
    if mem.member and isinstance(cert, ConeCombination):
        lam = {g: q for g, q in cert.terms}
        return "λ=[" + ", ".join(format_fraction(lam[g]) if g in lam else "0" for g in gens) + "]"
    if mem.member and isinstance(cert, MonoidCombination):
        mult = dict(cert.terms)
        return "m=[" + ", ".join(str(mult.get(g, 0)) for g in gens) + "]"
    if mem.member and isinstance(cert, Divisor):
        return f"divisor={cert.divisor} quotient={cert.quotient}"
    return json.dumps(cert.to_json(), ensure_ascii=False) if cert is not None else ""


def cmd_member(args) -> int:
    kind = ClosureKind.parse(args.kind)
    x = _element(args.x)
    gens = _elements(args.gens, isinstance(x, Monomial))
    mem = closure_contains(kind, gens, x)
    if args.json:
        print(_dump({"kind": kind.value, "element": str(x), "member": mem.member,
                     "certificate": mem.certificate.to_json() if mem.certificate else None}))
    else:
        detail = _describe(kind, gens, mem)
        print(f"{str(mem.member).lower()} {detail}".rstrip())
    return EXIT_OK


def cmd_stability(args) -> int:
    sf = corpus.resolve(args.spec)
    verdict = stability_index(sf.spec, _horizon(args, sf.spec), args.family)
    if args.json:
        print(_dump(verdict.to_json()))
        return EXIT_OK
    head = verdict.verdict + (f" {verdict.index}" if verdict.index is not None else f" {verdict.horizon}")
    print(f"{head} (verified up to level {verdict.horizon})")
    for s in verdict.witnesses:
        print(f"  step {s.n}->{s.n + 1}: {s.direction} {s.witness}")
    return EXIT_OK


def cmd_saturation(args) -> int:
    sf = corpus.resolve(args.spec)
    v = saturation_check(sf.spec, args.n, _horizon(args, sf.spec))
    if args.json:
        print(_dump(v.to_json()))
    elif v.saturated:
        print(f"saturated at level {v.n} (checked up to level {v.horizon})")
    else:
        print(f"not saturated at level {v.n}: {v.witness} from level {v.found_at}")
    return EXIT_OK


def _report_text(rep: dict) -> str:
    lines = [f"{rep['spec_name']}  horizon {rep['horizon']}"]
    lines.append("  n  gens  reduced  max-support")
    for lv in rep["levels"]:
        lines.append(f"  {lv['n']:<2} {lv['generator_count']:>5} {lv['reduced_count']:>8} {lv['max_support']:>12}")
    st = rep["stability"]
    lines.append(f"invariance: {rep['invariance']['verdict']}")
    lines.append(f"stability: {st['verdict']}" + (f" {st['index']}" if st["index"] is not None else ""))
    for w in st["witnesses"]:
        lines.append(f"  step {w['n']}->{w['n'] + 1}: {w['direction']} {w['element']}")
    if "inc_view" in st:
        inc = st["inc_view"]
        idx = f" {inc['index']}" if inc["index"] is not None else ""
        lines.append(f"  inc view: {inc['verdict']}{idx}" + ("  (differs)" if st["index_divergence"] else ""))
    sat = " ".join(f"{s['n']}:{'ok' if s['verdict'] == 'saturated' else 'no'}" for s in rep["saturation"])
    lines.append(f"saturation: {sat}")
    lines.append("limit candidates: " + " ".join(rep["limit_candidates"]["generators"]))
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in rep["summary"].items()))
    return "\n".join(lines)


def _table_text(tab: dict) -> str:
    cols = tab["columns"]
    lines = ["example".ljust(26) + "  ".join(c[:12].ljust(12) for c in cols) + "  basis       match"]
    for row in tab["rows"]:
        lines.append(row["example"].ljust(26) + "  ".join(row[c].ljust(12) for c in cols)
                     + f"  {row['basis']:<10}  {'yes' if row['matches'] else 'NO'}")
    return "\n".join(lines)


def cmd_report(args) -> int:
    start = time.perf_counter()
    name, _ = corpus.split_ref(args.spec.removeprefix("corpus:"))
    if name in corpus.AGGREGATES:
        doc = corpus.table1(_horizon(args), args.seed)
        text = _table_text(doc)
    else:
        sf = corpus.resolve(args.spec)
        rep = local_global_report(sf.spec, _horizon(args, sf.spec), framework=not args.no_framework,
                                  seed=args.seed)
        doc = rep.to_json()
        doc["seed"] = args.seed
        text = _report_text(doc)
    if args.timings:
        doc["timings"] = {"total_seconds": round(time.perf_counter() - start, 3)}
    payload = _dump(doc) if args.json else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def cmd_props(args) -> int:
    from .framework import DEFAULT_PROBES, check_consistency, check_compatibility, check_local_finiteness
    from .exact import RationalVector as V
    from .spec import Ambient

    results = []
    if args.spec:
        sf = corpus.resolve(args.spec)
        from .chains import bind, framework_checks
        results = framework_checks(bind(sf.spec), _horizon(args, sf.spec), args.seed)
    else:
        samples = {
            "cone": ("nonneg-real", [V.from_dense([3, 1, 0]), V.from_dense([1, 3, 2]), V.from_dense([0, 1, 1])]),
            "monoid": ("nonneg-int", [V.from_dense([1, 2, 0]), V.from_dense([1, 0, 2]), V.from_dense([0, 1, 2])]),
            "ideal": ("monomial(1)", parse_monomial_list("x[1,1]^2*x[1,3], x[1,2]*x[1,3]^2, x[1,2]^3")),
        }
        for kind, (amb, gens) in samples.items():
            results.append(check_consistency(kind, Ambient.parse(amb), gens, 3, 2, count=DEFAULT_PROBES,
                                             seed=args.seed).to_json())
        results.append(check_consistency("cone", Ambient.parse("full-real"),
                                         [V.from_dense([1, 1]), V.from_dense([1, -1])], 2, 1,
                                         probes=[V.from_dense([1])]).to_json())
        for fam, kind in (("sym", "cone"), ("inc", "cone"), ("sym", "monoid"), ("inc", "monoid"), ("inc", "ideal")):
            gens = samples[kind][1]
            low = [g for g in gens if g.width() <= 2] or gens[:1]
            m = max(g.width() for g in low)
            results.append(check_compatibility(fam, kind, low, m, m + 1, seed=args.seed).to_json())
        count, ok = check_local_finiteness("sym", 2, 3, [V.from_dense([1, 1])])
        results.append({"check": "local-finiteness", "passed": ok, "orbit_size": count, "m": 2, "n": 3})
    if args.json:
        print(_dump({"seed": args.seed, "framework_checks": results}))
    else:
        for r in results:
            label = " ".join(str(r[k]) for k in ("closure", "ambient", "family") if k in r)
            status = "pass" if r["passed"] else "FAIL"
            extra = "; ".join(v["witness"] for v in r.get("violations", []))
            print(f"{r['check']:<18} {label:<28} {status}" + (f"  witness {extra}" if extra else ""))
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.action == "list":
        for e in corpus.entries():
            print(f"{e.name:<28} {e.kind:<9} {e.description}")
        return EXIT_OK
    if not args.name:
        raise UsageError("examples run needs a name")
    run = corpus.run_example(args.name, args.horizon, args.seed)
    if args.json:
        print(_dump(run.to_json()))
    else:
        if run.kind == "stub":
            print(f"{run.name}: not representable (documented stub)")
            print(f"  {run.note}")
            for k, v in run.report["documented"].items():
                print(f"  {k}: {v}")
        for c in run.checks:
            mark = "ok " if c.ok else "MISMATCH"
            print(f"  {mark:<8} {c.key}: expected {c.expected}, got {c.actual}")
        print("PASS" if run.passed else "FAIL")
    return EXIT_OK if run.passed else EXIT_MISMATCH


# -- wiring --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--horizon", type=int, help="highest level to check (default: chain file, "
                                                     "then $EQUICHAIN_HORIZON, then 8)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized probes (default 0)")

    p = argparse.ArgumentParser(prog="equichain", description="Invariant chains of cones, monoids and monomial ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", parents=[common], help="generators of one level")
    s.add_argument("spec", help="corpus:<name>[?k=v,...] or a .chain file")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("orbit", parents=[common], help="Pi_{m,n}(gens)")
    s.add_argument("family", choices=["sym", "inc"])
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("gens", help='e.g. "[[1,2]]" or "x[1,1]^2, x[1,2]"')
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("member", parents=[common], help="closure membership with certificate")
    s.add_argument("kind", choices=["identity", "cone", "monoid", "ideal"])
    s.add_argument("gens")
    s.add_argument("x")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("stability", parents=[common], help="single-step stabilization up to the horizon")
    s.add_argument("spec")
    s.add_argument("--family", choices=["sym", "inc"], help="view the chain through another map family")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("saturation", parents=[common], help="is A_k ∩ S_n = A_n for n < k <= horizon")
    s.add_argument("spec")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_saturation)

    s = sub.add_parser("report", parents=[common], help="full local-global report")
    s.add_argument("spec", help="a chain, or corpus:table1")
    s.add_argument("--out", help="write to this file instead of stdout")
    s.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte stability)")
    s.add_argument("--no-framework", action="store_true", help="skip the framework spot checks")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("props", parents=[common], help="closure-system property checks")
    s.add_argument("spec", nargs="?", help="run the checks on this chain's low levels instead of the default samples")
    s.set_defaults(func=cmd_props)

    s = sub.add_parser("examples", parents=[common], help="list or run the bundled examples")
    s.add_argument("action", choices=["list", "run"])
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_examples)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (EquichainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
