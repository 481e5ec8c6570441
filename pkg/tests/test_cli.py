import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from equichain.cli import main

SCHEMA = json.loads((resources.files("equichain") / "data" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_member_prints_lambda(capsys):
    assert run(capsys, "member", "cone", "[[3,1],[1,3]]", "[2,1]") == (0, "true λ=[5/8, 1/8]\n", "")


def test_member_json_certificate(capsys):
    code, out, _ = run(capsys, "member", "cone", "[[2,1],[1,2]]", "[3,1]", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["member"] is False and doc["certificate"]["type"] == "farkas"


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "inc", "2", "3", "[[1,2]]")
    assert code == 0 and out.splitlines() == ["[1, 2]", "[1, 0, 2]", "[0, 1, 2]"]


def test_expand_monomials_on_one_line(capsys):
    assert run(capsys, "expand", "corpus:ex-nobound?m=3", "2")[1] == "x[1,1]^2 x[1,2]^2\n"


def test_stability_text(capsys):
    code, out, _ = run(capsys, "stability", "corpus:ex-nobound?m=4", "--horizon", "9")
    assert code == 0 and out.startswith("stabilizes-by 4")


@pytest.mark.parametrize("ref", ["corpus:ex-inc-support-size", "corpus:ex-not-sym-invariant",
                                 "corpus:ex-no-hiller-sullivant", "corpus:ex-nobound?m=2"])
def test_reports_are_schema_valid(capsys, ref):
    code, out, _ = run(capsys, "report", ref, "--json", "--horizon", "6")
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMA)


def test_inc_support_size_report(capsys):
    _, out, _ = run(capsys, "report", "corpus:ex-inc-support-size", "--horizon", "7", "--json")
    doc = json.loads(out)
    assert all(s["verdict"] == "saturated" for s in doc["saturation"])
    assert doc["stability"]["verdict"] == "fails-at-every-step-up-to"
    assert doc["stability"]["witnesses"][-1]["element"] == "[7, 0, 0, 0, 0, 0, 1]"


def test_report_to_file_with_timings(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "report", "corpus:table1", "--horizon", "5", "--json", "--timings", "--out", str(out))[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert "total_seconds" in doc["timings"]


def test_saturation_command(capsys):
    code, out, _ = run(capsys, "saturation", "corpus:ex-inc-not-stable", "2", "--horizon", "5")
    assert code == 0 and out.startswith("not saturated at level 2: [0, 1]")


def test_props(capsys):
    code, out, _ = run(capsys, "props", "--json")
    checks = json.loads(out)["framework_checks"]
    full = [c for c in checks if c.get("ambient") == "full-real"]
    assert code == 0 and full and not full[0]["passed"]
    assert all(c["passed"] for c in checks if c.get("ambient") != "full-real")


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0 and len(out.splitlines()) >= 10
    assert "stub" in out


def test_examples_run_pass_and_exit_code(capsys):
    code, out, _ = run(capsys, "examples", "run", "ex-nobound-prime?m=2,l=3")
    assert code == 0 and "index: expected 5, got 5" in out


def test_examples_run_mismatch_exit_code(capsys, monkeypatch):
    from equichain import corpus
    monkeypatch.setattr(corpus, "compare", lambda spec, expect, report: [
        corpus.Expectation("stability", "x", "y", False)])
    assert run(capsys, "examples", "run", "ex-nobound")[0] == 1


def test_stub_prints_its_reasoning(capsys):
    code, out, _ = run(capsys, "examples", "run", "ex-counterex-fg")
    assert code == 0 and "not representable" in out and "not finitely generated" in out


@pytest.mark.parametrize("argv,code", [
    (["member", "cone", "[[1,-1]]", "[1,0]"], 2),
    (["orbit", "sym", "3", "2", "[[1]]"], 2),
    (["report", "corpus:no-such-example"], 3),
    (["expand", "corpus:ex-counterex-fg", "2"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_internal_inconsistency_exit_code(capsys, monkeypatch):
    from equichain import chains
    monkeypatch.setattr(chains, "closure_equal", lambda *a: False)
    assert run(capsys, "report", "corpus:ex-nobound?m=2", "--horizon", "5")[0] == 4


def test_environment_horizon(capsys, monkeypatch):
    monkeypatch.setenv("EQUICHAIN_HORIZON", "5")
    doc = json.loads(run(capsys, "stability", "corpus:ex-nobound?m=2", "--json")[1])
    assert doc["verified_up_to"] == 5
    monkeypatch.setenv("EQUICHAIN_HORIZON", "zero")
    assert run(capsys, "stability", "corpus:ex-nobound?m=2")[0] == 2


def test_spec_file_path(tmp_path, capsys):
    p = tmp_path / "simplex.chain"
    p.write_text("[chain]\nname = simplex\nambient = nonneg-real\nclosure = cone\nfamily = sym\n"
                 "[phase 1..]\nmode = template\ngen for i in 1..n: e[i]\n")
    code, out, _ = run(capsys, "stability", str(p), "--horizon", "4")
    assert code == 0 and out.startswith("stabilizes-by 1")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "equichain.cli", "member", "ideal", "x[1,1]", "x[1,1]*x[1,2]"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("true divisor=x[1,1]")
