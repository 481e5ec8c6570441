import pytest

from equichain import corpus
from equichain.chains import expand
from equichain.exact import RationalVector, parse_monomial
from equichain.spec import Expr, SpecError
from equichain.specfile import dumps, load, loads, parse_spec

V = RationalVector.from_dense

HEADER = """[chain]
name = t
ambient = {ambient}
closure = {closure}
family = inc
"""


def chain_text(body, ambient="nonneg-real", closure="cone"):
    return HEADER.format(ambient=ambient, closure=closure) + body


@pytest.mark.parametrize("name", [e.name for e in corpus.entries() if e.kind in ("chain", "stub")])
def test_corpus_roundtrip(name):
    sf = corpus.load_entry(name)
    again = loads(dumps(sf.spec, sf.expect))
    assert again.spec == sf.spec
    assert again.expect == sf.expect


def test_parse_spec_reads_a_path(tmp_path):
    p = tmp_path / "c.chain"
    p.write_text(chain_text("[phase 1..]\nmode = template\ngen for i in 1..n: e[i]\n"))
    spec = parse_spec(p)
    assert expand(spec, 3) == (V([1]), V([0, 1]), V([0, 0, 1]))
    assert load(p).expect == {}


def test_inc_not_stable_structure():
    spec = corpus.load_entry("ex-inc-not-stable").spec
    assert spec.base == ((1, ()),)
    assert [(p.lo.text, p.hi, p.mode.value) for p in spec.phases] == [("2", None, "template")]
    assert set(expand(spec, 3)) == {V([1]), V([0, 1]), V([1, 0, 3]), V([0, 1, 3])}


def test_monoid_on_real_ambient_is_rejected():
    with pytest.raises(SpecError, match="monoid"):
        loads(chain_text("[phase 1..]\nmode = template\ngen: e[1]\n", closure="monoid"))


def test_negative_coefficient_is_rejected():
    with pytest.raises(SpecError, match="negative") as info:
        loads(chain_text("[phase 1..]\nmode = template\ngen: (-1) e[1]\n"))
    assert info.value.line == 8


def test_index_beyond_level_names_level_and_template():
    with pytest.raises(SpecError) as info:
        loads(chain_text("[phase 1..]\nmode = template\ngen: e[n+1]\n"))
    msg = str(info.value)
    assert "level 1" in msg and "e[n + 1]" in msg.replace("n+1", "n + 1")


def test_duplicate_index_is_rejected():
    with pytest.raises(SpecError, match="[Dd]uplicate|twice|distinct"):
        loads(chain_text("[phase 2..]\nmode = template\ngen: e[1] + e[n-1]\n[base]\n1: [[1]]\n"))


def test_gap_between_phases_is_rejected():
    with pytest.raises(SpecError):
        loads(chain_text("[phase 1..2]\nmode = template\ngen: e[1]\n[phase 4..]\nmode = recursive\n"))


def test_full_real_is_not_a_chain_ambient():
    with pytest.raises(SpecError):
        loads(chain_text("[phase 1..]\nmode = template\ngen: e[1]\n", ambient="full-real"))


def test_syntax_error_reports_line():
    with pytest.raises(SpecError) as info:
        loads(chain_text("[phase 1..]\nmode = template\nthis is not a generator\n"))
    assert info.value.line == 8


def test_expressions_are_restricted():
    assert Expr("2*n^2 - i/2").value({"n": 3, "i": 4}) == 16
    with pytest.raises(SpecError):
        Expr("__import__('os')")
    with pytest.raises(SpecError):
        Expr("n").value({})


def test_rational_coefficients():
    spec = loads(chain_text("[base]\n1: [[1]]\n[phase 2..]\nmode = template\ngen: 1/2 e[1] + n e[n]\n")).spec
    assert expand(spec, 2) == (V(["1/2", 2]),)


def test_parameters_and_monomial_terms():
    spec = corpus.load_entry("ex-nobound?m=3").spec
    assert expand(spec, 2) == (parse_monomial("x[1,1]^2"), parse_monomial("x[1,2]^2"))
    assert expand(spec, 3)[0] == parse_monomial("x[1,1]")


def test_unknown_parameter_is_rejected():
    with pytest.raises(SpecError):
        corpus.load_entry("ex-nobound?q=3")


def test_stubs_are_not_expandable():
    spec = corpus.load_entry("ex-counterex-fg").spec
    assert not spec.representable
    with pytest.raises(SpecError):
        expand(spec, 2)
