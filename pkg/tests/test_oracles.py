import pytest
from hypothesis import given, settings, strategies as st

from equichain.bruteforce import box_monoid_contains, fourier_motzkin_cone_contains
from equichain.exact import AmbientError, Monomial, RationalVector, parse_monomial, parse_monomial_list
from equichain.oracles import (
    ConeCombination,
    FarkasNormal,
    closure_contains,
    closure_equal,
    cone_contains,
    ideal_contains,
    inc_divides,
    inc_reduce,
    monoid_contains,
    reduce_generators,
)

V = RationalVector.from_dense


def cone_instance(dim, max_gens=6, lo=0):
    vec = st.lists(st.integers(lo, 5), min_size=dim, max_size=dim).map(V)
    return st.tuples(st.lists(vec, max_size=max_gens), vec)


instances = st.integers(1, 4).flatmap(cone_instance)


def test_cone_member_with_exact_lambda():
    gens = [V([3, 1]), V([1, 3])]
    mem = cone_contains(gens, V([2, 1]))
    assert mem.member
    assert isinstance(mem.certificate, ConeCombination)
    lam = {str(g): str(q) for g, q in mem.certificate.terms}
    assert lam == {"[3, 1]": "5/8", "[1, 3]": "1/8"}
    assert mem.certificate.replay() == V([2, 1])


def test_cone_nonmember_has_farkas_normal():
    gens = [V([2, 1]), V([1, 2])]
    mem = cone_contains(gens, V([3, 1]))
    assert not mem.member
    assert isinstance(mem.certificate, FarkasNormal)
    assert mem.certificate.verify(gens, V([3, 1]))


def test_empty_cone_is_zero():
    assert cone_contains([], V([])).member
    assert not cone_contains([], V([1]))


def test_negative_input_is_rejected():
    with pytest.raises(AmbientError):
        cone_contains([V([1, -1])], V([1, 0]))


def test_monoid_needs_integer_combinations():
    gens = [V([2, 0]), V([0, 3])]
    assert monoid_contains(gens, V([4, 3])).member
    mem = monoid_contains(gens, V([3, 3]))
    assert not mem.member and mem.certificate.verify(gens, V([3, 3]))
    # in the cone, but not the monoid
    assert cone_contains(gens, V([1, 1])).member and not monoid_contains(gens, V([1, 1])).member


def test_monoid_rejects_fractions():
    with pytest.raises(AmbientError):
        monoid_contains([V([1, 2])], V(["1/2", 1]))


def test_ideal_membership_and_certificates():
    gens = parse_monomial_list("x[1,1]^2, x[1,2]*x[1,3]")
    u = parse_monomial("x[1,1]^2*x[1,4]")
    mem = ideal_contains(gens, u)
    assert mem.member and mem.certificate.replay() == u
    miss = parse_monomial("x[1,1]*x[1,2]")
    mem = ideal_contains(gens, miss)
    assert not mem.member and mem.certificate.verify(gens, miss)


@settings(max_examples=150, deadline=None)
@given(instances)
def test_cone_agrees_with_fourier_motzkin(inst):
    gens, v = inst
    mem = cone_contains(gens, v)
    assert mem.member == fourier_motzkin_cone_contains(gens, v)
    assert mem.certificate.verify(gens, v)


@settings(max_examples=150, deadline=None)
@given(instances)
def test_monoid_agrees_with_box_search(inst):
    gens, v = inst
    mem = monoid_contains(gens, v)
    assert mem.member == box_monoid_contains(gens, v)
    assert mem.certificate.verify(gens, v)


small_sets = st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2).map(V), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(small_sets, small_sets, small_sets)
def test_closure_equal_is_an_equivalence(a, b, c):
    for kind in ("cone", "monoid"):
        assert closure_equal(kind, a, a)
        assert closure_equal(kind, a, b) == closure_equal(kind, b, a)
        if closure_equal(kind, a, b) and closure_equal(kind, b, c):
            assert closure_equal(kind, a, c)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3).map(V), max_size=6))
def test_reduction_preserves_the_closure(gens):
    for kind in ("cone", "monoid"):
        out = reduce_generators(kind, gens)
        assert set(out) <= set(gens)
        assert closure_equal(kind, gens, out)


def test_reduction_of_ideal_generators():
    gens = parse_monomial_list("x[1,1], x[1,1]*x[1,2], x[1,2]^2")
    assert [str(u) for u in reduce_generators("ideal", gens)] == ["x[1,1]", "x[1,2]^2"]


def test_identity_closure_is_literal():
    assert closure_contains("identity", [V([1])], V([1])).member
    assert not closure_contains("identity", [V([1])], V([2])).member


def test_inc_divides_witness():
    ok, pi = inc_divides(parse_monomial("x[1,1]"), parse_monomial("x[1,2]*x[1,3]"))
    assert ok and pi(parse_monomial("x[1,1]")).divides(parse_monomial("x[1,2]*x[1,3]"))
    ok, pi = inc_divides(parse_monomial("x[1,1]*x[1,2]^2"), parse_monomial("x[1,1]^2*x[1,3]"))
    assert not ok and pi is None


def test_inc_reduce_examples():
    assert inc_reduce(parse_monomial_list("x[1,1], x[1,2]*x[1,3]")) == [parse_monomial("x[1,1]")]
    assert inc_reduce(parse_monomial_list("x[1,1]^2")) == [parse_monomial("x[1,1]^2")]
    assert inc_reduce(parse_monomial_list("x[1,1], x[1,1]*x[1,2]")) == [parse_monomial("x[1,1]")]


monos = st.dictionaries(st.tuples(st.just(1), st.integers(1, 4)), st.integers(1, 3), max_size=3).map(
    lambda d: Monomial.from_dict(d, 1))


@settings(max_examples=60, deadline=None)
@given(monos, monos, monos)
def test_inc_divides_is_a_preorder(a, b, c):
    assert inc_divides(a, a)[0]
    if inc_divides(a, b)[0] and inc_divides(b, c)[0]:
        assert inc_divides(a, c)[0]


@settings(max_examples=40, deadline=None)
@given(st.lists(monos, max_size=5))
def test_inc_reduce_gives_an_antichain(ms):
    out = inc_reduce(ms)
    for a in out:
        for b in out:
            assert a == b or not inc_divides(a, b)[0]
    for u in ms:
        assert any(inc_divides(k, u)[0] for k in out)
