from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from equichain.exact import (
    AmbientError,
    DimensionError,
    Monomial,
    RationalVector,
    canonical,
    parse_monomial,
    parse_monomial_list,
    parse_vector,
    parse_vector_list,
)

small = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), max_size=5)


def test_trailing_zeros_do_not_matter():
    assert RationalVector.from_dense([1, 2, 0, 0]) == RationalVector.from_dense([1, 2])
    assert RationalVector.from_dense([1, 2, 0]).width() == 2


def test_width_and_support():
    x = RationalVector.from_dense([0, 3, 0, Fraction(1, 2)])
    assert x.width() == 4
    assert x.support() == frozenset({2, 4})
    assert RationalVector.zero().width() == 0


def test_embed_pads_but_never_truncates():
    x = RationalVector.from_dense([1, 2])
    assert x.embed(4) == x and x.embed(4).dense(4) == (1, 2, 0, 0)
    with pytest.raises(DimensionError):
        x.embed(1)


@given(small, small)
def test_addition_is_exact(a, b):
    x, y = RationalVector.from_dense(a), RationalVector.from_dense(b)
    width = max(len(a), len(b))
    pad = lambda t: list(t) + [0] * (width - len(t))
    assert (x + y).dense(width) == tuple(p + q for p, q in zip(pad(a), pad(b)))


@given(small)
def test_parse_roundtrip(a):
    x = RationalVector.from_dense(a)
    assert parse_vector(str(x)) == x


def test_parse_rejects_floats():
    with pytest.raises(AmbientError):
        parse_vector("[1.5, 2]")
    with pytest.raises(AmbientError):
        parse_vector("1, 2")


def test_parse_vector_list():
    assert parse_vector_list("[[3,1],[1,3]]") == [RationalVector.from_dense([3, 1]), RationalVector.from_dense([1, 3])]
    assert parse_vector_list("[]") == []


def test_monomial_arithmetic_and_divisibility():
    u = parse_monomial("x[1,1]^2*x[1,3]")
    w = parse_monomial("x[1,1]^3*x[1,2]*x[1,3]")
    assert u.divides(w) and not w.divides(u)
    assert u * w.quotient(u) == w
    assert u.width() == 3 and u.degree() == 3
    assert u.support() == frozenset({1, 3})


def test_monomial_rows_must_agree():
    with pytest.raises(DimensionError):
        Monomial.from_dict({(1, 1): 1}, rows=1) * Monomial.from_dict({(2, 1): 1}, rows=2)


def test_monomial_roundtrip():
    for text in ["x[1,1]^2", "x[1,2]*x[2,3]^4", "1"]:
        assert str(parse_monomial(text, rows=2 if "x[2" in text else None)) == text


def test_monomial_list_accepts_commas_and_spaces():
    assert len(parse_monomial_list("x[1,1]^2, x[1,2]^2")) == 2
    assert len(parse_monomial_list("x[1,1]^2 x[1,2]^2")) == 2


def test_canonical_is_descending_lex():
    gens = [RationalVector.from_dense(x) for x in ([1, 3], [3, 1], [1, 3], [2, 2])]
    assert [str(g) for g in canonical(gens)] == ["[3, 1]", "[2, 2]", "[1, 3]"]
