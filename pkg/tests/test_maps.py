from math import comb, perm

import pytest
from hypothesis import given, strategies as st

from equichain.exact import DimensionError, RationalVector, parse_monomial
from equichain.maps import (
    MapFamily,
    PiMap,
    count_maps,
    enumerate_maps,
    factor_sym,
    orbit,
    orbit_by_enumeration,
    truncated_orbit,
)

V = RationalVector.from_dense


@pytest.mark.parametrize("m,n", [(m, n) for n in range(1, 6) for m in range(1, n + 1)])
def test_counts(m, n):
    assert len(enumerate_maps("inc", m, n)) == comb(n, m) == count_maps("inc", m, n)
    assert len(enumerate_maps("sym", m, n)) == perm(n, m) == count_maps("sym", m, n)


def test_inc_maps_are_increasing():
    for pi in enumerate_maps("inc", 2, 4):
        assert list(pi.image) == sorted(pi.image)


def test_apply_moves_coordinates():
    pi = PiMap(MapFamily.INC, 2, 4, (2, 4))
    assert pi(V([5, 7])) == V([0, 5, 0, 7])
    assert pi(parse_monomial("x[1,1]^2*x[1,2]")) == parse_monomial("x[1,2]^2*x[1,4]")


def test_apply_rejects_wide_elements():
    with pytest.raises(DimensionError):
        PiMap(MapFamily.INC, 1, 2, (2,))(V([1, 1]))


def test_composition():
    a = PiMap(MapFamily.INC, 2, 3, (1, 3))
    b = PiMap(MapFamily.INC, 3, 4, (2, 3, 4))
    x = V([1, 2])
    assert a.then(b)(x) == b(a(x))


def test_inc_orbit_example():
    assert orbit("inc", [V([1, 2])], 2, 3) == (V([1, 2]), V([1, 0, 2]), V([0, 1, 2]))


def test_sym_orbit_collapses_symmetric_generators():
    assert len(orbit("sym", [V([1, 1])], 2, 3)) == 3


vectors = st.lists(st.integers(0, 3), min_size=1, max_size=4).map(V)


@given(st.lists(vectors, min_size=1, max_size=3), st.sampled_from(["sym", "inc"]), st.integers(0, 2))
def test_fast_orbit_matches_enumeration(gens, family, extra):
    m = max(g.width() for g in gens) or 1
    n = m + extra
    assert orbit(family, gens, m, n) == orbit_by_enumeration(family, gens, m, n)


def test_truncated_orbit_of_basis_vector():
    assert len(truncated_orbit("inc", V([1]), 5)) == 5
    assert len(truncated_orbit("sym", V([1, 2]), 3)) == 6


def test_sym_factorization():
    x = V([3, 5])
    for pi in enumerate_maps("sym", 2, 4):
        inc, perm_ = factor_sym(pi)
        assert inc.family is MapFamily.INC
        assert perm_.then(inc)(x) == pi(x)
