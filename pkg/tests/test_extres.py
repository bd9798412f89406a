from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setlattice.extres import (
    MINUS_INF,
    PLUS_INF,
    ExtReal,
    ext_max,
    ext_min,
    inf_add,
    residual,
)


def fin(x):
    return ExtReal(Fraction(x))


ext_reals = st.one_of(
    st.just(PLUS_INF),
    st.just(MINUS_INF),
    st.fractions(min_value=-50, max_value=50, max_denominator=12).map(ExtReal),
)
finite = st.fractions(min_value=-50, max_value=50, max_denominator=12).map(ExtReal)


def test_inf_add_examples():
    assert inf_add(fin(2), fin(3)) == fin(5)
    assert inf_add(PLUS_INF, MINUS_INF) == PLUS_INF
    assert inf_add(MINUS_INF, fin(7)) == MINUS_INF


def test_residual_examples():
    assert residual(fin(5), fin(3)) == fin(2)
    assert residual(PLUS_INF, PLUS_INF) == MINUS_INF
    assert residual(fin(4), MINUS_INF) == PLUS_INF


@pytest.mark.parametrize(
    "r, s, expected",
    [
        (PLUS_INF, fin(1), PLUS_INF),
        (PLUS_INF, MINUS_INF, PLUS_INF),
        (MINUS_INF, PLUS_INF, MINUS_INF),
        (MINUS_INF, MINUS_INF, MINUS_INF),
        (MINUS_INF, fin(0), MINUS_INF),
        (fin(0), PLUS_INF, MINUS_INF),
    ],
)
def test_residual_infinite_table(r, s, expected):
    assert residual(r, s) == expected


def test_order_and_negation():
    assert MINUS_INF < fin(-10**9) < fin(0) < fin(10**9) < PLUS_INF
    assert -PLUS_INF == MINUS_INF
    assert -fin(Fraction(3, 7)) == fin(Fraction(-3, 7))


@given(ext_reals, ext_reals)
def test_residual_defining_infimum(a, b):
    """residual(a, b) is the infimum of {t real | a <= b + t} over a probe grid."""
    r = residual(a, b)
    # r is a lower bound shifted by anything feasible
    for t in [Fraction(-30), Fraction(-1, 3), Fraction(0), Fraction(1, 2), Fraction(30)]:
        if a <= inf_add(b, ExtReal(t)):
            assert r <= ExtReal(t)
    assert a <= inf_add(b, r)


@given(ext_reals, ext_reals, ext_reals)
def test_residuation_adjunction(a, b, t):
    assert (residual(a, b) <= t) == (a <= inf_add(b, t))


@given(ext_reals, ext_reals, ext_reals)
def test_monotonicity(a, a2, b):
    if a <= a2:
        assert residual(a, b) <= residual(a2, b)
    if a <= a2:
        assert residual(b, a2) <= residual(b, a)


@given(ext_reals, ext_reals, st.fractions(min_value="1/7", max_value=9, max_denominator=7))
def test_positive_homogeneity(a, b, s):
    lhs = residual(a.scale(s) if a.is_finite else a, b.scale(s) if b.is_finite else b)
    rhs = residual(a, b)
    rhs = rhs.scale(s) if rhs.is_finite else rhs
    assert lhs == rhs


def test_min_max_over_empty():
    assert ext_min([]) == PLUS_INF
    assert ext_max([]) == MINUS_INF


def test_json_round_trip():
    for v in [fin(Fraction(-7, 3)), PLUS_INF, MINUS_INF]:
        assert ExtReal.from_json(v.to_json()) == v
    assert fin(Fraction(1, 2)).to_json() == {"t": "fin", "n": "1", "d": "2"}


def test_immutability():
    v = fin(1)
    with pytest.raises(AttributeError):
        v.value = Fraction(2)
