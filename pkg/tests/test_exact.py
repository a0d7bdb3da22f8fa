"""Rationals and Q[x]."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ty3.exact import (
    ScalarPoly,
    binomial,
    format_rational,
    normalize,
    parse_rational,
    poly_arith,
    rational_arith,
    signed_binomial_weight,
)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)
polys = st.lists(st.integers(-5, 5), max_size=5).map(ScalarPoly)


def test_normalize_collapses_integral_fractions():
    assert type(normalize(Fraction(4, 2))) is int
    assert normalize(Fraction(1, 2)) == Fraction(1, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")
    with pytest.raises(ZeroDivisionError):
        parse_rational("3/0")


def test_unknown_op():
    with pytest.raises(ValueError):
        rational_arith(1, 2, "pow")


@given(rationals)
def test_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@given(rationals, rationals, rationals)
def test_field_laws(a, b, c):
    assert rational_arith(rational_arith(a, b, "add"), c, "add") == rational_arith(a, rational_arith(b, c, "add"), "add")
    assert rational_arith(a, rational_arith(b, c, "add"), "mul") == a * b + a * c
    if b:
        assert rational_arith(rational_arith(a, b, "div"), b, "mul") == a


def test_binomials():
    assert [binomial(4, k) for k in range(-1, 6)] == [0, 1, 4, 6, 4, 1, 0]
    # (-2)^s (-1)^(r-s) C(r,s)
    assert signed_binomial_weight(3, 1) == -2 * 1 * 3
    assert signed_binomial_weight(2, 2) == 4


def test_poly_basics():
    x = ScalarPoly.x()
    p = (x + 1) * (x - 1)
    assert p == ScalarPoly([-1, 0, 1])
    assert p.degree() == 2
    assert p[1] == 0 and p[2] == 1
    assert not ScalarPoly(0)
    assert str(ScalarPoly([Fraction(1, 2), 0, -3])) == "1/2 + -3*x^2"


@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert poly_arith(a, b, "sub") + b == a


@given(polys)
def test_poly_text_round_trip(p):
    assert ScalarPoly.parse(str(p)) == p
