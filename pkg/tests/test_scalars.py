import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ternary_algebra.errors import ParseError
from ternary_algebra.scalars import ONE, Q, ZERO, Cyclotomic3, cyc_add, cyc_inv, cyc_mul, format_cyc, parse_cyc, qpow

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cycs = st.builds(Cyclotomic3, fractions, fractions)
nonzero = cycs.filter(bool)

OMEGA = cmath.exp(2j * cmath.pi / 3)


def approx(x: Cyclotomic3) -> complex:
    return float(x.re) + float(x.qp) * OMEGA


def test_add_examples():
    assert cyc_add(ONE, Q) == Cyclotomic3(1, 1)
    assert cyc_add(Q, cyc_mul(Q, Q)) == Cyclotomic3(-1)
    x = Cyclotomic3(Fraction(3, 4), -2)
    assert cyc_add(x, ZERO) == x


def test_mul_examples():
    assert Q * Q == Cyclotomic3(-1, -1)
    assert Q * Q * Q == ONE
    assert (ONE + Q) * (ONE + Q) == Q


def test_inverse_examples():
    assert cyc_inv(Q) == Cyclotomic3(-1, -1)
    assert cyc_inv(Cyclotomic3(2)) == Cyclotomic3(Fraction(1, 2))
    assert cyc_inv(ONE + Q) == -Q
    with pytest.raises(ZeroDivisionError):
        cyc_inv(ZERO)


@pytest.mark.parametrize("k, expected", [(0, "1"), (1, "q"), (2, "-1-q"), (3, "1"), (-1, "-1-q"), (-2, "q"), (301, "q")])
def test_qpow(k, expected):
    assert format_cyc(qpow(k)) == expected


def test_minimal_polynomial():
    assert ONE + qpow(1) + qpow(2) == ZERO


def test_numeric_view_matches_complex_root():
    assert abs(complex(Q) - OMEGA) < 1e-12


@given(cycs, cycs, cycs)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO


@given(nonzero)
def test_inverse_property(a):
    assert a * a.inverse() == ONE
    assert a / a == ONE


@given(cycs, cycs)
def test_agrees_with_complex_arithmetic(a, b):
    assert abs(approx(a * b) - approx(a) * approx(b)) < 1e-6 * (1 + abs(approx(a)) * abs(approx(b)))


@given(cycs)
def test_text_round_trip(a):
    assert parse_cyc(format_cyc(a)) == a


@pytest.mark.parametrize(
    "text, value",
    [("0", ZERO), ("-1-q", Cyclotomic3(-1, -1)), ("1/2*q", Cyclotomic3(0, Fraction(1, 2))), ("q", Q), ("-q", -Q), ("3/4-2/3*q", Cyclotomic3(Fraction(3, 4), Fraction(-2, 3)))],
)
def test_text_form(text, value):
    assert parse_cyc(text) == value
    assert format_cyc(value) == text


@pytest.mark.parametrize("bad", ["", "1+", "q*q", "1/0", "abc", "1 2", "--1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_cyc(bad)


def test_immutable_and_hashable():
    a = Cyclotomic3(1, 2)
    with pytest.raises(AttributeError):
        a.re = 5
    assert hash(Cyclotomic3(3)) == hash(3)
    assert {a: 1}[Cyclotomic3(1, 2)] == 1
