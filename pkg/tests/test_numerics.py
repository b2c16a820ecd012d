import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratdiff.errors import DivisionByZero, NonFiniteValue
from ratdiff.numerics import (
    complex_,
    format_scalar,
    parse_scalar,
    rational,
    rational_arith,
    real,
    unit_root_power,
)

fractions = st.fractions(max_denominator=10**6)
nonzero_fractions = fractions.filter(lambda f: f != 0)


def test_rational_addition():
    assert rational_arith(Fraction(1, 2), "+", Fraction(1, 3)) == Fraction(5, 6)


def test_canonical_form():
    r = rational("2/4")
    assert (r.numerator, r.denominator) == (1, 2)
    r = rational(Fraction(6, -4))
    assert (r.numerator, r.denominator) == (-3, 2)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        rational_arith(Fraction(1, 2), "÷", Fraction(0))
    with pytest.raises(DivisionByZero):
        rational("1/0")


def test_decimal_strings_are_exact():
    assert rational("0.2") == Fraction(1, 5)
    assert rational("-1.3") == Fraction(-13, 10)
    assert parse_scalar("13/10", "float") == 1.3


@pytest.mark.parametrize("bad", ["nan", "inf", float("nan"), float("-inf")])
def test_float_ingestion_rejects_non_finite(bad):
    with pytest.raises((NonFiniteValue, ValueError)):
        real(bad)


def test_unknown_backend():
    with pytest.raises(ValueError):
        parse_scalar("1", "decimal")


@given(fractions, nonzero_fractions)
def test_arith_round_trip(a, b):
    assert rational_arith(rational_arith(a, "+", b), "-", b) == a
    assert rational_arith(rational_arith(a, "×", b), "÷", b) == a


@given(fractions, fractions)
def test_results_are_canonical(a, b):
    r = rational_arith(a, "*", b)
    assert r.denominator > 0
    assert math.gcd(abs(r.numerator), r.denominator) == 1


@pytest.mark.parametrize("n, expected", [(0, 1 + 0j), (3, -1 + 0j), (6, 1 + 0j), (-3, -1 + 0j)])
def test_unit_root_power_examples(n, expected):
    assert unit_root_power(n) == expected


def test_unit_root_table_matches_exponential():
    for k in range(6):
        assert abs(unit_root_power(k) - cmath.exp(1j * math.pi * k / 3)) < 1e-15


@given(st.integers(-10**6, 10**6))
def test_unit_root_power_is_table_periodic(n):
    assert unit_root_power(n) == unit_root_power(n % 6)


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_unit_root_power_is_multiplicative(n, m):
    z = unit_root_power(n) * unit_root_power(m)
    w = unit_root_power(n + m)
    assert abs(z.real - w.real) < 1e-15 and abs(z.imag - w.imag) < 1e-15


def test_format_scalar():
    assert format_scalar(Fraction(2, 63)) == "2/63"
    assert format_scalar(Fraction(9)) == "9"
    assert format_scalar(0.1) == "0.10000000000000001"


def test_complex_ingestion():
    assert complex_("1/2", -3) == complex(0.5, -3.0)
    with pytest.raises(NonFiniteValue):
        complex_(1, float("inf"))
