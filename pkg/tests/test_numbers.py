from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wzpairs.numbers import (BigFloat, DivisionByZero, digits_to_bits, pi_approx, pi_machin,
                             pi_takano, rational_from_digits, rational_normalize, sqrt_rational)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
nonzero = fractions.filter(lambda q: q != 0)


def test_rational_normalize():
    assert rational_normalize(6, -4) == Fraction(-3, 2)
    with pytest.raises(DivisionByZero):
        rational_normalize(1, 0)


def test_pi_two_formulas_agree():
    bits = digits_to_bits(200)
    a, b = pi_machin(bits), pi_takano(bits)
    assert (a - b).compare(0) == 0
    assert a.correct_digits() >= 190


def test_pi_against_mpmath():
    with mpmath.workdps(120):
        ref = Fraction(mpmath.nstr(mpmath.pi, 118, strip_zeros=False))
    x = pi_approx(100)
    assert abs(x.center() - ref) < Fraction(1, 10**99)
    assert x.contains(ref) or abs(x.center() - ref) <= x.radius() + Fraction(1, 10**110)


def test_to_decimal_pi():
    # rounded, not truncated
    assert pi_approx(30).to_decimal(30) == "3.141592653589793238462643383280"


def test_sqrt_rational_encloses():
    r = sqrt_rational(Fraction(2), 50)
    assert r.lo() ** 2 <= 2 <= r.hi() ** 2


@given(fractions, fractions)
def test_arithmetic_encloses_exact(a, b):
    x, y = BigFloat.from_fraction(a, 96), BigFloat.from_fraction(b, 96)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)


@given(fractions, nonzero)
def test_division_encloses_exact(a, b):
    x, y = BigFloat.from_fraction(a, 96), BigFloat.from_fraction(b, 96)
    assert (x / y).contains(a / b)


@settings(max_examples=50)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000))
def test_sqrt_encloses(q):
    r = BigFloat.from_fraction(q, 128).sqrt()
    assert r.lo() ** 2 <= q <= r.hi() ** 2


def test_compare_undecided_is_zero():
    x = BigFloat.from_fraction(Fraction(1, 3), 20)
    y = BigFloat.from_fraction(Fraction(1, 3) + Fraction(1, 10**30), 20)
    assert x.compare(y) == 0
    assert BigFloat.from_fraction(Fraction(1, 3), 200).compare(Fraction(1, 3) + Fraction(1, 10**30)) == -1


def test_rational_from_digits():
    x = BigFloat.from_fraction(Fraction(256, 3), 128)
    assert rational_from_digits(x) == Fraction(256, 3)
