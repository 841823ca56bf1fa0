from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import affine, factored, points, poly2
from wzpairs.polyalg import (AffineForm, FactoredRational, LinExpr, Poly2, divide_exact, format_factored,
                             format_poly)

n, k = Poly2.var("n"), Poly2.var("k")


def test_format_graded_lex():
    p = 3 * k**2 + n**2 * k + 2 * n + 1
    assert format_poly(p) == "n^2*k+3*k^2+2*n+1"


def test_degree_and_slots():
    p = (n + k + 1) ** 5
    assert p.degree() == 5
    assert len(p.monomials()) == 21


def test_shift_and_substitute():
    p = n * k + n
    assert p.shift("n", 1) == (n + 1) * k + n + 1
    assert p.substitute_var("k", 2) == 3 * n


def test_divide_exact():
    a, b = 2 * n + k + 1, n - 3 * k
    assert divide_exact(a * b, b) == a
    assert divide_exact(a * b + 1, b) is None


def test_affine_primitive():
    c, f = AffineForm(Fraction(1, 2), 1, Fraction(-1, 2)).primitive()
    assert c * f.to_poly() == AffineForm(Fraction(1, 2), 1, Fraction(-1, 2)).to_poly()
    assert f.is_primitive()


def test_factored_display():
    q = FactoredRational.of(Fraction(-1, 144), [(AffineForm(1, 2, -2), 1), (AffineForm(1, 1, 0), -1)])
    assert format_factored(q) == "-(2n-2k+1)/(144(n+1))"


def test_factored_zero_scale_rejected():
    with pytest.raises(ValueError):
        FactoredRational(Fraction(0))


def test_linexpr_substitute():
    e = LinExpr.symbol("d10", 3) + LinExpr.symbol("y") * 2 + 5
    assert e.substitute({"y": Fraction(1)}) == LinExpr.symbol("d10", 3) + 7
    assert e.evaluate({"y": 1, "d10": 2}) == 13


@given(poly2(), poly2(), poly2())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly2.zero()


@given(poly2(), poly2(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(*pt) == a.evaluate(*pt) * b.evaluate(*pt)
    assert (a + b).evaluate(*pt) == a.evaluate(*pt) + b.evaluate(*pt)


@given(poly2(), st.integers(-3, 3), points)
def test_shift_matches_evaluation(a, d, pt):
    assert a.shift("n", d).evaluate(*pt) == a.evaluate(pt[0] + d, pt[1])
    assert a.shift("k", d).evaluate(*pt) == a.evaluate(pt[0], pt[1] + d)


@given(factored(), factored(), points)
def test_factored_product_matches_evaluation(a, b, pt):
    try:
        va, vb = a.evaluate(*pt), b.evaluate(*pt)
    except ZeroDivisionError:
        return
    assert (a * b).evaluate(*pt) == va * vb


@given(factored(), points)
def test_factored_expand_matches_evaluation(a, pt):
    num, den = a.expand()
    if den.evaluate(*pt) == 0:
        return
    assert num.evaluate(*pt) / den.evaluate(*pt) == a.evaluate(*pt)


@given(factored())
def test_factored_inverse(a):
    assert (a * a.inverse()).is_one()


@given(affine(), st.integers(-2, 2))
def test_affine_shift(f, d):
    assert f.shift("n", d).to_poly() == f.to_poly().shift("n", d)
