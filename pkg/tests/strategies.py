from fractions import Fraction

from hypothesis import strategies as st

from wzpairs.hyperterm import HyperTerm, PochFactor
from wzpairs.polyalg import AffineForm, FactoredRational, Poly2

# built from two integers; st.fractions is much slower to draw
small_q = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))
slopes = st.sampled_from([Fraction(x) for x in (-2, -1, 0, 1, 2)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2)])


@st.composite
def poly2(draw, max_terms=6, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i, j = draw(st.integers(0, max_deg)), draw(st.integers(0, max_deg))
        terms[(i, j)] = draw(small_q)
    return Poly2(terms)


@st.composite
def affine(draw, nonconstant=True):
    cn, ck = draw(small_q), draw(small_q)
    if nonconstant and cn == 0 and ck == 0:
        cn = Fraction(1)
    return AffineForm(draw(small_q), cn, ck)


@st.composite
def factored(draw):
    scale = draw(small_q.filter(lambda q: q != 0))
    factors = draw(st.lists(st.tuples(affine(), st.integers(-3, 3).filter(bool)), max_size=4))
    return FactoredRational.of(scale, factors)


@st.composite
def hyperterm(draw):
    """Random proper terms with integer-valued k-raised bases."""
    z = draw(st.fractions(min_value=-1, max_value=1, max_denominator=64).filter(lambda q: q != 0))
    factors = []
    for _ in range(draw(st.integers(1, 5))):
        c0 = draw(st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(1)]))
        slope, e = draw(slopes), draw(st.sampled_from([1, -1, 2]))
        factors.append(PochFactor("n", AffineForm(c0, 0, slope), e))
        if slope.denominator == 2:
            # a half slope only balances together with its c0 + 1/2 partner
            factors.append(PochFactor("n", AffineForm(c0 + Fraction(1, 2), 0, slope), e))
    for _ in range(draw(st.integers(0, 2))):
        c0 = draw(st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1)]))
        factors.append(PochFactor("k", AffineForm(c0), draw(st.sampled_from([1, -1]))))
    return HyperTerm(z, tuple(factors))


points = st.tuples(st.integers(-6, 6), st.integers(-6, 6))
