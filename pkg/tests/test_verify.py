from fractions import Fraction

import mpmath
import pytest

from wzpairs.catalog import get_entry
from wzpairs.dsl import parse_rational_function, parse_term
from wzpairs.verify import (Divergent, WZPair, boundary_check, certificate, check_wz_exact, constancy_check,
                            limit_constant_check, match_pi, sum_series, telescope_partial, verify_pair)


@pytest.fixture(scope="module")
def sol1():
    return get_entry("solution1").pair()


def _perturbed(p, R_text):
    return WZPair(p.B, p.y, parse_rational_function(R_text), p.S)


def _master_residual(p, n, k):
    """y*Qk*R(n,k+1) - R(n,k) - Qn*S(n+1,k) + S(n,k), evaluated from raw term values."""
    t = p.term
    b = t.value(n, k)
    g = lambda m, j: t.value(m, j) * p.R_at(m, j)  # noqa: E731
    f = lambda m, j: t.value(m, j) * p.S_at(m, j)  # noqa: E731
    return (f(n + 1, k) - f(n, k) - g(n, k + 1) + g(n, k)) / b


@pytest.mark.parametrize("eid", ["solution1", "solution2", "morefor1", "morefor6", "morefor9", "morefor11"])
def test_wz_identity_pointwise(eid):
    p = get_entry(eid).pair()
    for n in range(0, 6):
        for k in range(0, 4):
            try:
                assert _master_residual(p, n, k) == 0
            except ZeroDivisionError:
                continue


def test_exact_check_certifies(sol1):
    r = check_wz_exact(sol1)
    assert r.certified and r.residual.is_zero()


def test_perturbation_fails(sol1):
    bad = _perturbed(sol1, "((51n+7)(2n+1)+k(90n+24k+29))/(2n+k+1)")
    r = check_wz_exact(bad)
    assert not r.certified and not r.residual.is_zero()
    assert any(_master_residual(bad, n, 1) != 0 for n in range(4))


def test_certificate_is_R_over_S(sol1):
    c = certificate(sol1)
    num, den = c.num, c.den
    for n, k in [(1, 0), (2, 3), (5, 1)]:
        assert num.evaluate(n, k) / den.evaluate(n, k) == sol1.R_at(n, k) / sol1.S_at(n, k)
    assert c.points_checked == 20


@pytest.mark.parametrize("k", [0, 1, 2, Fraction(1, 2)])
def test_telescoping(sol1, k):
    r = telescope_partial(sol1, 100, k)
    assert r.holds and r.F0 == 0


def test_telescoping_detects_perturbation(sol1):
    bad = _perturbed(sol1, "((51n+7)(2n+1)+k(90n+24k+29))/(2n+k+1)")
    assert not telescope_partial(bad, 30, 1).holds


def _mp_sum(entry_id, dps=50):
    e = get_entry(entry_id)
    s = e.s
    with mpmath.workdps(dps):
        f = lambda n: (mpmath.mpf(e.z.numerator) / e.z.denominator) ** n * mpmath.rf(0.5, n) * \
            mpmath.rf(mpmath.mpf(s.numerator) / s.denominator, n) * \
            mpmath.rf(1 - mpmath.mpf(s.numerator) / s.denominator, n) / mpmath.rf(1, n) ** 3 * (e.a + e.b * n)  # noqa: E731
        return mpmath.nsum(f, [0, mpmath.inf])


@pytest.mark.parametrize("eid", ["tableI-z-1/4", "tableI-z1/64", "tableII-z1/2", "tableII-z-1/16"])
def test_sum_against_mpmath(eid):
    got = sum_series(get_entry(eid).series_pair(), 0, 40)
    ref = _mp_sum(eid)
    assert abs(float(got.value.center()) - float(ref)) < 1e-15
    with mpmath.workdps(50):
        assert abs(mpmath.mpf(got.value.to_decimal(40)) - ref) < mpmath.mpf(10) ** -38


def test_sum_tail_bound_and_direct(sol1):
    s = sum_series(sol1, 0, 40)
    assert not s.accelerated
    assert s.tail_bound < Fraction(1, 10**41)


def test_sum_accelerated_on_boundary():
    s = sum_series(get_entry("morefor1").pair(), 0, 30)
    assert s.accelerated


def test_divergent_series():
    p = WZPair(parse_term("z=2 * poch(1/2;n)^3 / poch(1;n)^3"), 1, parse_rational_function("4n+1"),
               parse_rational_function("0"))
    with pytest.raises(Divergent):
        sum_series(p, 0, 20)


@pytest.mark.parametrize("eid", ["solution1", "morefor7"])
def test_match_pi(eid):
    e = get_entry(eid)
    for k in (0, 2):
        m = match_pi(sum_series(e.pair(), k, 40), e, k)
        assert m.matched
        assert abs(m.delta.center()) < Fraction(1, 10**35)


def test_match_pi_rejects_wrong_constant():
    e = get_entry("morefor5")
    m = match_pi(sum_series(e.pair(), 0, 40), e, 0, c_squared=Fraction(4, 3))
    assert not m.matched


def test_constancy(sol1):
    r = constancy_check(sol1, [0, 1, 2, 3], 30)
    assert r.consistent
    assert "not a proof" in r.label
    assert constancy_check(sol1, [2], 30).consistent
    with pytest.raises(ValueError):
        constancy_check(sol1, [0, Fraction(1, 2)], 30)


def test_limit_solution2():
    r = limit_constant_check(get_entry("solution2").pair(), 30, 432)
    assert r.applicable and r.agrees
    assert r.z_prime == Fraction(-1, 8)
    assert r.prefactor_squared == 648
    assert r.c_squared == 432


def test_limit_not_applicable_for_solution1(sol1):
    assert limit_constant_check(sol1).status == "NotApplicable"


def test_boundary(sol1):
    assert boundary_check(sol1, 0).decreasing


def test_verify_pair_all_green():
    e = get_entry("morefor6")
    records = verify_pair(e.pair(), e, precision=30, ks=(0, 1))
    assert all(r.ok() for r in records), [r for r in records if not r.ok()]
    names = [r.name for r in records]
    assert names[:2] == ["wz_identity", "certificate"]
    assert "match_pi[k=1]" in names
