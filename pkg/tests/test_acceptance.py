"""The ten acceptance criteria, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import os
import sys
from fractions import Fraction

import mpmath
from hypothesis import given, settings

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import LINES, criterion  # noqa: E402
from conftest import GOOD1, GOOD2, POLE_AT_MINUS_HALF, TERMINATES_AT_TENTH  # noqa: E402
from strategies import factored, points, poly2  # noqa: E402
from wzpairs.ansatz import (Family, Solution, assemble_H, build_ansatz, coefficient_slots, discover, expand_grid,  # noqa: E402
                            solve_H, split_denominators)
from wzpairs.catalog import builtin_catalog, get_entry  # noqa: E402
from wzpairs.dsl import parse_poly, parse_rational_function, parse_term, print_term  # noqa: E402
from wzpairs.hyperterm import PoleEncountered, pole_prefilter, shift_quotient, terminating_prefilter  # noqa: E402
from wzpairs.numbers import digits_to_bits, pi_approx  # noqa: E402
from wzpairs.polyalg import AffineForm, FactoredRational  # noqa: E402
from wzpairs.verify import limit_constant_check, match_pi, sum_series, telescope_partial, term_ratio  # noqa: E402

WZ_IDS = ["solution1", "solution2"] + [f"morefor{i}" for i in range(1, 12)]


def _solve(t, a, b):
    qn, qk = shift_quotient(t, "n"), shift_quotient(t, "k")
    ans = build_ansatz(split_denominators(qn, (-1, 0)), split_denominators(qk, (0, -1)), a, b)
    h = assemble_H(t, ans)
    return ans, h, solve_H(h)


@criterion(1, "shift quotients of good1 match the published factored forms", 1)
def test_quotient_regression():
    t = parse_term(GOOD1)
    form = lambda c0, cn, ck: AffineForm(c0, cn, ck)  # noqa: E731
    qn = shift_quotient(t.with_z(1), "n")
    assert qn == FactoredRational.of(Fraction(1, 9),
                                     [(form(1, 2, -2), 1), (form(1, 2, 2), 1), (form(1, 3, 0), 1), (form(2, 3, 0), 1),
                                      (form(1, 2, 1), -1), (form(2, 2, 1), -1), (form(1, 1, 1), -1),
                                      (form(1, 1, 0), -1)])
    qk = shift_quotient(t, "k")
    assert qk == FactoredRational.of(Fraction(-1, 9),
                                     [(form(1, 2, 2), 1), (form(1, 0, 3), 1), (form(2, 0, 3), 1),
                                      (form(-1, 2, -2), -1), (form(1, 2, 1), -1), (form(1, 1, 1), -1)])
    assert qk.scale == Fraction(-1, 9)
    # with z = -1/16 folded in, the n-quotient scale is -1/144
    assert shift_quotient(t, "n").scale == Fraction(-1, 144)


@criterion(2, "Solution 1 coefficients, degree-5 H with 21 slots, H vanishes", 5)
def test_solver_regression():
    ans, h, sol = _solve(parse_term(GOOD1), 7, 51)
    assert h.degree() == 5 and coefficient_slots(h) == 21
    assert isinstance(sol, Solution) and sol.y == 1
    assert sol.d_values() == {"d10": 90, "d01": 24, "d00": 28}
    assert sol.e_values() == {"e10": 96, "e01": -48, "e00": -32}
    assert h.substitute(sol.values()).is_zero()
    R, S = ans.instantiate(sol)
    assert R == parse_rational_function("((51n+7)(2n+1)+k(90n+24k+28))/(2n+k+1)")
    assert S == parse_rational_function("16n(6n-3k-2)/(2n-2k-1)")


@criterion(3, "Solution 2 R and S numerators, y = 1", 5)
def test_solution2_regression():
    ans, _, sol = _solve(parse_term(GOOD2), 7, 51)
    assert isinstance(sol, Solution) and sol.y == 1
    R, S = ans.instantiate(sol)
    assert R == (parse_poly("(51n+7)(2n+1)+k(114n+36k+37)"), parse_poly("2n+k+1"))
    S_num, S_den = parse_rational_function("-9n(6n^2+30nk+13n-7k-3)/((3k+1)(3k+2))")
    assert S == (S_num, S_den)
    # the numerator proper, before the constant-free denominator is normalised
    assert S[0] * 2 == parse_poly("-9n(6n^2+30nk+13n-7k-3)") * 2


@criterion(4, "exact telescoping N=100 at k=0,1,2 for all 13 pairs, F(0,k)=0", 30)
def test_exact_telescoping():
    for eid in WZ_IDS:
        p = get_entry(eid).pair()
        for k in (0, 1, 2):
            r = telescope_partial(p, 100, k)
            assert r.holds, (eid, k)
            assert r.F0 == 0, (eid, k)
    return f"{len(WZ_IDS) * 3} exact identities"


@criterion(5, "(pi V/rho(k))^2 = c^2 within 1e-35 at k=0..3, 40 digits", 120)
def test_numerical_matches():
    ids = [f"morefor{i}" for i in range(2, 12)] + ["solution1", "solution2"]
    worst = Fraction(0)
    for eid in ids:
        e = get_entry(eid)
        for k in range(4):
            s = sum_series(e.pair(), k, 40)
            m = match_pi(s, e, k)
            assert m.matched, (eid, k)
            gap = m.delta.abs_upper()
            assert gap < Fraction(1, 10**35), (eid, k, float(gap))
            worst = max(worst, gap)
    return f"{len(ids) * 4} sums, worst |delta| <= {float(worst):.1e}"


def _direct_bracket(p, k, N):
    """Two partial sums around the value, valid once |a_{n+1}/a_n| < 1 for all n >= N (exact check)."""
    num, den = term_ratio(p, k)
    gap = den.shift("n", N) ** 2 - num.shift("n", N) ** 2
    assert gap.constant_value() > 0 and all(c >= 0 for c in gap.terms.values())
    values = p.term.n_values(k, N + 2)
    terms = [v * p.R_at(n, k) for n, v in enumerate(values)]
    s_lo = sum(terms[: N + 1])
    s_hi = s_lo + terms[N + 1]
    return min(s_lo, s_hi), max(s_lo, s_hi)


@criterion(6, "morefor1 (z=-1): k=0 to >=20 digits, k=1 to >=30 digits", 30)
def test_slow_alternating():
    e = get_entry("morefor1")
    p = e.pair()
    bits = digits_to_bits(60)
    pi = pi_approx(60).with_precision(bits)
    s0 = sum_series(p, 0, 25)
    assert s0.accelerated
    assert ((s0.enclosure() * pi - 2).abs_upper()) < Fraction(1, 10**20)
    s1 = sum_series(p, 1, 32)
    # the n-sum without y^k and the k-raised part, against 2/pi * (1/4) * (16/3)
    series = s1.enclosure().with_precision(bits) / s1.k_part  # k_part carries y^k too
    err1 = (series - 2 * Fraction(1, 4) * Fraction(16, 3) / pi).abs_upper()
    assert err1 < Fraction(1, 10**30)
    # independent check from plain partial sums
    lo, hi = _direct_bracket(p, 1, 2000)
    assert lo <= s1.value.center() <= hi
    return f"k=1 via accelerated tail (|err| <= {float(err1):.1e}); 2000-term direct bracket width {float(hi - lo):.1e}"


@criterion(7, "prefilters: pole at k=-1/2, terminating at k=1/10, good1/good2 accepted", 10)
def test_prefilters():
    v = pole_prefilter(parse_term(POLE_AT_MINUS_HALF))
    assert not v.accepted and v.witness == Fraction(-1, 2)
    v = terminating_prefilter(parse_term(TERMINATES_AT_TENTH), get_entry("tableI-z-1"))
    assert not v.accepted and v.witness == Fraction(1, 10)
    for text, eid in ((GOOD1, "solution1"), (GOOD2, "solution2")):
        t = parse_term(text)
        assert pole_prefilter(t).accepted
        assert terminating_prefilter(t, get_entry(eid)).accepted


@criterion(8, "discover over a <=500 grid returns Solution 1", 120)
def test_discovery():
    fam = Family("bin2", Fraction(1, 3), Fraction(1, 3))
    h = Fraction(1, 2)
    grid = {"j1": [-1, -h, 0, 1], "j2": [-1, 0, 1], "j4": [h, 1], "j5": [1, 2], "j6": [0, 1, 2], "j7": [h, 1]}
    size = len(expand_grid(fam, grid))
    assert size <= 500
    target = get_entry("tableII-z-1/16")
    pairs = discover(fam, target, grid, degree=1, jobs=1)
    assert get_entry("solution1").pair() in pairs
    return f"{size} candidates, {len(pairs)} pair(s) found"


@criterion(9, "k -> oo limit of Solution 2 is (18 sqrt2/pi) sum (-1/8)^n C(2n,n) = 12 sqrt3/pi", 10)
def test_limit_constant():
    r = limit_constant_check(get_entry("solution2").pair(), 30, 432)
    assert r.applicable and r.agrees
    assert r.z_prime == Fraction(-1, 8)
    assert r.prefactor_squared == 648  # (18 sqrt 2)^2
    assert r.c_squared == 432  # (12 sqrt 3)^2
    assert (r.series - r.closed_form).abs_upper() < Fraction(1, 10**30)
    with mpmath.workdps(40):
        ref = 1 / mpmath.sqrt(mpmath.mpf(3) / 2)
        assert abs(mpmath.mpf(r.series.to_decimal(35)) - ref) < mpmath.mpf(10) ** -30


@settings(max_examples=1000, deadline=None, database=None)
@given(poly2(), poly2(), poly2(), factored(), factored(), points)
def _algebra_laws(a, b, c, f, g, pt):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).evaluate(*pt) == a.evaluate(*pt) * b.evaluate(*pt)
    assert (f * g) * g.inverse() == f
    try:
        assert (f * g).evaluate(*pt) == f.evaluate(*pt) * g.evaluate(*pt)
    except ZeroDivisionError:
        pass


@criterion(10, "DSL round trip, 1000 random algebra cases, quotient vs direct at 30 points per term", 60)
def test_property_suites():
    catalog = builtin_catalog()
    for e in catalog:
        assert parse_term(print_term(e.term)) == e.term
    _algebra_laws()
    checked = 0
    for e in catalog:
        t = e.term if not e.has_pair else e.pair().term
        qn, qk = shift_quotient(t, "n"), shift_quotient(t, "k")
        done = 0
        for n in range(0, 12):
            for k in range(0, 6):
                if done == 30:
                    break
                try:
                    here = t.value(n, k)
                    if here == 0:
                        continue
                    assert qn.evaluate(n, k) == t.value(n + 1, k) / here
                    assert qk.evaluate(n, k) == t.value(n, k + 1) / here
                except (ZeroDivisionError, PoleEncountered):
                    continue
                done += 1
        assert done == 30, e.id
        checked += done
    return f"{len(catalog)} terms, {checked} exact points"


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except BaseException:
                failed += 1
    print("\n".join(LINES))
    sys.exit(1 if failed else 0)
