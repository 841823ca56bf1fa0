from fractions import Fraction

import pytest

from conftest import GOOD1, POLE_AT_MINUS_HALF
from wzpairs.ansatz import (DEFAULT_GRID, Family, NoSolution, Solution, Underdetermined, assemble_H, build_ansatz,
                            coefficient_slots, expand_grid, run_candidate, search, solve_H, split_denominators)
from wzpairs.catalog import get_entry
from wzpairs.dsl import parse_poly, parse_term
from wzpairs.hyperterm import shift_quotient
from wzpairs.polyalg import LinExpr, Poly2

S1_J = {"j1": -1, "j2": 0, "j4": Fraction(1, 2), "j5": 1, "j6": 1, "j7": Fraction(1, 2)}


def _ansatz(t, a, b, degree=1):
    qn, qk = shift_quotient(t, "n"), shift_quotient(t, "k")
    return build_ansatz(split_denominators(qn, (-1, 0)), split_denominators(qk, (0, -1)), a, b, degree)


def _lin(const, **coeffs):
    out = LinExpr.lift(const)
    for name, c in coeffs.items():
        out = out + LinExpr.symbol(name, c)
    return out


@pytest.fixture(scope="module")
def good1():
    return parse_term(GOOD1)


@pytest.fixture(scope="module")
def h1(good1):
    return assemble_H(good1, _ansatz(good1, 7, 51))


def test_splits_of_good1(good1):
    sn = split_denominators(shift_quotient(good1, "n"), (-1, 0))
    sk = split_denominators(shift_quotient(good1, "k"), (0, -1))
    assert sn.keep_poly() == parse_poly("2n+k+1")
    assert sk.keep_poly() == parse_poly("2n-2k-1")


def test_ansatz_shape(good1):
    ans = _ansatz(good1, 7, 51)
    assert ans.unknowns == ("y", "d10", "d01", "d00", "e10", "e01", "e00")
    assert ans.R_den == parse_poly("2n+k+1")
    assert ans.S_den == parse_poly("2n-2k-1")


def test_H_degree_and_slots(h1):
    assert h1.degree() == 5
    assert coefficient_slots(h1) == 21


# w_ij stands for the product y*d_ij
@pytest.mark.parametrize("mono, expected", [
    ((5, 0), _lin(-58752, e10=612)),
    ((4, 0), _lin(-125568, e10=1512, e00=612)),
    ((3, 0), _lin(-60192, e10=1187, e00=1476, y=-6528)),
    ((2, 0), _lin(23328, e10=278, e00=1151, y=-7424, w10=-64)),
    ((4, 1), _lin(-29376, e10=1152, d10=-576, e01=612)),
    ((1, 4), _lin(0, w10=-288, d10=288, e01=144, w01=-288, d01=576)),
    ((0, 0), _lin(2016, e10=-2, y=-224, e00=-2, w01=-32, w00=-32)),
])
def test_published_H_coefficients(h1, mono, expected):
    assert h1.coeff(*mono) == expected


def test_solution1(h1):
    sol = solve_H(h1)
    assert isinstance(sol, Solution)
    assert sol.y == 1
    assert sol.d_values() == {"d10": 90, "d01": 24, "d00": 28}
    assert sol.e_values() == {"e10": 96, "e01": -48, "e00": -32}
    # the linearized products agree with y*d
    vals = sol.values()
    assert all(vals["w" + d[1:]] == sol.y * v for d, v in sol.d_values().items())


def test_solution_zeroes_H(h1):
    vals = solve_H(h1).values()
    assert h1.substitute(vals).is_zero()


def test_wrong_a_b_has_no_solution(good1):
    assert isinstance(solve_H(assemble_H(good1, _ansatz(good1, 7, 50))), NoSolution)


def test_zero_H_is_underdetermined():
    assert isinstance(solve_H(Poly2.zero()), Underdetermined)


def test_family_reproduces_good1(good1):
    fam = Family("bin2", Fraction(1, 3), Fraction(1, 3))
    assert fam.free_slots() == ("j1", "j2", "j4", "j5", "j6", "j7")
    assert fam.instantiate(S1_J, Fraction(-1, 16)) == good1


def test_expand_grid_counts():
    fam = Family("bin1", Fraction(1, 2), Fraction(1, 4))
    assert len(expand_grid(fam, [0, 1])) == 2**5
    assert len(expand_grid(Family("bin1", Fraction(1, 3)), {"j1": [0, 1], "j2": [1], "j4": [1], "j5": [2]})) == 2
    assert len(DEFAULT_GRID) == 15


def test_expand_grid_is_sorted():
    js = expand_grid(Family("bin1", Fraction(1, 3)), [1, -1, 0])
    keys = [tuple(j[s] for s in sorted(j)) for j in js]
    assert keys == sorted(keys)


def test_run_candidate_found():
    target = get_entry("solution1")
    c = run_candidate(Family("bin2", Fraction(1, 3), Fraction(1, 3)), S1_J, target)
    assert c.status == "found"
    assert c.pair == target.pair()


def test_run_candidate_pole():
    fam = Family("bin1", Fraction(1, 3), Fraction(1, 3))
    c = run_candidate(fam, {"j1": -1, "j2": 0, "j4": 1, "j5": 2}, get_entry("solution1"))
    assert c.status == "rejected-pole"
    assert pole_witness(POLE_AT_MINUS_HALF) in c.detail


def pole_witness(text):
    from wzpairs.hyperterm import pole_prefilter
    return str(pole_prefilter(parse_term(text)).witness)


def test_search_empty_grid():
    assert search(Family("bin1", Fraction(1, 2)), get_entry("tableI-z-1"), []) == []


def test_search_parallel_matches_serial():
    fam = Family("bin1", Fraction(1, 2), Fraction(1, 4))
    grid = {"j1": [-1, 0], "j2": [-1, 0], "j3": [0, 1], "j4": [1], "j5": [1]}
    target = get_entry("morefor1")
    one = search(fam, target, grid, jobs=1)
    two = search(fam, target, grid, jobs=2)
    assert [(c.j, c.status) for c in one] == [(c.j, c.status) for c in two]
    assert [c.pair for c in one if c.status == "found"] == [target.pair()]
