"""Undetermined-coefficient search for WZ pairs of the form G = z^n y^k B R, F = z^n y^k B S.

Pipeline for one term B:

1. shift quotients of B in n and k;
2. split each denominator into the factors that survive at a test point
   ((-1, 0) for the n-quotient, (0, -1) for the k-quotient) and the rest;
3. template R = ((a+bn) P(n,0) + k U(n,k)) / P(n,k) and S = n V(n,k) / Q(n,k)
   with unknown coefficients d_ij (in U) and e_ij (in V);
4. clear denominators in  y Qk R(n,k+1) - R(n,k) = Qn S(n+1,k) - S(n,k)
   to get a polynomial H whose coefficients are linear once every product
   y*d_ij is renamed w_ij;
5. solve exactly, then demand w_ij = y*d_ij.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .hyperterm import (HyperTerm, NotHypergeometric, PochFactor, pole_prefilter, shift_quotient,
                        terminating_prefilter)
from .numbers import InsufficientPrecision, as_fraction
from .polyalg import AffineForm, FactoredRational, LinExpr, Poly2, symbol_sort_key


class InconsistentBilinear(ArithmeticError):
    """The linear system is solvable but w_ij = y*d_ij fails."""


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class DenomSplit:
    keep: tuple[AffineForm, ...]  # nonzero at the test point (P_r or Q_s)
    drop: tuple[AffineForm, ...]  # vanish there (P_r' or Q_s')
    test_point: tuple[Fraction, Fraction]

    @property
    def degree(self) -> int:
        return len(self.keep)

    def keep_poly(self) -> Poly2:
        return reduce(lambda acc, f: acc * f.to_poly(), self.keep, Poly2.one())


def split_denominators(q: FactoredRational, test_point) -> DenomSplit:
    """Partition the denominator factors (with multiplicity) by vanishing at ``test_point``."""
    n0, k0 = (as_fraction(x) for x in test_point)
    keep, drop = [], []
    for f, mult in q.denominator_factors():
        (keep if f(n0, k0) != 0 else drop).extend([f] * mult)
    return DenomSplit(tuple(keep), tuple(drop), (n0, k0))


# ---------------------------------------------------------------------------
# ansatz


def _sym(prefix: str, i: int, j: int) -> str:
    return f"{prefix}{i}{j}" if i < 10 and j < 10 else f"{prefix}{i}_{j}"


def _generic_poly(prefix: str, degree: int) -> tuple[Poly2, list[str]]:
    terms, names = {}, []
    for total in range(degree, -1, -1):
        for i in range(total, -1, -1):
            j = total - i
            name = _sym(prefix, i, j)
            terms[(i, j)] = LinExpr.symbol(name)
            names.append(name)
    return Poly2(terms), names


@dataclass(frozen=True)
class Ansatz:
    degree: int
    a: Fraction
    b: Fraction
    split_n: DenomSplit
    split_k: DenomSplit
    U: Poly2
    V: Poly2
    d_names: tuple[str, ...]
    e_names: tuple[str, ...]

    @property
    def unknowns(self) -> tuple[str, ...]:
        return ("y",) + self.d_names + self.e_names

    @property
    def R_num(self) -> Poly2:
        P = self.split_n.keep_poly()
        base = Poly2({(0, 0): self.a, (1, 0): self.b}) * P.substitute_var("k", 0)
        return base + Poly2.var("k") * self.U

    @property
    def R_den(self) -> Poly2:
        return self.split_n.keep_poly()

    @property
    def S_num(self) -> Poly2:
        return Poly2.var("n") * self.V

    @property
    def S_den(self) -> Poly2:
        return self.split_k.keep_poly()

    def instantiate(self, sol: Solution) -> tuple[tuple[Poly2, Poly2], tuple[Poly2, Poly2]]:
        values = {**sol.d_values(), **sol.e_values()}
        R = (self.R_num.substitute(values), self.R_den)
        S = (self.S_num.substitute(values), self.S_den)
        return R, S


def build_ansatz(split_n: DenomSplit, split_k: DenomSplit, a, b, degree: int = 1) -> Ansatz:
    if degree < 1:
        raise ValueError("degree must be at least 1")
    U, d = _generic_poly("d", split_n.degree * degree)
    V, e = _generic_poly("e", split_k.degree * degree)
    return Ansatz(degree, as_fraction(a), as_fraction(b), split_n, split_k, U, V, tuple(d), tuple(e))


# ---------------------------------------------------------------------------
# H(n, k)


def _times_y(c) -> LinExpr:
    """Linearise y * (c0 + sum a_ij d_ij) as c0*y + sum a_ij w_ij."""
    c = LinExpr.lift(c)
    terms = {"y": c.constant} if c.constant else {}
    for s, v in c.terms.items():
        if not s.startswith("d"):
            raise ValueError(f"unexpected unknown {s} in a y-multiplied coefficient")
        terms["w" + s[1:]] = v
    return LinExpr(0, terms)


def _poly_of(f: FactoredRational) -> tuple[Fraction, Poly2, dict[AffineForm, int]]:
    num = Poly2.one()
    for g, e in f.numerator_factors():
        num = num * g.to_poly() ** e
    return f.scale, num, dict(f.denominator_factors())


def _known(num_forms, den_forms) -> FactoredRational:
    return FactoredRational.of(1, [(g, 1) for g in num_forms] + [(g, -1) for g in den_forms])


def _primitive_linear(p: Poly2) -> Poly2:
    """Scale so every rational appearing (constants and symbol coefficients) is an integer with gcd 1."""
    nums = []
    for c in p.terms.values():
        c = LinExpr.lift(c)
        nums.append(c.constant)
        nums.extend(c.terms.values())
    nums = [x for x in nums if x]
    if not nums:
        return p
    den = reduce(math.lcm, (x.denominator for x in nums))
    g = reduce(math.gcd, (int(x * den) for x in nums))
    return p * Fraction(den, g)


def assemble_H(t: HyperTerm, ans: Ansatz, z=None) -> Poly2:
    """Clear denominators in  y Qk R(n,k+1) - R(n,k) - Qn S(n+1,k) + S(n,k).

    Known factors are cancelled in factored form before the least common
    denominator is taken; unknown y*d_ij products are renamed w_ij.
    """
    if z is not None:
        t = t.with_z(z)
    qn = shift_quotient(t, "n")
    qk = shift_quotient(t.with_y(1), "k")
    P = ans.split_n.keep
    Q = ans.split_k.keep
    n_form = AffineForm(0, 1, 0)
    U, V = ans.U, ans.V
    R_num = ans.R_num
    # (known factored part, unknown polynomial part, sign, multiply by y)
    pieces = [
        (qk * _known([], [f.shift("k", 1) for f in P]), R_num.shift("k", 1), 1, True),
        (_known([], P), R_num, -1, False),
        (qn * _known([n_form.shift("n", 1)], [f.shift("n", 1) for f in Q]), V.shift("n", 1), -1, False),
        (_known([n_form], Q), V, 1, False),
    ]
    expanded = [(*_poly_of(known), poly, sign, with_y) for known, poly, sign, with_y in pieces]
    lcd: dict[AffineForm, int] = {}
    for _, _, den, _, _, _ in expanded:
        for g, e in den.items():
            lcd[g] = max(lcd.get(g, 0), e)
    H = Poly2()
    for scale, num, den, poly, sign, with_y in expanded:
        term = num * poly
        for g, e in lcd.items():
            if e > den.get(g, 0):
                term = term * g.to_poly() ** (e - den.get(g, 0))
        term = term * (scale * sign)
        if with_y:
            term = term.map_coefficients(_times_y)
        H = H + term
    return _primitive_linear(H)


def coefficient_slots(h: Poly2) -> int:
    d = h.degree()
    return (d + 1) * (d + 2) // 2 if d >= 0 else 0


# ---------------------------------------------------------------------------
# solving


@dataclass(frozen=True)
class Solution:
    y: Fraction
    d: dict
    e: dict

    def d_values(self) -> dict[str, Fraction]:
        return {_sym("d", i, j): v for (i, j), v in self.d.items()}

    def e_values(self) -> dict[str, Fraction]:
        return {_sym("e", i, j): v for (i, j), v in self.e.items()}

    def values(self) -> dict[str, Fraction]:
        out = {"y": self.y, **self.d_values(), **self.e_values()}
        out.update({"w" + k[1:]: self.y * v for k, v in self.d_values().items()})
        return out

    def __str__(self) -> str:
        parts = [f"y={self.y}"]
        parts += [f"d{i}{j}={v}" for (i, j), v in sorted(self.d.items(), reverse=True)]
        parts += [f"e{i}{j}={v}" for (i, j), v in sorted(self.e.items(), reverse=True)]
        return ", ".join(parts)


@dataclass(frozen=True)
class NoSolution:
    reason: str = "inconsistent linear system"

    def __str__(self) -> str:
        return f"NoSolution({self.reason})"


@dataclass(frozen=True)
class Underdetermined:
    free: tuple[str, ...]

    def __str__(self) -> str:
        return f"Underdetermined(free={', '.join(self.free)})"


def _parse_sym(s: str) -> tuple[int, int]:
    body = s[1:]
    if "_" in body:
        i, j = body.split("_")
        return int(i), int(j)
    return int(body[0]), int(body[1])


def _rref(rows: list[LinExpr], order: list[str]):
    """Exact Gauss-Jordan on equations ``row == 0``; returns (pivots, consistent)."""
    mat = []
    for r in rows:
        if not r:
            continue
        mat.append([r.coefficient(s) for s in order] + [-r.constant])
    pivots: list[tuple[int, int]] = []
    row = 0
    ncol = len(order)
    for col in range(ncol):
        piv = next((i for i in range(row, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for i in range(len(mat)):
            if i != row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        pivots.append((row, col))
        row += 1
        if row == len(mat):
            break
    consistent = all(any(x != 0 for x in r[:-1]) or r[-1] == 0 for r in mat)
    return mat, pivots, consistent


def _solve_linear(eqs: list[LinExpr], order: list[str]):
    mat, pivots, consistent = _rref(eqs, order)
    if not consistent:
        return None, None
    pivot_cols = {c for _, c in pivots}
    free = [s for i, s in enumerate(order) if i not in pivot_cols]
    values = {}
    for r, c in pivots:
        if all(mat[r][j] == 0 for j in range(len(order)) if j != c):
            values[order[c]] = mat[r][-1]
    return values, free


def solve_H(h: Poly2):
    """Solution, NoSolution or Underdetermined; raises InconsistentBilinear."""
    eqs = [LinExpr.lift(h.terms[m]) for m in h.monomials()]
    syms = sorted(h.symbols(), key=symbol_sort_key)
    d_syms = [s for s in syms if s.startswith("d")]
    w_syms = [s for s in syms if s.startswith("w")]
    # every d_ij has a partner w_ij even if one of them dropped out of H
    for s in d_syms:
        if "w" + s[1:] not in syms:
            syms.append("w" + s[1:])
    for s in w_syms:
        if "d" + s[1:] not in syms:
            syms.append("d" + s[1:])
    if "y" not in syms:
        syms.append("y")
    syms = sorted(set(syms), key=symbol_sort_key)
    values, free = _solve_linear(eqs, syms)
    if values is None:
        return NoSolution()
    if free:
        if "y" not in values:
            return Underdetermined(tuple(free))
        # y is pinned: w_ij = y d_ij is now linear; add it and re-solve
        y = values["y"]
        extra = [LinExpr.symbol("w" + s[1:]) - LinExpr.symbol(s, y) for s in syms if s.startswith("d")]
        values, free = _solve_linear(eqs + extra, syms)
        if values is None:
            raise InconsistentBilinear("no solution satisfies w = y*d")
        if free:
            return Underdetermined(tuple(free))
    y = values["y"]
    for s in syms:
        if s.startswith("d") and values["w" + s[1:]] != y * values[s]:
            raise InconsistentBilinear(f"w{s[1:]}={values['w' + s[1:]]} but y*{s}={y * values[s]}")
    d = {_parse_sym(s): values[s] for s in syms if s.startswith("d")}
    e = {_parse_sym(s): values[s] for s in syms if s.startswith("e")}
    return Solution(y, d, e)


# ---------------------------------------------------------------------------
# families of B(n,k) and the search


HALF = Fraction(1, 2)


def _nf(c0, ck=0, e=1) -> PochFactor:
    return PochFactor("n", AffineForm(as_fraction(c0), 0, as_fraction(ck)), e)


def _kf(c0, e=1) -> PochFactor:
    return PochFactor("k", AffineForm(as_fraction(c0)), e)


def d_factors(variant: str, t=None) -> list[PochFactor]:
    """k-raised part D(k)."""
    if variant == "pair":
        t = as_fraction(t)
        return [_kf(t), _kf(1 - t), _kf(1, -2)]
    if variant == "half":
        return [_kf(HALF), _kf(1, -1)]
    if variant == "quartic":
        return [_kf(Fraction(1, 4)), _kf(Fraction(3, 4)), _kf(Fraction(1, 3)), _kf(Fraction(2, 3)),
                _kf(HALF, -2), _kf(1, -2)]
    raise ValueError(f"unknown D(k) variant {variant!r}")


@dataclass(frozen=True)
class Family:
    """B(n,k) shapes parameterised by the slopes j1..j7."""

    shape: str  # bin1 | bin2 | bin3 | fixed
    s: Fraction = HALF
    t: Fraction | None = HALF
    d_variant: str = "pair"
    term: HyperTerm | None = None  # for shape "fixed"

    @property
    def slots(self) -> tuple[str, ...]:
        if self.shape == "fixed":
            return ()
        base = ("j1", "j2", "j3", "j4", "j5")
        if self.shape != "bin1":
            base += ("j6", "j7")
        return base

    @property
    def tied(self) -> dict[str, str]:
        # the (s) and (1-s) factors share a slope unless s = 1/2
        return {} if self.s == HALF or self.shape == "fixed" else {"j3": "j2"}

    def free_slots(self) -> tuple[str, ...]:
        return tuple(s for s in self.slots if s not in self.tied)

    def instantiate(self, j: dict, z) -> HyperTerm:
        if self.shape == "fixed":
            return self.term.with_z(z)
        j = {**j, **{a: j[b] for a, b in self.tied.items()}}
        s = as_fraction(self.s)
        f = [_nf(HALF, j["j1"]), _nf(s, j["j2"]), _nf(1 - s, j["j3"]),
             _nf(1, 0, -1), _nf(1, j["j4"], -1), _nf(1, j["j5"], -1)]
        if self.shape == "bin2":
            f += [_nf(HALF, j["j6"]), _nf(HALF, j["j7"], -1)]
        elif self.shape == "bin3":
            f += [_nf(Fraction(1, 4), j["j6"]), _nf(Fraction(3, 4), j["j6"]),
                  _nf(Fraction(1, 4), j["j7"], -1), _nf(Fraction(3, 4), j["j7"], -1)]
        f += d_factors(self.d_variant, self.t)
        return HyperTerm(z, tuple(f))


DEFAULT_GRID = tuple(sorted({Fraction(i) for i in range(-3, 4)}
                            | {Fraction(s * p, q) for s in (1, -1) for p, q in ((1, 2), (1, 3), (2, 3), (3, 2))}))


def expand_grid(family: Family, grid) -> list[dict]:
    """All j-assignments, sorted lexicographically by the j-vector.

    ``grid`` is either one iterable used for every slot or a mapping
    slot -> iterable (missing slots fall back to ``DEFAULT_GRID``).
    """
    slots = family.free_slots()
    if not slots:
        return [{}]
    if isinstance(grid, dict):
        lists = [sorted({as_fraction(v) for v in grid.get(s, DEFAULT_GRID)}) for s in slots]
    else:
        values = sorted({as_fraction(v) for v in grid})
        lists = [values] * len(slots)
    return [dict(zip(slots, combo)) for combo in itertools.product(*lists)]


@dataclass(frozen=True)
class Candidate:
    j: dict
    status: str
    detail: str = ""
    pair: object = None  # WZPair when found
    solution: Solution | None = None

    def j_key(self) -> tuple:
        return tuple(self.j[s] for s in sorted(self.j))


@dataclass(frozen=True)
class SearchConfig:
    degree: int = 1
    precision: int = 30
    jobs: int = 1


def run_candidate(family: Family, j: dict, target, degree: int = 1, precision: int = 30) -> Candidate:
    from .verify import WZPair, check_wz_exact

    t = family.instantiate(j, target.z)
    try:
        v = pole_prefilter(t)
        if not v.accepted:
            return Candidate(j, "rejected-pole", str(v))
        v = terminating_prefilter(t, target, precision)
        if not v.accepted:
            return Candidate(j, "rejected-terminating", str(v))
        qn = shift_quotient(t, "n")
        qk = shift_quotient(t, "k")
    except NotHypergeometric as exc:
        return Candidate(j, "not-hypergeometric", str(exc))
    except InsufficientPrecision as exc:
        return Candidate(j, "insufficient-precision", str(exc))
    ans = build_ansatz(split_denominators(qn, (-1, 0)), split_denominators(qk, (0, -1)),
                       target.a, target.b, degree)
    h = assemble_H(t, ans)
    try:
        sol = solve_H(h)
    except InconsistentBilinear as exc:
        return Candidate(j, "inconsistent-bilinear", str(exc))
    if isinstance(sol, NoSolution):
        return Candidate(j, "no-solution")
    if isinstance(sol, Underdetermined):
        return Candidate(j, "underdetermined", str(sol))
    R, S = ans.instantiate(sol)
    jtxt = ", ".join(f"{k}={v}" for k, v in j.items())
    pair = WZPair(t, sol.y, R, S, provenance=f"discovered: {family.shape} [{jtxt}]")
    if not check_wz_exact(pair).certified:
        return Candidate(j, "verify-failed", str(sol), None, sol)
    return Candidate(j, "found", str(sol), pair, sol)


def _run_star(args):
    return run_candidate(*args)


def search(family: Family, target, grid=DEFAULT_GRID, degree: int = 1, jobs: int = 1,
           precision: int = 30) -> list[Candidate]:
    """Every candidate with its status, in j-vector order."""
    if not isinstance(grid, dict) and not list(grid):
        return []
    assignments = expand_grid(family, grid)
    args = [(family, j, target, degree, precision) for j in assignments]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_star, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        results = [run_candidate(*a) for a in args]
    return sorted(results, key=Candidate.j_key)


def discover(family: Family, target, grid=DEFAULT_GRID, degree: int = 1, jobs: int = 1) -> list:
    """WZ pairs found over the grid, ordered by j-vector."""
    return [c.pair for c in search(family, target, grid, degree, jobs) if c.status == "found"]
