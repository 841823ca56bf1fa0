"""Certification of WZ pairs ``G = z^n y^k B R``, ``F = z^n y^k B S``.

Exact checks (polynomial identity, certificate, finite telescoping) use
rational arithmetic only.  Infinite sums are evaluated from exact partial
sums with rigorous tail bounds and compared with c/pi through squares, so
no algebraic-number arithmetic is needed.  Constancy in k and the k -> oo
limit are reported as numerical evidence: the analytic step that would turn
them into a proof (Carlson's theorem) is outside what is checked here.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .hyperterm import HyperTerm, PoleEncountered, shift_quotient
from .numbers import (BigFloat, DivisionByZero, InsufficientPrecision, as_fraction, digits_to_bits,
                      pi_approx, sqrt_rational)
from .polyalg import AffineForm, Poly2, divide_exact
from .dsl import normalize_rational_function, print_rational_function, print_term

EVIDENCE_NOTE = "numerical evidence, not a proof (the analytic step is Carlson's theorem)"
DELTA = Fraction(1, 100)
MAX_TERMS = 200_000


class Divergent(ArithmeticError):
    pass


class ZeroS(ValueError):
    pass


@dataclass(frozen=True)
class WZPair:
    B: HyperTerm
    y: Fraction
    R: tuple[Poly2, Poly2]
    S: tuple[Poly2, Poly2]
    provenance: str = field(default="", compare=False)
    id: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "y", as_fraction(self.y))
        object.__setattr__(self, "B", self.B.with_y(1))
        object.__setattr__(self, "R", normalize_rational_function(*self.R))
        object.__setattr__(self, "S", normalize_rational_function(*self.S))

    @property
    def z(self) -> Fraction:
        return self.B.z

    @property
    def term(self) -> HyperTerm:
        """z^n y^k B(n,k)."""
        return self.B.with_y(self.y)

    def R_at(self, n, k) -> Fraction:
        return _rf_eval(self.R, n, k, "R")

    def S_at(self, n, k) -> Fraction:
        return _rf_eval(self.S, n, k, "S")

    def describe(self) -> str:
        return (f"B: {print_term(self.B)}\n"
                f"y: {self.y}\n"
                f"R: {print_rational_function(*self.R)}\n"
                f"S: {print_rational_function(*self.S)}")


def _rf_eval(rf, n, k, name) -> Fraction:
    den = rf[1].evaluate(n, k)
    if den == 0:
        raise PoleEncountered(n, name, f"denominator of {name} vanishes at k={k}")
    return rf[0].evaluate(n, k) / den


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    witness: str | None = None
    bounds: dict = field(default_factory=dict)

    def ok(self) -> bool:
        return self.status in ("Certified", "Matched", "Holds", "Consistent", "Agrees", "NotApplicable", "Evidence")


# ---------------------------------------------------------------------------
# exact WZ identity


@dataclass(frozen=True)
class WZCheck:
    certified: bool
    residual: Poly2

    def __str__(self) -> str:
        return "Certified" if self.certified else f"Failed(residual={self.residual})"


def check_wz_exact(p: WZPair) -> WZCheck:
    """Test F(n+1,k)-F(n,k) = G(n,k+1)-G(n,k) as a cleared polynomial identity.

    Dividing by z^n y^k B(n,k): Qn*S(n+1,k) - S(n,k) = y*Qk*R(n,k+1) - R(n,k).
    """
    qn_num, qn_den = shift_quotient(p.B, "n").expand()
    qk_num, qk_den = shift_quotient(p.term, "k").expand()
    (rn, rd), (sn, sd) = p.R, p.S
    pieces = [
        (qn_num * sn.shift("n", 1), qn_den * sd.shift("n", 1), 1),
        (sn, sd, -1),
        (qk_num * rn.shift("k", 1), qk_den * rd.shift("k", 1), -1),
        (rn, rd, 1),
    ]
    residual = Poly2()
    dens = [d for _, d, _ in pieces]
    for i, (num, _, sign) in enumerate(pieces):
        term = num
        for j, d in enumerate(dens):
            if j != i:
                term = term * d
        residual = residual + term * sign
    return WZCheck(residual.is_zero(), residual)


# ---------------------------------------------------------------------------
# certificate


@dataclass(frozen=True)
class Certificate:
    num: Poly2
    den: Poly2
    points_checked: int

    def __str__(self) -> str:
        return print_rational_function(self.num, self.den)


def _candidate_divisors(p: WZPair) -> list[Poly2]:
    forms: set[AffineForm] = {AffineForm(0, 1, 0), AffineForm(0, 0, 1)}
    for var in ("n", "k"):
        q = shift_quotient(p.term, var)
        forms |= {f for f, _ in q.factors}
        forms |= {f.shift(var, -1) for f, _ in q.factors}
    polys = [f.to_poly() for f in sorted(forms, key=AffineForm.sort_key)]
    polys += [x for x in (p.R[0], p.R[1], p.S[0], p.S[1]) if x.degree() > 0]
    return polys


def _cancel(num: Poly2, den: Poly2, candidates) -> tuple[Poly2, Poly2]:
    changed = True
    while changed:
        changed = False
        for c in candidates:
            if c.degree() <= 0:
                continue
            qn = divide_exact(num, c)
            if qn is None:
                continue
            qd = divide_exact(den, c)
            if qd is None:
                continue
            num, den = qn, qd
            changed = True
    qn = divide_exact(num, den)
    if qn is not None:
        num, den = qn, Poly2.one()
    num, den = normalize_rational_function(num, den)
    # integral numerator for display; the denominator keeps its positive lead
    scale = math.lcm(*(c.denominator for c in num.terms.values())) if num.terms else 1
    return num * scale, den * scale


def certificate(p: WZPair, points: int = 20, seed: int = 0) -> Certificate:
    """C = R/S with common factors cancelled; G = C*F spot-checked at exact points."""
    if p.S[0].is_zero():
        raise ZeroS("S is identically zero")
    num = p.R[0] * p.S[1]
    den = p.R[1] * p.S[0]
    num, den = _cancel(num, den, _candidate_divisors(p))
    rng = random.Random(seed)
    checked = 0
    attempts = 0
    while checked < points and attempts < 50 * points:
        attempts += 1
        n = rng.randint(0, 40)
        k = Fraction(rng.randint(-60, 60), rng.randint(1, 7))
        try:
            r = p.R_at(n, k)
            s = p.S_at(n, k)
            c_den = den.evaluate(n, k)
            if c_den == 0:
                continue
            c = num.evaluate(n, k) / c_den
        except PoleEncountered:
            continue
        if s == 0:
            continue
        if c * s != r:
            raise AssertionError(f"G != C*F at n={n}, k={k}")
        checked += 1
    return Certificate(num, den, checked)


# ---------------------------------------------------------------------------
# telescoping


@dataclass(frozen=True)
class TelescopeReport:
    holds: bool
    N: int
    k: Fraction
    lhs: Fraction
    rhs: Fraction
    F0: Fraction

    def __str__(self) -> str:
        return (f"sum_(n<{self.N}) [G(n,k+1)-G(n,k)] = F({self.N},k)-F(0,k) at k={self.k}: "
                f"{'holds' if self.holds else 'FAILS'}; F(0,k)={self.F0}")


def telescope_partial(p: WZPair, N: int, k) -> TelescopeReport:
    """Exact finite form of the telescoping identity.

    For non-integer k the common factor y^k (prod (x)_k) is divided out of
    every term, which leaves the identity unchanged.
    """
    k = as_fraction(k)
    anchor = k - (k.numerator // k.denominator)
    t = p.term
    b_k = t.n_values(k, N + 1, anchor)
    b_k1 = t.n_values(k + 1, N, anchor)
    lhs = Fraction(0)
    for n in range(N):
        lhs += b_k1[n] * p.R_at(n, k + 1) - b_k[n] * p.R_at(n, k)
    F0 = b_k[0] * p.S_at(0, k)
    FN = b_k[N] * p.S_at(N, k)
    rhs = FN - F0
    return TelescopeReport(lhs == rhs and F0 == 0, N, k, lhs, rhs, F0)


# ---------------------------------------------------------------------------
# summation


@dataclass(frozen=True)
class SumResult:
    value: BigFloat
    tail_bound: Fraction
    terms_used: int
    accelerated: bool
    partial: Fraction
    k: Fraction
    k_part: Fraction | None = None
    precision: int = 40
    note: str = ""

    def enclosure(self) -> BigFloat:
        """Interval containing the true sum (rounding plus tail)."""
        v = self.value
        extra = math.ceil(self.tail_bound * Fraction(2) ** (-v.exponent)) + 1
        return BigFloat(v.mantissa, v.exponent, v.error + extra, v.precision)

    def __str__(self) -> str:
        how = "accelerated" if self.accelerated else "direct"
        return (f"{self.value.to_decimal(self.precision)} (tail <= {float(self.tail_bound):.3e}, "
                f"{self.terms_used} terms, {how})")


def _univariate(p: Poly2) -> list[Fraction]:
    deg = p.degree_in("n")
    coeffs = [Fraction(0)] * (deg + 1)
    for (i, j), c in p.terms.items():
        assert j == 0
        coeffs[i] += c
    return coeffs


def term_ratio(p: WZPair, k) -> tuple[Poly2, Poly2]:
    """G(n+1,k)/G(n,k) as a rational function of n at fixed k."""
    k = as_fraction(k)
    q = shift_quotient(p.B, "n").substitute_var("k", k)
    qn, qd = q.expand()
    rn = p.R[0].substitute_var("k", k)
    rd = p.R[1].substitute_var("k", k)
    num = qn * rn.shift("n", 1) * rd
    den = qd * rn * rd.shift("n", 1)
    return num, den


class _RatioBound:
    """A burn-in index N and rho < 1 with |r(m)| < rho for every integer m >= N.

    The certificate is exact: rho^2 den(N+x)^2 - num(N+x)^2, as a
    polynomial in x, has non-negative coefficients and a positive constant.
    """

    def __init__(self, num: Poly2, den: Poly2):
        self.num, self.den = num, den
        if num.is_zero():
            self.dn, self.dd, self.lead = 0, 0, Fraction(0)
        else:
            a, b = _univariate(num), _univariate(den)
            self.dn, self.dd = len(a) - 1, len(b) - 1
            self.lead = a[-1] / b[-1]

    @property
    def limit(self) -> Fraction:
        if self.dn > self.dd:
            raise Divergent("term ratio grows without bound")
        return self.lead if self.dn == self.dd else Fraction(0)

    def _holds(self, rho: Fraction, N: int) -> bool:
        gap = (self.den.shift("n", N) ** 2) * rho**2 - self.num.shift("n", N) ** 2
        return gap.constant_value() > 0 and all(c >= 0 for c in gap.terms.values())

    def burn_in(self, rho: Fraction, limit: int = 1 << 24) -> int:
        if self.num.is_zero():
            return 0
        lo, hi = -1, 0
        while not self._holds(rho, hi):
            lo, hi = hi, max(1, 2 * hi)
            if hi > limit:
                raise InsufficientPrecision("no burn-in index found for the term-ratio bound")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._holds(rho, mid):
                hi = mid
            else:
                lo = mid
        return hi


def _term_iter(p: WZPair, k: Fraction):
    """Exact G(n,k) for n = 0, 1, 2, ..."""
    t = p.term
    head = t.k_part_value(int(k)) if k.denominator == 1 else t._k_head(k)
    bases = [(f.base.substitute_var("k", k).c0, f.exponent, f) for f in t.n_factors()]
    b = head
    n = 0
    while True:
        yield n, b * p.R_at(n, k)
        step = t.z
        for c0, e, f in bases:
            x = c0 + n
            if x == 0 and e < 0:
                raise PoleEncountered(n + 1, f)
            step *= x**e
        b *= step
        n += 1


def _chebyshev_T3(N: int) -> int:
    a, b = 1, 3
    if N == 0:
        return 1
    for _ in range(N - 1):
        a, b = b, 6 * b - a
    return b


def _crvz(a: list[Fraction]) -> Fraction:
    """Cohen-Rodriguez Villegas-Zagier weights applied to sum (-1)^j a_j (exact)."""
    n = len(a)
    d = _chebyshev_T3(n)
    b = Fraction(-1)
    c = Fraction(-d)
    s = Fraction(0)
    for j in range(n):
        c = b - c
        s += c * a[j]
        b = Fraction((j + n) * (j - n)) * b / (Fraction(2 * j + 1, 2) * (j + 1))
    return s / d


def sum_series(p: WZPair, k, precision: int = 40) -> SumResult:
    """Sum_{n>=0} G(n,k) with |true - value| <= tail_bound < 10^-precision."""
    k = as_fraction(k)
    target = Fraction(1, 10 ** (precision + 1))
    bits = digits_to_bits(precision + 10)
    k_part = p.term.k_part_value(int(k)) if k.denominator == 1 else None
    num, den = term_ratio(p, k)
    bound = _RatioBound(num, den)
    L = bound.limit
    if abs(L) < 1 - DELTA:
        rho = (abs(L) + 1 - DELTA) / 2
        N = bound.burn_in(rho)
        total = Fraction(0)
        for n, g in _term_iter(p, k):
            if n >= N:
                tail = abs(g) / (1 - rho)
                if tail < target:
                    return SumResult(BigFloat.from_fraction(total, bits), tail, n, False, total, k, k_part,
                                     precision)
            if n > MAX_TERMS:
                raise InsufficientPrecision(f"no tail bound below 1e-{precision} after {n} terms")
            total += g
    if L < 0:
        return _sum_alternating(p, k, precision, target, bits, k_part)
    raise Divergent(f"term ratio tends to {L}; neither geometric nor alternating")


def _log_convex_start(a: list[Fraction]) -> int:
    """First index from which a_j decreases and a_j^2 <= a_(j-1) a_(j+1) across the window."""
    start = 0
    for j in range(1, len(a) - 1):
        if not (a[j] < a[j - 1] and a[j] * a[j] <= a[j - 1] * a[j + 1]):
            start = j + 1
    return start


def _sum_alternating(p: WZPair, k, precision, target, bits, k_part, offset: int = 10, check: int = 8) -> SumResult:
    """Exact head plus Chebyshev-accelerated tail.

    The error bound 2 a_m / T_N(3) is proved when the tail magnitudes form a
    moment sequence.  That is not verified; what is verified is that the
    magnitudes are decreasing and log-convex (a necessary condition) over the
    evaluated window, and that N and N + ``check`` terms agree within the bound.
    """
    terms = _term_iter(p, k)
    g: list[Fraction] = []
    window = 4 * offset
    for n, v in terms:
        g.append(v)
        if len(g) >= window:
            break
    while True:
        a = [abs(x) for x in g]
        m = _log_convex_start(a) + offset
        if a[m] == 0:
            raise InsufficientPrecision("tail term vanishes")
        N = 1
        while 2 * a[m] / _chebyshev_T3(N) >= target:
            N += 1
        need = m + N + check + 1
        if len(g) >= need and _log_convex_start(a) + offset == m:
            break
        for n, v in terms:
            g.append(v)
            if len(g) >= need + offset:
                break
    sign = 1 if g[m] > 0 else -1
    for j in range(m, m + N + check):
        if g[j] * sign * (-1) ** (j - m) <= 0:
            raise InsufficientPrecision(f"terms stop alternating at n={j}")
    head = sum(g[:m], Fraction(0))
    val = head + sign * _crvz(a[m:m + N])
    tail = 2 * a[m] / _chebyshev_T3(N)
    check_val = head + sign * _crvz(a[m:m + N + check])
    if abs(val - check_val) > tail:
        raise InsufficientPrecision("accelerated sums with N and N+8 terms disagree beyond the error bound")
    return SumResult(BigFloat.from_fraction(val, bits), tail, m + N, True, val, k, k_part, precision,
                     note=(f"exact head of {m} terms, Chebyshev-accelerated tail of {N} terms; bound assumes the tail "
                           "magnitudes form a moment sequence (checked: decreasing and log-convex over the window)"))


# ---------------------------------------------------------------------------
# matching against c/pi


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    delta: BigFloat
    tolerance: Fraction
    rho: Fraction
    c_squared: Fraction

    @property
    def status(self) -> str:
        return "Matched" if self.matched else "Mismatched"

    def __str__(self) -> str:
        return (f"{self.status}: (pi*V/rho)^2 - c^2 = {float(self.delta.center()):.3e} "
                f"(+-{float(self.delta.radius()):.1e}), tolerance {float(self.tolerance):.0e}, c^2={self.c_squared}")


def rhs_factor(entry, k: int) -> Fraction:
    """geom^k (1)_k^2 / ((t)_k (1-t)_k), exact at integer k >= 0."""
    from .hyperterm import poch

    t = as_fraction(entry.rhs_t) if entry.rhs_t is not None else None
    val = as_fraction(entry.rhs_geom) ** k
    if t is not None:
        val *= poch(1, k) ** 2 / (poch(t, k) * poch(1 - t, k))
    return val


def match_pi(s: SumResult, entry, k: int, c_squared=None, margin: int = 5) -> MatchResult:
    """|(pi*V/rho(k))^2 - c^2| < 10^-(precision-margin), V the formula's left-hand sum."""
    if k < 0 or as_fraction(k).denominator != 1:
        raise ValueError("match_pi needs a non-negative integer k")
    c2 = as_fraction(entry.c_squared if c_squared is None else c_squared)
    rho = rhs_factor(entry, int(k))
    tol = Fraction(1, 10 ** (s.precision - margin))
    bits = digits_to_bits(s.precision + 15)
    pi = pi_approx(s.precision + 15).with_precision(bits)
    v = s.enclosure().with_precision(bits)
    scale = 1 / rho
    if s.k_part is not None:
        scale /= s.k_part
    x = (pi * v * BigFloat.from_fraction(scale, bits)).square() - BigFloat.from_fraction(c2, bits)
    if x.abs_upper() < tol:
        return MatchResult(True, x, tol, rho, c2)
    if min(abs(x.lo()), abs(x.hi())) > tol and (x.lo() > 0 or x.hi() < 0):
        return MatchResult(False, x, tol, rho, c2)
    raise InsufficientPrecision(f"|(pi V/rho)^2 - c^2| undecided: {float(x.center()):.3e} +- {float(x.radius()):.3e}")


# ---------------------------------------------------------------------------
# evidence: constancy in k, limit k -> oo, vanishing of F(n,k)


@dataclass(frozen=True)
class ConstancyReport:
    consistent: bool
    values: dict
    max_gap: float
    label: str = EVIDENCE_NOTE

    def __str__(self) -> str:
        vals = ", ".join(f"k={k}: {v}" for k, v in self.values.items())
        return f"{'consistent' if self.consistent else 'INCONSISTENT'} ({self.label}); {vals}"


def constancy_check(p: WZPair, ks, precision: int = 30) -> ConstancyReport:
    # at non-integer k the sum is only known up to the anchored k-part
    if any(as_fraction(k).denominator != 1 for k in ks):
        raise ValueError("constancy is compared at integer k only")
    sums = {as_fraction(k): sum_series(p, k, precision) for k in ks}
    encl = {k: s.enclosure() for k, s in sums.items()}
    keys = list(encl)
    ok = True
    gap = 0.0
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            d = encl[keys[i]] - encl[keys[j]]
            gap = max(gap, abs(float(d.center())))
            if d.compare(0) != 0:
                ok = False
    return ConstancyReport(ok, {str(k): s.value.to_decimal(min(precision, 30)) for k, s in sums.items()}, gap)


_SIN2 = {Fraction(1, 2): Fraction(1), Fraction(1, 3): Fraction(3, 4), Fraction(2, 3): Fraction(3, 4),
         Fraction(1, 4): Fraction(1, 2), Fraction(3, 4): Fraction(1, 2), Fraction(1, 6): Fraction(1, 4),
         Fraction(5, 6): Fraction(1, 4)}


@dataclass(frozen=True)
class LimitReport:
    applicable: bool
    reason: str = ""
    z_prime: Fraction | None = None
    prefactor_squared: Fraction | None = None  # (pi * lim D(k) R(n,k))^2
    c_squared: Fraction | None = None  # implied constant, squared
    series: BigFloat | None = None
    closed_form: BigFloat | None = None
    agrees: bool = False
    label: str = EVIDENCE_NOTE

    @property
    def status(self) -> str:
        if not self.applicable:
            return "NotApplicable"
        return "Agrees" if self.agrees else "Disagrees"

    def __str__(self) -> str:
        if not self.applicable:
            return f"NotApplicable: {self.reason}"
        return (f"{self.status}: lim_k sum G = sqrt({self.prefactor_squared})/pi * sum ({self.z_prime})^n C(2n,n); "
                f"closed form 1/sqrt(1-4z') = {self.closed_form}, series = {self.series}; "
                f"implied c^2 = {self.c_squared} ({self.label})")


def _gamma_square_over_pi(xs: dict[Fraction, int]) -> tuple[Fraction, int] | None:
    """prod Gamma(x)^(2e) as (rational, power of pi), if reducible by reflection."""
    rational = Fraction(1)
    pi_power = 0
    reduced: dict[Fraction, int] = {}
    for x, e in xs.items():
        x0 = x - math.ceil(x) + 1  # in (0, 1]
        m = int(x - x0)
        from .hyperterm import poch

        rational *= poch(x0, m) ** (2 * e)
        reduced[x0] = reduced.get(x0, 0) + e
    for x0, e in list(reduced.items()):
        if not e:
            continue
        if x0 == 1:
            continue
        if x0 == Fraction(1, 2):
            pi_power += e
            continue
        partner = 1 - x0
        if reduced.get(partner, 0) != e or x0 not in _SIN2:
            return None
        if x0 < partner:
            # Gamma(x)Gamma(1-x) = pi / sin(pi x)
            rational /= _SIN2[x0] ** e
            pi_power += 2 * e
    return rational, pi_power


def limit_constant_check(p: WZPair, precision: int = 30, c_squared=None) -> LimitReport:
    t = p.B
    if p.y != 1:
        return LimitReport(False, "y != 1, y^k has no finite limit")
    z_prime = t.z
    k_power = 0
    surviving: dict[Fraction, int] = {}
    for f in t.n_factors():
        q = f.base.ck
        if q:
            z_prime *= q**f.exponent
            k_power += f.exponent
        else:
            surviving[f.base.c0] = surviving.get(f.base.c0, 0) + f.exponent
    surviving = {c: e for c, e in surviving.items() if e}
    if k_power != 0:
        return LimitReport(False, f"n-part grows like k^({k_power}*n); termwise limit is not a central binomial series")
    if surviving != {Fraction(1, 2): 1, Fraction(1): -1}:
        return LimitReport(False, "surviving n-factors are not (1/2)_n/(1)_n")
    # (1/2)_n/(1)_n = C(2n,n)/4^n
    z_prime /= 4
    rn, rd = p.R
    dr_n, dr_d = rn.degree_in("k"), rd.degree_in("k")
    lead_n = Poly2({(i, 0): c for (i, j), c in rn.terms.items() if j == dr_n})
    lead_d = Poly2({(i, 0): c for (i, j), c in rd.terms.items() if j == dr_d})
    if not lead_n.is_constant() or not lead_d.is_constant():
        return LimitReport(False, "leading k-coefficient of R depends on n")
    r_lead = lead_n.constant_value() / lead_d.constant_value()
    deg_r = dr_n - dr_d
    kf = {}
    for f in t.k_factors():
        if f.base.cn:
            return LimitReport(False, "k-raised factor depends on n")
        kf[f.base.c0] = kf.get(f.base.c0, 0) + f.exponent
    if sum(kf.values()) != 0:
        return LimitReport(False, "k-raised factors do not balance")
    # (x)_k ~ Gamma(k) k^x / Gamma(x): total power of k must vanish
    if sum(e * (x - 1) for x, e in kf.items()) + deg_r != 0:
        return LimitReport(False, "k-part times R does not tend to a finite nonzero limit")
    g = _gamma_square_over_pi({x: -e for x, e in kf.items()})
    if g is None:
        return LimitReport(False, "Gamma constants do not reduce by reflection")
    rational, pi_power = g
    # (pi * K)^2 = r_lead^2 * rational * pi^(2 + pi_power)
    if pi_power != -2:
        return LimitReport(False, "limit constant is not a rational multiple of 1/pi")
    pref2 = r_lead**2 * rational
    if not abs(4 * z_prime) < 1:
        return LimitReport(False, f"central binomial series diverges at z'={z_prime}")
    closed_sq = 1 / (1 - 4 * z_prime)
    implied = pref2 * closed_sq
    closed = sqrt_rational(closed_sq, precision + 5)
    series = _central_binomial_sum(z_prime, precision + 5)
    agree = (series - closed).compare(0, Fraction(1, 10**precision)) == 0
    if c_squared is not None:
        agree = agree and implied == as_fraction(c_squared)
    return LimitReport(True, "", z_prime, pref2, implied, series, closed, agree)


def _central_binomial_sum(z: Fraction, precision: int) -> BigFloat:
    """sum z^n C(2n,n) with a geometric tail bound (|4z| < 1)."""
    bits = digits_to_bits(precision + 5)
    target = Fraction(1, 10 ** (precision + 2))
    total = Fraction(0)
    term = Fraction(1)
    n = 0
    rho = abs(4 * z)
    while True:
        tail = abs(term) / (1 - rho)
        if tail < target:
            break
        total += term
        term = term * z * Fraction(2 * (2 * n + 1), n + 1)
        n += 1
    v = BigFloat.from_fraction(total, bits)
    extra = math.ceil(tail * Fraction(2) ** (-v.exponent)) + 1
    return BigFloat(v.mantissa, v.exponent, v.error + extra, v.precision)


@dataclass(frozen=True)
class BoundaryReport:
    decreasing: bool
    k: Fraction
    N: int
    max_abs: float
    label: str = "numerical estimate of lim F(n,k) = 0 over n in [N, 2N], not a proof"


def boundary_check(p: WZPair, k, N: int = 100) -> BoundaryReport:
    """Monotone envelope of |F(n,k)| = |z^n y^k B S| over n in [N, 2N]."""
    k = as_fraction(k)
    anchor = k - (k.numerator // k.denominator)
    vals = p.term.n_values(k, 2 * N + 1, anchor)
    mags = []
    for n in range(N, 2 * N + 1):
        try:
            mags.append(abs(vals[n] * p.S_at(n, k)))
        except PoleEncountered:
            continue
    env = [max(mags[i:]) for i in range(len(mags))]
    first, last = env[0], env[-1]
    decreasing = last < first or first == 0
    return BoundaryReport(decreasing, k, N, float(first))


# ---------------------------------------------------------------------------
# full report


def verify_pair(p: WZPair, entry=None, precision: int = 40, ks=(0, 1, 2, 3), N: int = 100,
                seed: int = 0) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    wz = check_wz_exact(p)
    records.append(CheckRecord("wz_identity", "Certified" if wz.certified else "Failed",
                               None if wz.certified else str(wz.residual)))
    try:
        cert = certificate(p, seed=seed)
        records.append(CheckRecord("certificate", "Certified", str(cert), {"points_checked": cert.points_checked}))
    except ZeroS as exc:
        if p.S[0].is_zero() and not any(f.var == "k" or f.base.ck for f in p.B.factors):
            # a bare series carried as a pair: nothing to certify
            records.append(CheckRecord("certificate", "NotApplicable", "series only (S = 0)"))
        else:
            records.append(CheckRecord("certificate", "Failed", str(exc)))
    for k in (0, 1, 2):
        try:
            tr = telescope_partial(p, N, k)
            records.append(CheckRecord(f"telescope[k={k}]", "Holds" if tr.holds else "Failed",
                                       None if tr.holds else f"lhs-rhs={tr.lhs - tr.rhs}, F0={tr.F0}", {"N": N}))
        except PoleEncountered as exc:
            records.append(CheckRecord(f"telescope[k={k}]", "PoleEncountered", str(exc)))
    for k in (0, 1):
        try:
            b = boundary_check(p, k, N)
            records.append(CheckRecord(f"boundary[k={k}]", "Evidence" if b.decreasing else "Inconclusive", None,
                                       {"max_abs_F": b.max_abs, "note": b.label}))
        except PoleEncountered as exc:
            records.append(CheckRecord(f"boundary[k={k}]", "PoleEncountered", str(exc)))
    ks = list(ks)
    try:
        cons = constancy_check(p, ks, precision)
        records.append(CheckRecord("constancy", "Consistent" if cons.consistent else "Inconsistent", None,
                                   {"values": cons.values, "note": cons.label}))
    except (Divergent, InsufficientPrecision, PoleEncountered) as exc:
        records.append(CheckRecord("constancy", type(exc).__name__, str(exc)))
    lim = limit_constant_check(p, min(precision, 30), entry.c_squared if entry is not None else None)
    records.append(CheckRecord("limit_constant", lim.status, None if lim.applicable else lim.reason,
                               {"c_squared": str(lim.c_squared)} if lim.applicable else {}))
    if entry is not None:
        for k in ks:
            try:
                s = sum_series(p, k, precision)
                m = match_pi(s, entry, k)
                records.append(CheckRecord(f"match_pi[k={k}]", m.status, None if m.matched else str(m),
                                           {"delta": float(m.delta.center()), "tolerance": float(m.tolerance),
                                            "c_squared": str(m.c_squared), "value": s.value.to_decimal(precision),
                                            "tail_bound": float(s.tail_bound), "accelerated": s.accelerated}))
            except (Divergent, InsufficientPrecision, DivisionByZero, PoleEncountered) as exc:
                records.append(CheckRecord(f"match_pi[k={k}]", type(exc).__name__, str(exc)))
    return records
