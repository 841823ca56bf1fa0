"""Hypergeometric terms ``z^n y^k B(n,k)`` built from Pochhammer symbols.

A term is a multiset of factors ``(base)_var ** exponent`` where ``base`` is
affine in n and k but free of the raising variable ``var``.  Shift quotients
are computed symbolically through Gamma atoms: ``(x)_m = Gamma(x+m)/Gamma(x)``.
Numeric values are only ever taken at integer Pochhammer lengths, where the
rising factorial is an exact rational product.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .numbers import InsufficientPrecision, as_fraction
from .polyalg import AffineForm, FactoredRational


class NotHypergeometric(ValueError):
    pass


class PoleEncountered(ZeroDivisionError):
    def __init__(self, n, factor, detail: str = ""):
        self.n = n
        self.factor = factor
        super().__init__(f"pole at n={n} from {factor}" + (f" ({detail})" if detail else ""))


class NonRationalValue(ValueError):
    """Value needs Gamma at a non-integer length."""


@dataclass(frozen=True, order=True)
class PochFactor:
    var: str
    base: AffineForm
    exponent: int = 1

    def __post_init__(self):
        if self.var not in ("n", "k"):
            raise ValueError(f"unknown raising variable {self.var!r}")
        if self.exponent == 0:
            raise ValueError("zero exponent")
        if self.base.coeff(self.var) != 0:
            raise ValueError(f"base {self.base} depends on its own raising variable {self.var}")

    def sort_key(self):
        return (0 if self.var == "n" else 1, self.base.sort_key(), self.exponent)

    def __str__(self) -> str:
        s = f"poch({self.base};{self.var})"
        return s if self.exponent == 1 else f"{s}^{self.exponent}"


@dataclass(frozen=True)
class GammaAtom:
    argument: AffineForm
    exponent: int

    def __str__(self) -> str:
        return f"Gamma({self.argument})^{self.exponent}"


@dataclass(frozen=True)
class HyperTerm:
    """``z^n * y^k * prod(factors)``; ``y=None`` marks the unknown y."""

    z: Fraction = Fraction(1)
    factors: tuple[PochFactor, ...] = ()
    y: Fraction | None = Fraction(1)

    def __post_init__(self):
        z = as_fraction(self.z)
        if z == 0:
            raise ValueError("z must be nonzero")
        object.__setattr__(self, "z", z)
        if self.y is not None:
            object.__setattr__(self, "y", as_fraction(self.y))
        # merge repeated (var, base) pairs so equal terms compare equal
        merged: dict = {}
        for f in self.factors:
            merged[(f.var, f.base)] = merged.get((f.var, f.base), 0) + f.exponent
        factors = [PochFactor(v, b, e) for (v, b), e in merged.items() if e]
        object.__setattr__(self, "factors", tuple(sorted(factors, key=PochFactor.sort_key)))

    def with_y(self, y) -> HyperTerm:
        return replace(self, y=None if y is None else as_fraction(y))

    def with_z(self, z) -> HyperTerm:
        return replace(self, z=as_fraction(z))

    def n_factors(self) -> list[PochFactor]:
        return [f for f in self.factors if f.var == "n"]

    def k_factors(self) -> list[PochFactor]:
        return [f for f in self.factors if f.var == "k"]

    def times(self, other: HyperTerm) -> HyperTerm:
        y = None if self.y is None or other.y is None else self.y * other.y
        return HyperTerm(self.z * other.z, self.factors + other.factors, y)

    # exact values ---------------------------------------------------------

    def value(self, n: int, k) -> Fraction:
        """Exact ``z^n y^k B(n,k)``; k must be an integer if any k-raised factor or y^k is present."""
        k = as_fraction(k)
        if self.y is None:
            raise ValueError("term has symbolic y")
        val = self.z**n
        if self.k_factors() or self.y != 1:
            if k.denominator != 1:
                raise NonRationalValue(f"k={k} is not an integer")
            val *= self.y ** int(k)
        for f in self.factors:
            length = n if f.var == "n" else k
            if as_fraction(length).denominator != 1:
                raise NonRationalValue(f"length {length} of {f}")
            x = f.base(n, k)
            val *= _poch_power(x, int(length), f.exponent, n, f)
        return val

    def n_values(self, k, count: int, anchor=None) -> list[Fraction]:
        """Values at n = 0..count-1, built by running products.

        For non-integer k the k-raised part and y^k are divided out
        relative to ``anchor`` (k - anchor must be an integer), which keeps
        every value rational while preserving ratios between terms.
        """
        k = as_fraction(k)
        if self.y is None:
            raise ValueError("term has symbolic y")
        head = self._k_head(k, anchor)
        bases = [(f.base.substitute_var("k", k), f.exponent, f) for f in self.n_factors()]
        out = []
        val = head
        for n in range(count):
            out.append(val)
            step = self.z
            for base, e, f in bases:
                x = base.c0 + n
                if x == 0 and e < 0:
                    raise PoleEncountered(n + 1, f)
                step *= x**e
            val = val * step
        return out

    def _k_head(self, k: Fraction, anchor=None) -> Fraction:
        """y^k * prod of k-raised factors at n = 0, relative to ``anchor``."""
        if anchor is None:
            anchor = Fraction(0) if k.denominator == 1 else k - (k.numerator // k.denominator)
        anchor = as_fraction(anchor)
        m = k - anchor
        if m.denominator != 1:
            raise NonRationalValue(f"k={k} and anchor={anchor} differ by a non-integer")
        m = int(m)
        val = self.y**m
        for f in self.k_factors():
            if f.base.cn != 0:
                raise NonRationalValue(f"{f} depends on n")
            x = f.base.c0 + anchor
            val *= _poch_power(x, m, f.exponent, 0, f)
        return val

    def k_part_value(self, k: int) -> Fraction:
        """y^k * prod of k-raised factors, exact at integer k."""
        return self._k_head(as_fraction(k), Fraction(0))


def poch(x, m: int) -> Fraction:
    """Rising factorial (x)_m for integer m (negative m via the Gamma identity)."""
    x = as_fraction(x)
    val = Fraction(1)
    if m >= 0:
        for i in range(m):
            val *= x + i
        return val
    for i in range(1, -m + 1):
        d = x - i
        if d == 0:
            raise ZeroDivisionError(f"({x})_{m} is a pole")
        val /= d
    return val


def _poch_power(x: Fraction, m: int, e: int, n, factor) -> Fraction:
    try:
        v = poch(x, m)
    except ZeroDivisionError as exc:
        if e > 0:
            raise PoleEncountered(n, factor, str(exc)) from None
        return Fraction(0)
    if v == 0 and e < 0:
        raise PoleEncountered(n, factor, "zero Pochhammer in denominator")
    return v**e


# ---------------------------------------------------------------------------
# Gamma machinery


def to_gamma(t: HyperTerm) -> tuple[GammaAtom, ...]:
    acc: dict[AffineForm, int] = defaultdict(int)
    for f in t.factors:
        raised = f.base + (AffineForm(0, 1, 0) if f.var == "n" else AffineForm(0, 0, 1))
        acc[raised] += f.exponent
        acc[f.base] -= f.exponent
    return tuple(GammaAtom(a, e) for a, e in sorted(acc.items(), key=lambda ae: ae[0].sort_key()) if e)


def _frac_part(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


def shift_quotient(t: HyperTerm, var: str) -> FactoredRational:
    """B(n+1,k)/B(n,k)*z or B(n,k+1)/B(n,k)*y as an exact factored rational."""
    if var not in ("n", "k"):
        raise ValueError(f"unknown variable {var!r}")
    atoms = to_gamma(t)
    signed: list[tuple[AffineForm, int]] = []
    for a in atoms:
        signed.append((a.argument.shift(var, 1), a.exponent))
        signed.append((a.argument, -a.exponent))

    classes: dict[tuple, dict[Fraction, int]] = defaultdict(lambda: defaultdict(int))
    for arg, e in signed:
        key = (arg.cn, arg.ck, _frac_part(arg.c0))
        classes[key][arg.c0] += e

    factors: list[tuple[AffineForm, int]] = []
    for (cn, ck, _), members in classes.items():
        members = {c: e for c, e in members.items() if e}
        if not members:
            continue
        if sum(members.values()) != 0:
            raise NotHypergeometric(
                f"Gamma class with slope (n:{cn}, k:{ck}) does not balance in the {var}-shift")
        ref = min(members)
        for c0, e in members.items():
            m = int(c0 - ref)
            for i in range(m):
                factors.append((AffineForm(ref + i, cn, ck), e))

    scale = Fraction(1)
    y_power = 0
    if var == "n":
        scale = t.z
    elif t.y is None:
        y_power = 1
    else:
        scale = t.y
    return FactoredRational.of(scale, factors, y_power)


# ---------------------------------------------------------------------------
# prefilters


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    witness: Fraction | None = None
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def accept(cls, reason: str = "", **details) -> Verdict:
        return cls(True, None, reason, details)

    @classmethod
    def reject(cls, witness, reason: str, **details) -> Verdict:
        return cls(False, as_fraction(witness), reason, details)

    def __str__(self) -> str:
        if self.accepted:
            return "Accept" + (f" ({self.reason})" if self.reason else "")
        return f"Reject(k={self.witness}): {self.reason}"


def _vanishing_k(f: PochFactor) -> Fraction | None:
    """k* where an n-raised factor's base is zero, if the base moves with k."""
    if f.var != "n" or f.base.ck == 0:
        return None
    return -f.base.c0 / f.base.ck


def _k_part_order(t: HyperTerm, k: Fraction) -> int:
    """Order of vanishing (negative: pole order) of prod (x)_k at k."""
    order = 0
    for f in t.k_factors():
        x = f.base.c0
        top = x + k
        # (x)_k = Gamma(x+k)/Gamma(x)
        if top.denominator == 1 and top <= 0:
            order -= f.exponent
        if x.denominator == 1 and x <= 0:
            order += f.exponent
    return order


def pole_prefilter(t: HyperTerm) -> Verdict:
    """Reject terms whose sum over n is forced to have a pole at some k*.

    A denominator factor ``(c+qk)_n`` whose base vanishes at ``k* = -c/q``
    makes every summand with n >= 1 blow up there, unless numerator factors
    vanishing on the same line, or a zero of the k-raised part, absorb it.
    """
    candidates = sorted({k for f in t.n_factors() if f.exponent < 0 and (k := _vanishing_k(f)) is not None})
    for kstar in candidates:
        order = 0
        for f in t.n_factors():
            if _vanishing_k(f) == kstar:
                order += f.exponent
        order += _k_part_order(t, kstar)
        if order < 0:
            return Verdict.reject(kstar, f"simple pole of the sum at k={kstar}" if order == -1
                                  else f"pole of order {-order} of the sum at k={kstar}")
    return Verdict.accept("no uncancelled denominator vanishing line")


def _k_part_gamma_value(t: HyperTerm, kstar: Fraction, dps: int):
    import mpmath

    with mpmath.workdps(dps):
        val = mpmath.mpf(1)
        for f in t.k_factors():
            x = mpmath.mpf(f.base.c0.numerator) / f.base.c0.denominator
            k = mpmath.mpf(kstar.numerator) / kstar.denominator
            val *= (mpmath.gamma(x + k) * mpmath.rgamma(x)) ** f.exponent
        return val


def terminating_prefilter(t: HyperTerm, target, precision: int = 30, max_den: int = 10**6) -> Verdict:
    """Reject terms whose sum collapses to its n=0 term at some k* without being c/pi.

    At a zero ``k*`` of a numerator base the sum is ``y^k* B(0,k*) R(0,k*)``;
    R(0,k*) and y are rational, so (pi * B(0,k*))^2 must be rational.  The
    test reconstructs a rational of denominator at most ``max_den`` by
    continued fractions and rejects when none fits at ``precision`` digits.
    """
    import mpmath

    if precision < 20:
        raise InsufficientPrecision("terminating test needs at least 20 digits")
    zeros = sorted({k for f in t.n_factors() if f.exponent > 0 and (k := _vanishing_k(f)) is not None})
    a = as_fraction(getattr(target, "a", 1)) or Fraction(1)
    dps = precision + 15
    tested = []
    for kstar in zeros:
        order = sum(f.exponent for f in t.n_factors() if _vanishing_k(f) == kstar)
        if order <= 0:
            continue
        # a denominator base hitting 0, -1, -2, ... makes later summands 0/0: not a terminating point
        if any(f.exponent < 0 and (v := f.base(0, kstar)).denominator == 1 and v <= 0 for f in t.n_factors()):
            continue
        try:
            head = _k_part_gamma_value(t, kstar, dps)
        except (ValueError, ZeroDivisionError):
            continue
        if not mpmath.isfinite(head) or head == 0:
            continue
        with mpmath.workdps(dps):
            x = (mpmath.pi * head * a.numerator / a.denominator) ** 2
            q = Fraction(mpmath.nstr(x, dps, min_fixed=-dps, max_fixed=dps)).limit_denominator(max_den)
            resid = abs(x - mpmath.mpf(q.numerator) / q.denominator)
            threshold = mpmath.mpf(10) ** (-(precision - 5))
            tested.append((kstar, q, float(resid)))
            if resid > threshold:
                return Verdict.reject(
                    kstar, f"series terminates at k={kstar} but (pi*sum)^2 is not a rational of height <= {max_den}",
                    best_rational=str(q), residual=float(resid))
    return Verdict.accept("all terminating points give rational (pi*sum)^2" if tested else "no terminating point",
                          tested=[(str(k), str(q)) for k, q, _ in tested])
