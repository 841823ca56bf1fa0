"""Exact rationals and error-tracked binary floating point.

Integers and rationals are Python ``int`` and ``fractions.Fraction``.  The
only approximate type is :class:`BigFloat`, a binary mantissa/exponent pair
that carries an explicit bound on its own absolute error, so every number it
produces can be turned into a rigorous enclosing interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

LOG2_10 = math.log2(10)
GUARD_BITS = 32


class DivisionByZero(ZeroDivisionError):
    pass


class DomainError(ValueError):
    pass


class InsufficientPrecision(ArithmeticError):
    """A numeric test could not be decided at the working precision."""


def rational_normalize(num: int, den: int) -> Fraction:
    if den == 0:
        raise DivisionByZero(f"zero denominator in {num}/{den}")
    return Fraction(num, den)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * LOG2_10)) + 4


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class BigFloat:
    """The interval ``[(m - err) * 2**e, (m + err) * 2**e]``.

    ``precision`` is the number of mantissa bits kept after rounding; the
    error term absorbs every rounding step, so ``lo() <= true <= hi()``
    holds for whatever true value the computation approximates.
    """

    mantissa: int
    exponent: int
    error: int = 0
    precision: int = 128

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error bound must be non-negative")

    # construction -------------------------------------------------------

    @classmethod
    def from_fraction(cls, q, precision: int = 128) -> BigFloat:
        q = as_fraction(q)
        if q == 0:
            return cls(0, 0, 0, precision)
        p, d = abs(q.numerator), q.denominator
        shift = precision + d.bit_length() - p.bit_length() + 1
        if shift >= 0:
            m, r = divmod(p << shift, d)
        else:
            m, r = divmod(p, d << -shift)
        err = 1 if r else 0
        if q < 0:
            m = -m
        return cls(m, -shift, err, precision)._rounded()

    @classmethod
    def from_int(cls, n: int, precision: int = 128) -> BigFloat:
        return cls(n, 0, 0, precision)._rounded()

    def _rounded(self) -> BigFloat:
        excess = abs(self.mantissa).bit_length() - self.precision
        if excess <= 0:
            return self
        half = 1 << (excess - 1)
        m = (self.mantissa + half) >> excess if self.mantissa >= 0 else -((-self.mantissa + half) >> excess)
        err = _ceil_div(self.error, 1 << excess) + 1
        return BigFloat(m, self.exponent + excess, err, self.precision)

    def with_precision(self, precision: int) -> BigFloat:
        return BigFloat(self.mantissa, self.exponent, self.error, precision)._rounded()

    # inspection ---------------------------------------------------------

    def center(self) -> Fraction:
        return Fraction(self.mantissa) * Fraction(2) ** self.exponent

    def radius(self) -> Fraction:
        return Fraction(self.error) * Fraction(2) ** self.exponent

    def lo(self) -> Fraction:
        return self.center() - self.radius()

    def hi(self) -> Fraction:
        return self.center() + self.radius()

    def contains(self, q) -> bool:
        return self.lo() <= as_fraction(q) <= self.hi()

    def correct_digits(self) -> int:
        """Decimal digits after the point guaranteed by the error bound."""
        r = self.radius()
        if r == 0:
            return 10**9
        return max(0, int(math.floor(-math.log10(float(r)) if r < 1 else 0)))

    def __float__(self) -> float:
        return float(self.center())

    def to_decimal(self, digits: int) -> str:
        c = self.center()
        scaled = round(c * 10**digits)
        sign = "-" if scaled < 0 else ""
        s = str(abs(scaled)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"

    def __str__(self) -> str:
        digits = max(1, min(60, int(self.precision / LOG2_10) - 2))
        return self.to_decimal(digits)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> BigFloat:
        if isinstance(other, BigFloat):
            return other
        return BigFloat.from_fraction(as_fraction(other), self.precision)

    def __neg__(self) -> BigFloat:
        return BigFloat(-self.mantissa, self.exponent, self.error, self.precision)

    def __add__(self, other) -> BigFloat:
        other = self._coerce(other)
        e = min(self.exponent, other.exponent)
        a, b = self.exponent - e, other.exponent - e
        m = (self.mantissa << a) + (other.mantissa << b)
        err = (self.error << a) + (other.error << b)
        prec = min(self.precision, other.precision)
        return BigFloat(m, e, err, prec)._rounded()

    __radd__ = __add__

    def __sub__(self, other) -> BigFloat:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> BigFloat:
        return self._coerce(other) - self

    def __mul__(self, other) -> BigFloat:
        other = self._coerce(other)
        m = self.mantissa * other.mantissa
        err = (abs(self.mantissa) * other.error + abs(other.mantissa) * self.error
               + self.error * other.error)
        prec = min(self.precision, other.precision)
        return BigFloat(m, self.exponent + other.exponent, err, prec)._rounded()

    __rmul__ = __mul__

    def __truediv__(self, other) -> BigFloat:
        other = self._coerce(other)
        if abs(other.mantissa) <= other.error:
            raise DivisionByZero("divisor interval contains zero")
        prec = min(self.precision, other.precision)
        shift = prec + other.mantissa.bit_length() - self.mantissa.bit_length() + 2
        shift = max(shift, 0)
        num = self.mantissa << shift
        q = abs(num) // abs(other.mantissa)
        if (num < 0) != (other.mantissa < 0):
            q = -q
        # |a/b - A/B| <= (|A| eb + |B| ea) / (|B| (|B| - eb)), in units of 2**(e_a - e_b)
        A, B = abs(self.mantissa), abs(other.mantissa)
        prop = Fraction(A * other.error + B * self.error, B * (B - other.error)) * (1 << shift)
        err = _ceil_fraction(prop) + 1
        return BigFloat(q, self.exponent - other.exponent - shift, err, prec)._rounded()

    def __rtruediv__(self, other) -> BigFloat:
        return self._coerce(other) / self

    def square(self) -> BigFloat:
        return self * self

    def sqrt(self) -> BigFloat:
        if self.hi() < 0:
            raise DomainError("square root of a negative interval")
        m, e, err = self.mantissa, self.exponent, self.error
        extra = max(0, 2 * self.precision - m.bit_length() + 2)
        if (e - extra) % 2:
            extra += 1
        mm = m << extra
        ee = e - extra
        root = math.isqrt(max(mm, 0))
        # |sqrt(x) - sqrt(X)| <= |x - X| / sqrt(max(X - ex, 0)) ; floor error adds one unit
        lo = mm - (err << extra)
        if lo > 0:
            prop = Fraction(err << extra, math.isqrt(lo))
            rerr = _ceil_fraction(prop) + 1
        else:
            rerr = math.isqrt(max(mm, 0) + (err << extra)) + 2
        return BigFloat(root, ee // 2, rerr, self.precision)._rounded()

    def compare(self, other, eps=0) -> int:
        """-1 if clearly below ``other - eps``, +1 if clearly above, else 0."""
        d = self - self._coerce(other)
        eps = as_fraction(eps)
        if d.hi() < -eps:
            return -1
        if d.lo() > eps:
            return 1
        return 0

    def abs_upper(self) -> Fraction:
        return max(abs(self.lo()), abs(self.hi()))


# pi -------------------------------------------------------------------------

def _arctan_inv(x: int, one: int) -> tuple[int, int]:
    """Fixed-point arctan(1/x) and a bound on its truncation error in ulps."""
    total = 0
    power = one // x
    x2 = x * x
    k = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k % 2 else term
        power //= x2
        k += 1
    # each floor loses < 1 ulp (two per term) and the dropped tail is < 1 ulp
    return total, 2 * k + 2


def _pi_from_arctans(terms: list[tuple[int, int]], bits: int) -> BigFloat:
    one = 1 << (bits + GUARD_BITS)
    total, err = 0, 0
    for coeff, x in terms:
        t, e = _arctan_inv(x, one)
        total += coeff * t
        err += abs(coeff) * e
    return BigFloat(4 * total, -(bits + GUARD_BITS), 4 * err, bits + GUARD_BITS)


def pi_machin(bits: int) -> BigFloat:
    return _pi_from_arctans([(4, 5), (-1, 239)], bits)


def pi_takano(bits: int) -> BigFloat:
    return _pi_from_arctans([(12, 49), (32, 57), (-5, 239), (12, 110443)], bits)


@lru_cache(maxsize=None)
def _pi_bits(bits: int) -> BigFloat:
    a, b = pi_machin(bits), pi_takano(bits)
    if (a - b).compare(0) != 0:
        raise RuntimeError(f"pi series disagree at {bits} bits")
    return a


def pi_approx(precision: int) -> BigFloat:
    """pi to ``precision`` decimal digits, cross-checked by a second series."""
    if precision < 1:
        raise ValueError("precision must be at least one digit")
    bits = digits_to_bits(precision) + 8
    result = _pi_bits(bits)
    assert result.radius() < Fraction(1, 10**precision)
    return result


def sqrt_rational(x, precision: int) -> BigFloat:
    x = as_fraction(x)
    if x < 0:
        raise DomainError(f"square root of negative rational {x}")
    bits = digits_to_bits(precision) + 2 * max(1, x.numerator.bit_length()) + 16
    if x == 0:
        return BigFloat(0, 0, 0, bits)
    p, q = x.numerator, x.denominator
    # sqrt(p/q) = sqrt(p*q) / q ; floor(isqrt) is within one unit
    scale = 2 * bits
    root = math.isqrt((p * q) << scale)
    exact = root * root == (p * q) << scale
    s = BigFloat(root, -bits, 0 if exact else 1, bits + root.bit_length())
    return s / BigFloat.from_int(q, s.precision)


def rational_from_digits(x: BigFloat, max_den: int = 10**6) -> Fraction:
    """Best rational approximation with bounded denominator (continued fractions)."""
    return x.center().limit_denominator(max_den)
