"""Exact algebra in the two variables n and k over the rationals.

Three layers:

* :class:`AffineForm` -- ``c0 + cn*n + ck*k``, the building block of every
  shift quotient of a Pochhammer product.
* :class:`Poly2` -- sparse bivariate polynomials.  Coefficients are
  ``Fraction`` or :class:`LinExpr`; the latter gives the polynomials with
  undetermined linear coefficients used by the ansatz (``Poly2U``).
* :class:`FactoredRational` -- scale times a product of affine powers.
  Cancellation happens by matching primitive normal forms, so no
  multivariate gcd is ever needed.

Unknown symbols are plain strings: ``d{i}{j}`` and ``e{i}{j}`` for the
coefficients of n^i k^j in the R and S templates, ``w{i}{j}`` for the
linearised products ``y*d{i}{j}``, and ``y``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .numbers import as_fraction

VARS = ("n", "k")


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# LinExpr


class LinExpr:
    """``constant + sum(coeff * symbol)`` with rational coefficients."""

    __slots__ = ("constant", "terms")

    def __init__(self, constant=0, terms: Mapping[str, Fraction] | None = None):
        self.constant = as_fraction(constant)
        self.terms = {s: Fraction(c) for s, c in (terms or {}).items() if c != 0}

    @classmethod
    def symbol(cls, name: str, coeff=1) -> LinExpr:
        return cls(0, {name: as_fraction(coeff)})

    @staticmethod
    def lift(x) -> LinExpr:
        return x if isinstance(x, LinExpr) else LinExpr(x)

    def symbols(self) -> set[str]:
        return set(self.terms)

    def is_constant(self) -> bool:
        return not self.terms

    def coefficient(self, name: str) -> Fraction:
        return self.terms.get(name, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.constant) or bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.terms and self.constant == other
        if isinstance(other, LinExpr):
            return self.constant == other.constant and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.constant, tuple(sorted(self.terms.items()))))

    def __add__(self, other) -> LinExpr:
        if isinstance(other, (int, Fraction)):
            out = LinExpr(self.constant + other)
            out.terms = dict(self.terms)
            return out
        if not isinstance(other, LinExpr):
            return NotImplemented
        terms = dict(self.terms)
        for s, c in other.terms.items():
            v = terms.get(s, 0) + c
            if v:
                terms[s] = v
            else:
                terms.pop(s, None)
        out = LinExpr(self.constant + other.constant)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> LinExpr:
        out = LinExpr(-self.constant)
        out.terms = {s: -c for s, c in self.terms.items()}
        return out

    def __sub__(self, other) -> LinExpr:
        return self + (-other)

    def __rsub__(self, other) -> LinExpr:
        return (-self) + other

    def __mul__(self, other) -> LinExpr:
        if isinstance(other, LinExpr):
            if other.is_constant():
                other = other.constant
            elif self.is_constant():
                return other * self.constant
            else:
                raise ValueError(f"product of two non-constant linear expressions: ({self})*({other})")
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if not other:
            return LinExpr()
        out = LinExpr(self.constant * other)
        out.terms = {s: c * other for s, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        total = self.constant
        for s, c in self.terms.items():
            total += c * values[s]
        return total

    def substitute(self, values: Mapping[str, Fraction | LinExpr]) -> LinExpr:
        out = LinExpr(self.constant)
        for s, c in self.terms.items():
            out = out + (c * LinExpr.lift(values[s]) if s in values else LinExpr.symbol(s, c))
        return out

    def __repr__(self) -> str:
        return f"LinExpr({self})"

    def __str__(self) -> str:
        parts = []
        if self.constant or not self.terms:
            parts.append(_fmt_rat(self.constant))
        for s in sorted(self.terms, key=symbol_sort_key):
            c = self.terms[s]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = s if mag == 1 else f"{_fmt_rat(mag)}*{s}"
            parts.append(f"{sign}{body}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


def symbol_sort_key(s: str):
    order = {"y": 0, "d": 1, "w": 2, "e": 3}
    return (order.get(s[0], 9), s)


# ---------------------------------------------------------------------------
# AffineForm


@dataclass(frozen=True)
class AffineForm:
    c0: Fraction = Fraction(0)
    cn: Fraction = Fraction(0)
    ck: Fraction = Fraction(0)

    def __post_init__(self):
        for f in ("c0", "cn", "ck"):
            object.__setattr__(self, f, as_fraction(getattr(self, f)))

    @classmethod
    def const(cls, c) -> AffineForm:
        return cls(as_fraction(c))

    def __call__(self, n, k) -> Fraction:
        return self.c0 + self.cn * n + self.ck * k

    def coeff(self, var: str) -> Fraction:
        return {"n": self.cn, "k": self.ck}[var]

    def is_constant(self) -> bool:
        return self.cn == 0 and self.ck == 0

    def is_zero(self) -> bool:
        return self.is_constant() and self.c0 == 0

    def __add__(self, other) -> AffineForm:
        if isinstance(other, AffineForm):
            return AffineForm(self.c0 + other.c0, self.cn + other.cn, self.ck + other.ck)
        return AffineForm(self.c0 + as_fraction(other), self.cn, self.ck)

    def __neg__(self) -> AffineForm:
        return AffineForm(-self.c0, -self.cn, -self.ck)

    def __sub__(self, other) -> AffineForm:
        return self + (-other)

    def scaled(self, c) -> AffineForm:
        c = as_fraction(c)
        return AffineForm(self.c0 * c, self.cn * c, self.ck * c)

    def shift(self, var: str, delta) -> AffineForm:
        """Substitute ``var -> var + delta``."""
        return self + self.coeff(var) * as_fraction(delta)

    def substitute_var(self, var: str, value) -> AffineForm:
        value = as_fraction(value)
        if var == "n":
            return AffineForm(self.c0 + self.cn * value, 0, self.ck)
        return AffineForm(self.c0 + self.ck * value, self.cn, 0)

    def primitive(self) -> tuple[Fraction, AffineForm]:
        """``self == scalar * prim`` with prim integral, content 1, first of (cn, ck, c0) positive."""
        coeffs = (self.cn, self.ck, self.c0)
        if all(c == 0 for c in coeffs):
            raise ValueError("zero affine form has no primitive part")
        den = reduce(math.lcm, (c.denominator for c in coeffs))
        ints = [int(c * den) for c in coeffs]
        g = reduce(math.gcd, ints)
        lead = next(c for c in ints if c)
        if lead < 0:
            g = -g
        prim = AffineForm(Fraction(ints[2] // g), Fraction(ints[0] // g), Fraction(ints[1] // g))
        return Fraction(g, den), prim

    def is_primitive(self) -> bool:
        return not self.is_zero() and self.primitive()[1] == self

    def sort_key(self):
        return (self.cn, self.ck, self.c0)

    def to_poly(self) -> Poly2:
        return Poly2({(0, 0): self.c0, (1, 0): self.cn, (0, 1): self.ck})

    def __str__(self) -> str:
        return format_affine(self)


def format_affine(f: AffineForm, compact: bool = True) -> str:
    """``2n-2k+1`` style rendering: variable terms first, constant last."""
    parts = []
    for coef, name in ((f.cn, "n"), (f.ck, "k")):
        if coef:
            mag = abs(coef)
            num = "" if mag.numerator == 1 else str(mag.numerator)
            den = "" if mag.denominator == 1 else f"/{mag.denominator}"
            parts.append(("-" if coef < 0 else "+") + f"{num}{name}{den}")
    if f.c0 or not parts:
        parts.append(("-" if f.c0 < 0 else "+") + _fmt_rat(abs(f.c0)))
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


# ---------------------------------------------------------------------------
# Poly2


def _is_zero(c) -> bool:
    return not c


class Poly2:
    """Sparse polynomial in n, k: ``{(deg_n, deg_k): coefficient}``.

    Coefficients are ``Fraction`` or ``LinExpr``; zero coefficients are never
    stored.  Treat instances as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, LinExpr):
                c = as_fraction(c)
            if not _is_zero(c):
                clean[mono] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> Poly2:
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> Poly2:
        return cls({(1, 0) if name == "n" else (0, 1): Fraction(1)})

    @classmethod
    def zero(cls) -> Poly2:
        return cls()

    @classmethod
    def one(cls) -> Poly2:
        return cls.const(1)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        idx = 0 if var == "n" else 1
        return max((m[idx] for m in self.terms), default=-1)

    def coeff(self, dn: int, dk: int):
        return self.terms.get((dn, dk), Fraction(0))

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def is_linear(self) -> bool:
        """True when some coefficient is a LinExpr carrying unknowns."""
        return any(isinstance(c, LinExpr) and not c.is_constant() for c in self.terms.values())

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for c in self.terms.values():
            if isinstance(c, LinExpr):
                out |= c.symbols()
        return out

    def monomials(self) -> list[tuple[int, int]]:
        """Graded lexicographic order, highest first, n before k."""
        return sorted(self.terms, key=lambda m: (m[0] + m[1], m[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, int], object]:
        m = self.monomials()[0]
        return m, self.terms[m]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((m, str(c)) for m, c in self.terms.items())))

    # arithmetic

    def _coerce(self, other) -> Poly2:
        if isinstance(other, Poly2):
            return other
        if isinstance(other, AffineForm):
            return other.to_poly()
        return Poly2.const(other)

    def __add__(self, other) -> Poly2:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self) -> Poly2:
        return Poly2({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly2:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly2:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly2:
        if isinstance(other, (int, Fraction, LinExpr)):
            return Poly2({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, int], object] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return Poly2(out)

    def __rmul__(self, other) -> Poly2:
        return self * other

    def __pow__(self, e: int) -> Poly2:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly2.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, var: str, delta) -> Poly2:
        """Substitute ``var -> var + delta`` (exact binomial expansion)."""
        delta = as_fraction(delta)
        if delta == 0 or not self.terms:
            return self
        idx = 0 if var == "n" else 1
        out: dict[tuple[int, int], object] = {}
        for mono, c in self.terms.items():
            d = mono[idx]
            for r in range(d + 1):
                factor = math.comb(d, r) * delta ** (d - r)
                m = (r, mono[1]) if idx == 0 else (mono[0], r)
                v = c * factor
                out[m] = out[m] + v if m in out else v
        return Poly2(out)

    def substitute_var(self, var: str, value) -> Poly2:
        """Set ``var`` to a rational constant; result has degree 0 in var."""
        value = as_fraction(value)
        out: dict[tuple[int, int], object] = {}
        for (i, j), c in self.terms.items():
            if var == "n":
                m, v = (0, j), c * value**i
            else:
                m, v = (i, 0), c * value**j
            out[m] = out[m] + v if m in out else v
        return Poly2(out)

    def evaluate(self, n, k):
        n, k = as_fraction(n), as_fraction(k)
        total = Fraction(0)
        for (i, j), c in self.terms.items():
            total = total + c * (n**i * k**j)
        return total

    def substitute(self, values: Mapping[str, Fraction | LinExpr]) -> Poly2:
        """Replace unknowns in LinExpr coefficients."""
        out = {}
        for m, c in self.terms.items():
            if isinstance(c, LinExpr):
                c = c.substitute(values)
                if c.is_constant():
                    c = c.constant
            out[m] = c
        return Poly2(out)

    def map_coefficients(self, fn) -> Poly2:
        return Poly2({m: fn(c) for m, c in self.terms.items()})

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive (Fraction coefficients only)."""
        if not self.terms:
            return Fraction(1)
        cs = list(self.terms.values())
        den = reduce(math.lcm, (c.denominator for c in cs))
        g = reduce(math.gcd, (int(c * den) for c in cs))
        return Fraction(g, den)

    def __repr__(self) -> str:
        return f"Poly2({self})"

    def __str__(self) -> str:
        return format_poly(self)


Poly2U = Poly2  # Poly2 whose coefficients are LinExpr


def _fmt_mono(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("n" if i == 1 else f"n^{i}")
    if j:
        parts.append("k" if j == 1 else f"k^{j}")
    return "*".join(parts)


def format_poly(p: Poly2) -> str:
    """Graded-lex rendering, e.g. ``102*n^2+90*n*k+24*k^2-3/2``."""
    if not p.terms:
        return "0"
    out = []
    for m in p.monomials():
        c = p.terms[m]
        mono = _fmt_mono(*m)
        if isinstance(c, LinExpr):
            body = f"({c})"
            out.append("+" + (f"{body}*{mono}" if mono else body))
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = _fmt_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rat(mag)}*{mono}"
        out.append(sign + body)
    text = "".join(out)
    return text[1:] if text.startswith("+") else text


def poly_shift(p: Poly2, var: str, delta: int) -> Poly2:
    return p.shift(var, delta)


def eval_poly(p: Poly2, n, k) -> Fraction:
    return p.evaluate(n, k)


def coeff_extract(p: Poly2, dn: int, dk: int) -> LinExpr:
    return LinExpr.lift(p.coeff(dn, dk))


def divide_exact(p: Poly2, q: Poly2) -> Poly2 | None:
    """p / q if q divides p in Q[n, k], else None (graded-lex division)."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    (qi, qj), qc = q.leading()
    quotient = Poly2()
    r = p
    while r.terms:
        (ri, rj), rc = r.leading()
        if ri < qi or rj < qj:
            return None
        t = Poly2({(ri - qi, rj - qj): rc / qc})
        quotient = quotient + t
        r = r - t * q
    return quotient


# ---------------------------------------------------------------------------
# FactoredRational


def _merge(factors, extra) -> tuple[tuple[AffineForm, int], ...]:
    acc: dict[AffineForm, int] = dict(factors)
    for f, e in extra:
        acc[f] = acc.get(f, 0) + e
    return tuple(sorted(((f, e) for f, e in acc.items() if e), key=lambda fe: fe[0].sort_key()))


@dataclass(frozen=True)
class FactoredRational:
    """``scale * y**y_power * prod(form**exp)`` over primitive affine forms."""

    scale: Fraction = Fraction(1)
    factors: tuple[tuple[AffineForm, int], ...] = ()
    y_power: int = 0

    def __post_init__(self):
        scale = as_fraction(self.scale)
        if scale == 0:
            raise ValueError("FactoredRational scale must be nonzero")
        object.__setattr__(self, "scale", scale)
        for f, e in self.factors:
            if e == 0 or not f.is_primitive():
                raise ValueError(f"factor {f}^{e} not in normal form")

    @classmethod
    def of(cls, scale=1, factors=(), y_power: int = 0) -> FactoredRational:
        """Build from arbitrary (affine, exponent) pairs, normalising each."""
        s = as_fraction(scale)
        normal = []
        for f, e in factors:
            if e == 0:
                continue
            if f.is_constant():
                if f.c0 == 0:
                    raise ZeroDivisionError("zero affine factor") if e < 0 else ValueError("zero affine factor")
                s *= f.c0**e
                continue
            c, prim = f.primitive()
            s *= c**e
            normal.append((prim, e))
        return cls(s, _merge((), normal), y_power)

    @classmethod
    def one(cls) -> FactoredRational:
        return cls()

    def __mul__(self, other) -> FactoredRational:
        if isinstance(other, (int, Fraction)):
            return FactoredRational(self.scale * other, self.factors, self.y_power)
        return FactoredRational(self.scale * other.scale, _merge(self.factors, other.factors),
                                self.y_power + other.y_power)

    __rmul__ = __mul__

    def inverse(self) -> FactoredRational:
        return FactoredRational(1 / self.scale, tuple((f, -e) for f, e in self.factors), -self.y_power)

    def __truediv__(self, other) -> FactoredRational:
        if isinstance(other, (int, Fraction)):
            return FactoredRational(self.scale / other, self.factors, self.y_power)
        return self * other.inverse()

    def __pow__(self, e: int) -> FactoredRational:
        return FactoredRational(self.scale**e, tuple((f, x * e) for f, x in self.factors if x * e),
                                self.y_power * e)

    def is_one(self) -> bool:
        return self.scale == 1 and not self.factors and not self.y_power

    def numerator_factors(self) -> list[tuple[AffineForm, int]]:
        return [(f, e) for f, e in self.factors if e > 0]

    def denominator_factors(self) -> list[tuple[AffineForm, int]]:
        return [(f, -e) for f, e in self.factors if e < 0]

    def with_y(self, y) -> FactoredRational:
        if not self.y_power:
            return self
        return FactoredRational(self.scale * as_fraction(y) ** self.y_power, self.factors, 0)

    def shift(self, var: str, delta) -> FactoredRational:
        return FactoredRational.of(self.scale, [(f.shift(var, delta), e) for f, e in self.factors], self.y_power)

    def substitute_var(self, var: str, value) -> FactoredRational:
        return FactoredRational.of(self.scale, [(f.substitute_var(var, value), e) for f, e in self.factors],
                                   self.y_power)

    def evaluate(self, n, k, y=None) -> Fraction:
        if self.y_power and y is None:
            raise ValueError("symbolic y needs a value")
        val = self.scale * (as_fraction(y) ** self.y_power if self.y_power else 1)
        for f, e in self.factors:
            v = f(n, k)
            if v == 0 and e < 0:
                raise ZeroDivisionError(f"pole of factor {f} at n={n}, k={k}")
            val *= v**e
        return val

    def expand(self) -> tuple[Poly2, Poly2]:
        if self.y_power:
            raise ValueError("cannot expand a quotient carrying the symbolic y")
        num = Poly2.const(self.scale.numerator)
        den = Poly2.const(self.scale.denominator)
        for f, e in self.factors:
            if e > 0:
                num = num * f.to_poly() ** e
            else:
                den = den * f.to_poly() ** (-e)
        return num, den

    def __str__(self) -> str:
        return format_factored(self)


def _fmt_factor_list(pairs) -> str:
    out = []
    for f, e in pairs:
        out.append(f"({f})" + (f"^{e}" if e != 1 else ""))
    return "".join(out)


def format_factored(q: FactoredRational) -> str:
    num = q.numerator_factors()
    den = q.denominator_factors()
    sign = "-" if q.scale < 0 else ""
    p, d = abs(q.scale.numerator), q.scale.denominator
    ytxt = "" if not q.y_power else ("y" if q.y_power == 1 else f"y^{q.y_power}")
    top = ""
    if p != 1 or (not num and not ytxt):
        top += str(p)
    if ytxt:
        top += ("*" if top else "") + ytxt
    top += _fmt_factor_list(num)
    bottom = ""
    if d != 1:
        bottom += str(d)
    bottom += _fmt_factor_list(den)
    if not bottom:
        return sign + top
    if len(den) + (d != 1) > 1:
        bottom = f"({bottom})"
    return f"{sign}{top}/{bottom}"


def factored_mul(a: FactoredRational, b: FactoredRational) -> FactoredRational:
    return a * b


def expand(f: FactoredRational) -> tuple[Poly2, Poly2]:
    return f.expand()
