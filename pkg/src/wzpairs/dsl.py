"""The ``wzdsl-1`` text format for terms and rational functions.

Terms::

    entry   := "z=" rational "*" product
    product := atom (("*" | "/") atom)*
    atom    := "poch" "(" affine ";" var ")" ["^" integer] | "(" product ")" | "1"
    affine  := signed sum of monomials c, c*n, c*k, cn/q, ck/q
    var     := "n" | "k"
    rational:= ["-"] digits ["/" digits]

Rational functions are ordinary arithmetic in n and k (``+ - * / ^`` and
parentheses; juxtaposition multiplies, so ``2n(n+1)`` is accepted).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hyperterm import HyperTerm, PochFactor
from .polyalg import AffineForm, Poly2, format_poly

FORMAT_VERSION = "wzdsl-1"


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int


class ParseError(ValueError):
    def __init__(self, span: SourceSpan, expected: list[str], found: str):
        self.span = span
        self.expected = list(expected)
        self.found = found
        exp = ", ".join(repr(e) for e in self.expected)
        super().__init__(f"line {span.line}, column {span.column}: expected {exp}; found {found!r}")


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, SYM, EOF
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else self.text


_SYMBOLS = set("=*/();^+-")


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        start, scol = i, col
        if ch.isdigit():
            while i < len(text) and text[i].isdigit():
                i += 1
            kind = "NUM"
        elif ch.isalpha():
            # "poch" is the only multi-letter word; other letters are single tokens
            if text.startswith("poch", i):
                i += 4
            else:
                i += 1
            kind = "IDENT"
        elif ch in _SYMBOLS:
            i += 1
            kind = "SYM"
        else:
            span = SourceSpan(i, i + 1, line, col)
            raise ParseError(span, ["number", "identifier", "operator"], ch)
        col += i - start
        tokens.append(Token(kind, text[start:i], SourceSpan(start, i, line, scol)))
    tokens.append(Token("EOF", "", SourceSpan(len(text), len(text), line, col)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def fail(self, expected) -> ParseError:
        return ParseError(self.tok.span, list(expected), self.tok.describe())

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("SYM", "IDENT") and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail([text])
        t = self.tok
        self.pos += 1
        return t

    def number(self) -> int:
        if self.tok.kind != "NUM":
            raise self.fail(["digits"])
        v = int(self.tok.text)
        self.pos += 1
        return v

    def finish(self, expected=("end of input",)):
        if self.tok.kind != "EOF":
            raise self.fail(expected)

    # terms -----------------------------------------------------------------

    def entry(self) -> HyperTerm:
        self.expect("z")
        self.expect("=")
        z = self.rational()
        self.expect("*")
        factors = self.product()
        self.finish(["*", "/", "end of input"])
        if z == 0:
            raise ParseError(self.tokens[2].span, ["nonzero rational"], "0")
        return HyperTerm(z, tuple(factors))

    def rational(self) -> Fraction:
        neg = False
        if self.at("-"):
            neg = True
            self.pos += 1
        num = self.number()
        den = 1
        if self.at("/") and self.peek().kind == "NUM":
            self.pos += 1
            den = self.number()
            if den == 0:
                raise ParseError(self.tokens[self.pos - 1].span, ["nonzero denominator"], "0")
        q = Fraction(num, den)
        return -q if neg else q

    def product(self) -> list[PochFactor]:
        factors = self.atom()
        while self.at("*", "/"):
            invert = self.tok.text == "/"
            self.pos += 1
            more = self.atom()
            if invert:
                more = [PochFactor(f.var, f.base, -f.exponent) for f in more]
            factors.extend(more)
        return factors

    def atom(self) -> list[PochFactor]:
        if self.at("poch"):
            self.pos += 1
            self.expect("(")
            base = self.affine()
            self.expect(";")
            if not self.at("n", "k"):
                raise self.fail(["n", "k"])
            var_tok = self.tok
            var = var_tok.text
            self.pos += 1
            self.expect(")")
            exp = 1
            if self.at("^"):
                self.pos += 1
                sign = 1
                if self.at("-"):
                    sign = -1
                    self.pos += 1
                exp = sign * self.number()
                if exp == 0:
                    raise ParseError(self.tokens[self.pos - 1].span, ["nonzero exponent"], "0")
            if base.coeff(var) != 0:
                raise ParseError(var_tok.span, ["variable absent from the base"], var)
            return [PochFactor(var, base, exp)]
        if self.at("("):
            self.pos += 1
            inner = self.product()
            self.expect(")")
            return inner
        if self.tok.kind == "NUM" and self.tok.text == "1":
            self.pos += 1
            return []
        raise self.fail(["poch", "(", "1"])

    def affine(self) -> AffineForm:
        total = AffineForm()
        first = True
        while True:
            sign = 1
            if self.at("+", "-"):
                sign = -1 if self.tok.text == "-" else 1
                self.pos += 1
            elif not first:
                break
            total = total + self.monomial().scaled(sign)
            first = False
            if not self.at("+", "-"):
                break
        return total

    def monomial(self) -> AffineForm:
        coef = Fraction(1)
        has_coef = False
        if self.tok.kind == "NUM":
            has_coef = True
            coef = Fraction(self.number())
            if self.at("/") and self.peek().kind == "NUM":
                self.pos += 1
                d = self.number()
                if d == 0:
                    raise ParseError(self.tokens[self.pos - 1].span, ["nonzero denominator"], "0")
                coef /= d
                if not self.at("*"):
                    return AffineForm(coef)
            if self.at("*"):
                self.pos += 1
            elif coef.denominator != 1 or not self.at("n", "k"):
                return AffineForm(coef)
        if not self.at("n", "k"):
            raise self.fail(["digits", "n", "k"] if not has_coef else ["n", "k"])
        var = self.tok.text
        self.pos += 1
        if self.at("/") and self.peek().kind == "NUM":
            self.pos += 1
            d = self.number()
            if d == 0:
                raise ParseError(self.tokens[self.pos - 1].span, ["nonzero denominator"], "0")
            coef /= d
        return AffineForm(0, coef, 0) if var == "n" else AffineForm(0, 0, coef)

    # rational functions ------------------------------------------------------

    def expr(self) -> tuple[Poly2, Poly2]:
        acc = self.term()
        while self.at("+", "-"):
            neg = self.tok.text == "-"
            self.pos += 1
            rhs = self.term()
            if neg:
                rhs = (-rhs[0], rhs[1])
            acc = _rf_add(acc, rhs)
        return acc

    def term(self) -> tuple[Poly2, Poly2]:
        acc = self.unary()
        while True:
            if self.at("*", "/"):
                div = self.tok.text == "/"
                self.pos += 1
                rhs = self.unary()
                if div:
                    if rhs[0].is_zero():
                        raise ParseError(self.tokens[self.pos - 1].span, ["nonzero divisor"], "0")
                    rhs = (rhs[1], rhs[0])
                acc = (acc[0] * rhs[0], acc[1] * rhs[1])
            elif self.tok.kind == "NUM" or self.at("n", "k", "("):
                rhs = self.power()
                acc = (acc[0] * rhs[0], acc[1] * rhs[1])
            else:
                return acc

    def unary(self) -> tuple[Poly2, Poly2]:
        if self.at("-"):
            self.pos += 1
            inner = self.unary()
            return (-inner[0], inner[1])
        if self.at("+"):
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> tuple[Poly2, Poly2]:
        base = self.primary()
        if self.at("^"):
            self.pos += 1
            e = self.number()
            base = (base[0] ** e, base[1] ** e)
        return base

    def primary(self) -> tuple[Poly2, Poly2]:
        if self.tok.kind == "NUM":
            return (Poly2.const(self.number()), Poly2.one())
        if self.at("n", "k"):
            v = self.tok.text
            self.pos += 1
            return (Poly2.var(v), Poly2.one())
        if self.at("("):
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.fail(["digits", "n", "k", "("])


def _rf_add(a, b):
    if a[1] == b[1]:
        return (a[0] + b[0], a[1])
    return (a[0] * b[1] + b[0] * a[1], a[1] * b[1])


def normalize_rational_function(num: Poly2, den: Poly2) -> tuple[Poly2, Poly2]:
    """Fold constant denominators into the numerator; make den integral with positive lead."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Poly2.zero(), Poly2.one()
    if den.is_constant():
        return num * (1 / den.constant_value()), Poly2.one()
    c = den.content()
    if den.leading()[1] < 0:
        c = -c
    return num * (1 / c), den * (1 / c)


def parse_term(text: str) -> HyperTerm:
    return _Parser(text).entry()


def parse_rational_function(text: str) -> tuple[Poly2, Poly2]:
    p = _Parser(text)
    num, den = p.expr()
    p.finish()
    return normalize_rational_function(num, den)


def parse_poly(text: str) -> Poly2:
    num, den = parse_rational_function(text)
    if den != Poly2.one():
        raise ValueError(f"{text!r} is not a polynomial")
    return num


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_base(f: AffineForm) -> str:
    """Constant first, then n, then k: ``1/2-k``, ``1/4+3k/2``."""
    parts = []
    if f.c0 or (f.cn == 0 and f.ck == 0):
        parts.append(("-" if f.c0 < 0 else "+") + format_rational(abs(f.c0)))
    for coef, name in ((f.cn, "n"), (f.ck, "k")):
        if coef:
            mag = abs(coef)
            num = "" if mag.numerator == 1 else str(mag.numerator)
            den = "" if mag.denominator == 1 else f"/{mag.denominator}"
            parts.append(("-" if coef < 0 else "+") + f"{num}{name}{den}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def _format_factor(f: PochFactor, exponent: int) -> str:
    s = f"poch({format_base(f.base)};{f.var})"
    return s if exponent == 1 else f"{s}^{exponent}"


def print_term(t: HyperTerm) -> str:
    num = [_format_factor(f, f.exponent) for f in t.factors if f.exponent > 0]
    den = [_format_factor(f, -f.exponent) for f in t.factors if f.exponent < 0]
    text = f"z={format_rational(t.z)} * " + ("*".join(num) if num else "1")
    if len(den) == 1:
        text += f" / {den[0]}"
    elif den:
        text += " / (" + "*".join(den) + ")"
    return text


def print_rational_function(num: Poly2, den: Poly2) -> str:
    if den == Poly2.one():
        return format_poly(num)
    return f"({format_poly(num)})/({format_poly(den)})"
