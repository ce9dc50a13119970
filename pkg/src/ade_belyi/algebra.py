"""Exact polynomial arithmetic over the rationals.

Polynomials are sparse maps from exponent tuples to ``Fraction``
coefficients, in one or two variables.  Binary forms are bivariate
polynomials whose terms all share one total degree.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, Sequence

from .errors import DomainError

Rational = Fraction


class UndefinedGcdError(DomainError):
    code = "undefined-gcd"


class ZeroPolynomialError(DomainError):
    code = "zero-polynomial"


class ParseError(DomainError):
    code = "parse-error"


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, nvars: int = 2):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = dict(sorted(clean.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c, nvars: int = 2) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 2) -> "Poly":
        exp = [0] * nvars
        exp[i] = 1
        return cls({tuple(exp): 1}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "Poly":
        return cls({tuple(exp): c}, len(exp))

    @classmethod
    def from_univariate(cls, coeffs: Sequence, var: int = 0, nvars: int = 1) -> "Poly":
        """Build from a low-to-high coefficient list."""
        out = {}
        for k, c in enumerate(coeffs):
            exp = [0] * nvars
            exp[var] = k
            out[tuple(exp)] = c
        return cls(out, nvars)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_degree_in(self, i: int) -> int:
        return min(e[i] for e in self.terms)

    def order(self) -> int:
        """Lowest total degree of a term (multiplicity at the origin)."""
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly({e: c for e, c in self.terms.items() if sum(e) == d}, self.nvars)

    def lowest_form(self) -> "Poly":
        return self.homogeneous_part(self.order())

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        return next(iter(self.terms.items()))

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def content_monic(self) -> "Poly":
        """Scale so the grlex-leading coefficient is 1."""
        if not self.terms:
            return self
        _, lc = self.leading()
        return self.scale(1 / lc)

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(other, self.nvars)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly({e: v * c for e, v in self.terms.items()}, self.nvars)

    def shift(self, exp: Sequence[int]) -> "Poly":
        """Multiply by the monomial with exponent ``exp``."""
        return Poly({tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}, self.nvars)

    def unshift(self, exp: Sequence[int]) -> "Poly":
        """Divide by a monomial that is known to divide every term."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a - b for a, b in zip(e, exp))
            if min(ne) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[ne] = c
        return Poly(out, self.nvars)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self.terms.items())))
        return self._hash

    def derivative(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(out, self.nvars)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute polynomial ``subs[i]`` for variable ``i``."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        target = subs[0].nvars
        powers: list[dict[int, Poly]] = [{0: Poly.const(1, target)} for _ in subs]

        def pw(i: int, k: int) -> Poly:
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * subs[i]
            return cache[k]

        out = Poly({}, target)
        for e, c in self.terms.items():
            t = Poly.const(c, target)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            out = out + t
        return out

    def to_univariate(self, var: int = 0) -> "Poly":
        """Collapse to one variable, requiring the others to be absent."""
        out = {}
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != var):
                raise ValueError("polynomial depends on other variables")
            out[(e[var],)] = c
        return Poly(out, 1)

    def dehomogenize(self) -> "Poly":
        """Set x2 = 1 in a bivariate polynomial."""
        out: dict[tuple[int], Fraction] = {}
        for (a, _), c in self.terms.items():
            out[(a,)] = out.get((a,), 0) + c
        return Poly(out, 1)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


class BinaryForm(Poly):
    """Homogeneous bivariate polynomial with a fixed degree."""

    __slots__ = ("degree",)

    def __init__(self, terms=None, degree: int | None = None):
        super().__init__(terms, 2)
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise ValueError("binary form must be homogeneous")
        if degree is None:
            if not degs:
                raise ValueError("degree of the zero form must be given")
            degree = degs.pop()
        elif degs and degs.pop() != degree:
            raise ValueError("terms do not match stated degree")
        self.degree = degree

    @classmethod
    def of(cls, p: Poly, degree: int | None = None) -> "BinaryForm":
        if isinstance(p, BinaryForm) and degree in (None, p.degree):
            return p
        return cls(p.terms, degree)

    def coefficients(self) -> list[Fraction]:
        """Coefficients of x1^n, x1^(n-1) x2, ..., x2^n."""
        n = self.degree
        return [self.coeff((n - k, k)) for k in range(n + 1)]


# univariate helpers (nvars == 1), dense lists low-to-high


def _dense(p: Poly) -> list[Fraction]:
    if p.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    if not p.terms:
        return []
    out = [Fraction(0)] * (p.degree_in(0) + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def _strip(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _from_dense(a: Sequence[Fraction]) -> Poly:
    return Poly.from_univariate(a)


def udivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Univariate long division."""
    num = _dense(a)
    den = _dense(b)
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    lc = den[-1]
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        f = num[-1] / lc
        q[shift] = f
        for i, c in enumerate(den):
            num[i + shift] -= f * c
        num.pop()
        _strip(num)
    return _from_dense(q), _from_dense(num)


def ugcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of univariate polynomials by the Euclidean algorithm."""
    while b:
        a, b = b, udivmod(a, b)[1]
    return a.content_monic()


def uexact_div(a: Poly, b: Poly) -> Poly:
    q, r = udivmod(a, b)
    if r:
        raise ValueError("inexact division")
    return q


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def primitive_integer_coeffs(coeffs: Sequence[Fraction]) -> list[int]:
    """Scale rational coefficients to coprime integers."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def rational_roots(p: Poly) -> list[tuple[Fraction, int]]:
    """Rational roots of a univariate polynomial with multiplicities."""
    a = _dense(p)
    if not a:
        raise ZeroPolynomialError("zero polynomial has every root")
    out: list[tuple[Fraction, int]] = []
    mult0 = 0
    while a and not a[0]:
        a.pop(0)
        mult0 += 1
    if mult0:
        out.append((Fraction(0), mult0))
    if len(a) <= 1:
        return out
    ints = primitive_integer_coeffs(a)
    cand = set()
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            cand.add(Fraction(num, den))
            cand.add(Fraction(-num, den))
    rest = _from_dense(a)
    for r in sorted(cand):
        lin = Poly({(1,): 1, (0,): -r}, 1)
        m = 0
        while rest.degree_in(0) >= 1:
            q, rem = udivmod(rest, lin)
            if rem:
                break
            rest = q
            m += 1
        if m:
            out.append((r, m))
    return sorted(out)


def _yun(f: Poly) -> list[tuple[int, Poly]]:
    """Squarefree decomposition of a univariate polynomial."""
    out = []
    if f.degree_in(0) <= 0:
        return out
    df = f.derivative(0)
    a = ugcd(f, df)
    b = uexact_div(f, a)
    c = uexact_div(df, a)
    d = c - b.derivative(0)
    i = 1
    while b.degree_in(0) > 0:
        a = ugcd(b, d)
        b = uexact_div(b, a)
        c = uexact_div(d, a)
        d = c - b.derivative(0)
        if a.degree_in(0) > 0:
            out.append((i, a.content_monic()))
        i += 1
    return out


def _homogenize(p: Poly, degree: int) -> Poly:
    return Poly({(k, degree - k): c for (k,), c in p.terms.items()}, 2)


def _normalize(p: Poly) -> Poly:
    return p.content_monic()


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor with grlex-leading coefficient 1.

    Bivariate inputs must be homogeneous; they are dehomogenized at
    x2 = 1 and the power of x2 is tracked separately.
    """
    if p.nvars != q.nvars:
        raise ValueError("variable count mismatch")
    if not p and not q:
        raise UndefinedGcdError("gcd(0, 0) is undefined")
    if not p:
        return _normalize(q)
    if not q:
        return _normalize(p)
    if p.nvars == 1:
        return ugcd(p, q)
    if not (p.is_homogeneous() and q.is_homogeneous()):
        raise ValueError("bivariate gcd needs homogeneous inputs")
    x2pow = min(p.min_degree_in(1), q.min_degree_in(1))
    pd, qd = p.dehomogenize(), q.dehomogenize()
    g = ugcd(pd, qd)
    out = _homogenize(g, g.degree_in(0)).shift((0, x2pow))
    return _normalize(out)


def exact_divide(p: Poly, q: Poly) -> Poly:
    """Divide homogeneous bivariate or univariate polynomials exactly."""
    if p.nvars == 1:
        return uexact_div(p, q)
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    if not p:
        return p
    k = q.min_degree_in(1)
    if p.min_degree_in(1) < k:
        raise ValueError("inexact division")
    pd = p.unshift((0, k)).dehomogenize() if k else p.dehomogenize()
    qd = q.unshift((0, k)).dehomogenize() if k else q.dehomogenize()
    quo = uexact_div(pd, qd)
    deg = p.total_degree() - q.total_degree()
    if quo.degree_in(0) > deg:
        raise ValueError("inexact division")
    return _homogenize(quo, deg)


def divides(q: Poly, p: Poly) -> bool:
    try:
        exact_divide(p, q)
    except ValueError:
        return False
    return True


def squarefree_decomposition(p: Poly) -> list[tuple[int, Poly]]:
    """Yun decomposition, highest multiplicity first.

    For a binary form of degree n, a drop in the x1-degree after setting
    x2 = 1 is a root at (1:0); it shows up as a power of x2.
    """
    if not p:
        raise ZeroPolynomialError("zero polynomial has no squarefree decomposition")
    if p.nvars == 1:
        parts = _yun(p)
    else:
        if not p.is_homogeneous():
            raise ValueError("bivariate squarefree decomposition needs a binary form")
        n = p.total_degree()
        pd = p.dehomogenize()
        parts = {m: _homogenize(f, f.degree_in(0)) for m, f in _yun(pd)}
        at_inf = n - pd.degree_in(0)
        if at_inf:
            x2 = Poly.var(1)
            parts[at_inf] = parts[at_inf] * x2 if at_inf in parts else x2
        parts = [(m, _normalize(f)) for m, f in parts.items()]
    return sorted(parts, key=lambda mf: -mf[0])


def multiplicity_profile(p: Poly) -> list[int]:
    """Root multiplicities of a binary form on the projective line, descending."""
    parts = []
    for m, f in squarefree_decomposition(p):
        parts.extend([m] * f.total_degree())
    return sorted(parts, reverse=True)


def radical(p: Poly) -> Poly:
    out = Poly.const(1, p.nvars)
    for _, f in squarefree_decomposition(p):
        out = out * f
    return out


# text format

_POLY_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _PolyParser:
    """Recursive descent over + - * / ^ and parentheses; juxtaposition multiplies."""

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.tokens = []
        self.starts = []
        i = len(text) - len(text.lstrip())
        s = text.rstrip()
        while i < len(s):
            m = _POLY_TOKEN.match(s, i)
            if not m or m.end() == i:
                raise ParseError(f"cannot read {s[i:]!r} in {text!r}", position=i)
            self.tokens.append(m.group(m.lastindex))
            self.starts.append(i)
            i = m.end()
            while i < len(s) and s[i].isspace():
                i += 1
        if not self.tokens:
            raise ParseError("empty polynomial", position=0)
        self.pos = 0

    def error(self, message: str, back: int = 0) -> ParseError:
        """ParseError located at the token ``back`` places before the cursor."""
        k = self.pos - back
        where = self.starts[k] if 0 <= k < len(self.starts) else len(self.text.rstrip())
        return ParseError(message, position=where)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error(f"unexpected end of {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        out = self.expr()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r} in {self.text!r}")
        return out

    def expr(self) -> Poly:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Poly:
        out = self.unary()
        while True:
            tok = self.peek()
            if tok in ("*", "/"):
                self.take()
                rhs = self.unary()
                if tok == "*":
                    out = out * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise self.error(f"can only divide by a nonzero constant in {self.text!r}", 1)
                    out = out.scale(1 / rhs.coeff((0,) * self.nvars))
            elif tok is not None and tok not in ("+", "-", ")", "^", "**"):
                out = out * self.unary()
            else:
                return out

    def unary(self) -> Poly:
        tok = self.peek()
        if tok in ("-", "+"):
            self.take()
            inner = self.unary()
            return -inner if tok == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise self.error(f"bad exponent {tok!r}", 1)
            return base ** int(tok)
        return base

    def atom(self) -> Poly:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise self.error(f"unbalanced parentheses in {self.text!r}", 1)
            return inner
        if tok in self.index:
            return Poly.var(self.index[tok], self.nvars)
        if tok[0].isdigit():
            return Poly.const(Fraction(tok), self.nvars)
        raise self.error(f"unknown symbol {tok!r} in {self.text!r}; expected one of {sorted(self.index)}", 1)


def parse_poly(text: str, names: Sequence[str] = ("x1", "x2")) -> Poly:
    """Parse a polynomial with rational coefficients, e.g. ``x1^2*(3*x2 - 2*x1)``."""
    return _PolyParser(text, names).parse()


def parse_form(text: str, degree: int | None = None) -> BinaryForm:
    p = parse_poly(text)
    if not p.is_homogeneous():
        raise ParseError(f"{text!r} is not homogeneous")
    return BinaryForm(p.terms, degree)


def format_poly(p: Poly, names: Sequence[str] | None = None) -> str:
    """Terms in decreasing graded-lex order, e.g. ``-2*x1^3 + 3*x1^2*x2``; parse_poly reads it back."""
    if names is None:
        names = ("x",) if p.nvars == 1 else ("x1", "x2")
    if not p.terms:
        return "0"
    out = []
    for e, c in p.terms.items():
        mono = "*".join(name if k == 1 else f"{name}^{k}" for name, k in zip(names, e) if k)
        mag = abs(c)
        coef = str(mag) if mag.denominator == 1 else f"({mag})"
        body = mono if mag == 1 and mono else (f"{coef}*{mono}" if mono else coef)
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def x1() -> Poly:
    return Poly.var(0)


def x2() -> Poly:
    return Poly.var(1)

