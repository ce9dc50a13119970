"""Exact arithmetic in cyclotomic fields Q(zeta_N) and polynomials over them.

Elements are kept as coefficient vectors in the power basis of zeta_N,
reduced modulo the N-th cyclotomic polynomial.  This is what lets
formulas containing roots of unity be checked without floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import Poly
from .errors import DomainError


# dense univariate helpers over any field (lists, low degree first)


def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [0 * b[-1]] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] = a[i + k] - c * bi
        a = _trim(a[:-1])
    return _trim(q), a


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd by the Euclidean algorithm."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def poly_derivative(a: Sequence) -> list:
    return _trim([a[i] * i for i in range(1, len(a))])


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def squarefree_profile(a: Sequence) -> list[tuple[int, int]]:
    """Yun's algorithm: (multiplicity, number of distinct roots) pairs."""
    f = _trim(a)
    if len(f) <= 1:
        return []
    out = []
    df = poly_derivative(f)
    g = poly_gcd(f, df)
    b = poly_divmod(f, g)[0]
    c = poly_divmod(df, g)[0]
    d = _sub(c, poly_derivative(b))
    i = 1
    while len(b) > 1:
        h = poly_gcd(b, d)
        if len(h) > 1:
            out.append((i, len(h) - 1))
        b = poly_divmod(b, h)[0]
        c = poly_divmod(d, h)[0]
        d = _sub(c, poly_derivative(b))
        i += 1
    return out


def _sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    zero = (list(a) + list(b))[0] * 0 if (a or b) else 0
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


# the field


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise ValueError("order must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = poly_divmod(num, list(cyclotomic_poly(d)))
            assert not rem
    return tuple(num)


class CycloNumber:
    """An element of Q(zeta_N)."""

    __slots__ = ("n", "c")

    def __init__(self, coeffs: Iterable, n: int):
        self.n = n
        phi = cyclotomic_poly(n)
        c = [Fraction(x) for x in coeffs]
        d = len(phi) - 1
        if len(c) > d:
            c = poly_divmod(c, list(phi))[1]
        self.c = tuple(c) + (Fraction(0),) * (d - len(c))

    @classmethod
    def rational(cls, q, n: int) -> "CycloNumber":
        return cls([q], n)

    @classmethod
    def root(cls, n: int, j: int = 1) -> "CycloNumber":
        """zeta_n ** j."""
        j %= n
        return cls([0] * j + [1], n)

    def _co(self, other) -> "CycloNumber":
        if isinstance(other, CycloNumber):
            if other.n != self.n:
                raise DomainError(f"mixing roots of unity of orders {self.n} and {other.n}")
            return other
        return CycloNumber.rational(other, self.n)

    def __add__(self, other):
        o = self._co(other)
        return CycloNumber([a + b for a, b in zip(self.c, o.c)], self.n)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber([-a for a in self.c], self.n)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        return CycloNumber(poly_mul(list(self.c), list(o.c)) or [0], self.n)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if not self:
            raise ZeroDivisionError("zero has no inverse")
        # extended Euclid on (self, phi) over Q
        r0, r1 = list(cyclotomic_poly(self.n)), _trim(list(self.c))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _sub(s0, poly_mul(q, s1))
        return CycloNumber([x / r1[0] for x in s1], self.n)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = CycloNumber.rational(1, self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.rational(other, self.n)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, self.c))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.c[0] if self.c else Fraction(0)

    def __repr__(self):
        return f"CycloNumber({self})"

    def __str__(self):
        parts = []
        for i, a in enumerate(self.c):
            if not a:
                continue
            mono = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
            if not mono:
                parts.append(str(a))
            elif a == 1:
                parts.append(mono)
            else:
                parts.append(f"{a}*{mono}")
        return " + ".join(parts) if parts else "0"


# bivariate polynomials over Q(zeta_N)


class CPoly:
    """Polynomial in (z, w) with coefficients in Q(zeta_N)."""

    __slots__ = ("n", "terms")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None, n: int):
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(c, CycloNumber):
                c = CycloNumber.rational(c, n)
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def const(cls, c, n: int) -> "CPoly":
        return cls({(0, 0): c}, n)

    @classmethod
    def var(cls, i: int, n: int) -> "CPoly":
        return cls({(1, 0) if i == 0 else (0, 1): 1}, n)

    @classmethod
    def from_poly(cls, p: Poly, n: int) -> "CPoly":
        return cls(dict(p.terms), n)

    def _co(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            return other
        return CPoly.const(other, self.n)

    def __add__(self, other):
        o = self._co(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return CPoly(out, self.n)

    __radd__ = __add__

    def __neg__(self):
        return CPoly({e: -c for e, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return CPoly(out, self.n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = CPoly.const(1, self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self.terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def derivative(self, i: int) -> "CPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = (e[0] - 1, e[1]) if i == 0 else (e[0], e[1] - 1)
                out[ne] = c * e[i]
        return CPoly(out, self.n)

    def substitute_monomials(self, cz: CycloNumber, ez: int, cw: CycloNumber, ew: int) -> dict[int, CycloNumber]:
        """Univariate image of z = cz * s^ez, w = cw * s^ew, as exponent -> coefficient."""
        out: dict[int, CycloNumber] = {}
        for (i, j), c in self.terms.items():
            k = i * ez + j * ew
            val = c * (cz ** i) * (cw ** j)
            out[k] = out[k] + val if k in out else val
        return {k: v for k, v in out.items() if v}

    def rational(self) -> Poly | None:
        if not all(c.is_rational() for c in self.terms.values()):
            return None
        return Poly({e: c.to_fraction() for e, c in self.terms.items()}, 2)

    def divide_exact(self, b: "CPoly") -> "CPoly | None":
        """Quotient when b divides self, else None; b needs a constant leading coefficient in z or in w."""
        var = 0 if b.degree_in(0) > 0 else 1
        top = b.degree_in(var)
        lead_terms = {e: c for e, c in b.terms.items() if e[var] == top}
        if len(lead_terms) != 1:
            return None
        (le, lc), = lead_terms.items()
        if le[1 - var] != 0:
            return None
        inv = lc.inverse()
        rem = self
        quot = CPoly({}, self.n)
        while not rem.is_zero() and rem.degree_in(var) >= top:
            d = rem.degree_in(var)
            part = CPoly({((e[0] - top, e[1]) if var == 0 else (e[0], e[1] - top)): c * inv
                          for e, c in rem.terms.items() if e[var] == d}, self.n)
            quot = quot + part
            rem = rem - part * b
        return quot if rem.is_zero() else None

    def __repr__(self):
        return f"CPoly({self.terms}, {self.n})"


def profile_of_form(coeffs: Mapping[int, CycloNumber], degree: int) -> list[int]:
    """Root multiplicities of a binary form given by x1-exponent -> coefficient (x2 fills the degree)."""
    top = max(coeffs, default=-1)
    if top < 0:
        raise DomainError("zero form")
    zero = CycloNumber.rational(0, next(iter(coeffs.values())).n)
    dense = [coeffs.get(i, zero) for i in range(top + 1)]
    parts = [m for m, cnt in squarefree_profile(dense) for _ in range(cnt)]
    if degree > top:
        parts.append(degree - top)
    return sorted(parts, reverse=True)


def forms_gcd_degree(a: Mapping[int, CycloNumber], b: Mapping[int, CycloNumber], degree: int) -> int:
    """Degree of the gcd of two binary forms of the same degree."""
    n = next(iter(a.values())).n
    zero = CycloNumber.rational(0, n)
    da = [a.get(i, zero) for i in range(max(a) + 1)]
    db = [b.get(i, zero) for i in range(max(b) + 1)]
    g = poly_gcd(da, db)
    at_inf = min(degree - (len(_trim(da)) - 1), degree - (len(_trim(db)) - 1))
    return (len(g) - 1) + at_inf


def map_coeffs(p: Mapping, fn: Callable) -> dict:
    return {k: fn(v) for k, v in p.items()}
