"""Which Belyi pairs lift to finite covers branched in an ADE curve germ.

Four jobs live here: typing a passport against an ADE label, deciding
whether the fibre over a Belyi pair is empty, producing the explicit
covers that exist when the pair is branched over two points, and checking
such a cover by recomputing its branch curve.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .algebra import Poly, format_poly, squarefree_decomposition
from .belyi import (
    FormPair,
    Passport,
    PermTriple,
    check_riemann_hurwitz,
    is_belyi,
    passport_of_forms,
    passport_of_triple,
)
from .cyclotomic import CPoly, CycloNumber, _trim, poly_divmod, poly_gcd, profile_of_form
from .errors import DomainError, MalformedInputError
from .pullback import (
    BZeroChain,
    CyclicCoverSpec,
    canonical_trails,
    d4_m0,
    lemma1_exponents,
    pullback_cyclic,
)
from .resolution import (
    GERM_VARS,
    GermCurve,
    ResolutionGraph,
    TrailSet,
    ade_germ,
    parse_ade_label,
    parse_germ,
    resolve_minimal,
)


class ConstraintError(DomainError):
    code = "constraint-violated"


class NoBel2FamilyError(DomainError):
    code = "no-bel2-family"


class PointConditionError(DomainError):
    code = "point-condition"


class NotOverEError(DomainError):
    code = "not-over-E"


class VerificationError(DomainError):
    code = "verification-failure"


class OutOfScopeFormulaError(DomainError):
    code = "out-of-scope"


SLOT_NAMES = ("c0", "c1", "cinf")


def _label(kind: str, k: int) -> str:
    return f"{kind}{k}"


# typing a passport


@dataclass(frozen=True)
class AssignmentResult:
    order: tuple[str, str, str]
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    ok: bool
    r1: int
    r2: int

    def to_json(self) -> dict:
        return {"order": list(self.order), "c1": list(self.parts[0]), "c2": list(self.parts[1]),
                "c3": list(self.parts[2]), "ok": self.ok, "r1": self.r1, "r2": self.r2}


@dataclass(frozen=True)
class TypeReport:
    label: str
    assignments: tuple[AssignmentResult, ...]

    @property
    def typed(self) -> bool:
        return any(a.ok for a in self.assignments)

    @property
    def passing(self) -> list[AssignmentResult]:
        return [a for a in self.assignments if a.ok]

    def to_json(self) -> dict:
        first = self.passing[0] if self.passing else None
        return {
            "type": self.label,
            "typed": self.typed,
            "slack": [first.r1, first.r2] if first else None,
            "assignments": [a.to_json() for a in self.assignments],
        }


def _slack(parts: Sequence[int], good, allowed) -> int | None:
    """Number of parts failing ``good``; None if one of them also fails ``allowed``."""
    bad = [p for p in parts if not good(p)]
    if any(not allowed(p) for p in bad):
        return None
    return len(bad)


def _clause(kind: str, k: int, c1, c2, n: int) -> tuple[int, int] | None:
    if kind == "A" and k % 2 == 1:
        h = (k + 1) // 2
        r1 = _slack(c1, lambda p: p == h, lambda p: h % p == 0)
        return (r1, 0) if r1 is not None and r1 <= 2 else None
    if kind == "A":
        h = k + 1
        r1 = _slack(c1, lambda p: p == h, lambda p: h % p == 0)
        r2 = _slack(c2, lambda p: p == 2, lambda p: p == 1)
    elif kind == "D" and k % 2 == 0:
        h = (k - 2) // 2
        r1 = _slack(c1, lambda p: p % h == 0, lambda p: True)
        return (r1, 0) if r1 <= 2 else None
    elif kind == "D":
        h = k - 2
        r1 = _slack(c1, lambda p: p % h == 0, lambda p: True)
        r2 = _slack(c2, lambda p: p == 2, lambda p: p == 1)
    elif k == 6:
        r1 = _slack(c1, lambda p: p == 4, lambda p: p in (1, 2))
        r2 = _slack(c2, lambda p: p == 3, lambda p: p == 1)
    elif k == 7:
        r1 = _slack(c1, lambda p: p % 2 == 0, lambda p: True)
        r2 = _slack(c2, lambda p: p == 3, lambda p: p == 1)
    else:
        r1 = _slack(c1, lambda p: p == 3, lambda p: p == 1)
        r2 = _slack(c2, lambda p: p == 5, lambda p: p == 1)
    if r1 is None or r2 is None or r1 + r2 > 2:
        return None
    return (r1, r2)


def type_check(p: Passport, label: str) -> TypeReport:
    """Evaluate the typing clause for ``label`` on all six orderings of the passport.

    D4 accepts every pair.  A0 and A1 have no clause of their own: a pair
    lifts to A0 only in degree 1 and to A1 only when it is z -> z^n.
    """
    kind, k = parse_ade_label(label)
    if not check_riemann_hurwitz(p):
        raise MalformedInputError("passport fails the genus-zero count", genus=p.genus())
    results = []
    for perm in itertools.permutations(range(3)):
        parts = tuple(p.slots[i] for i in perm)
        order = tuple(SLOT_NAMES[i] for i in perm)
        if kind == "D" and k == 4:
            r = (0, 0)
        elif kind == "A" and k == 0:
            r = (0, 0) if p.n == 1 else None
        elif kind == "A" and k == 1:
            r = (0, 0) if p.bel2 else None
        else:
            r = _clause(kind, k, parts[0], parts[1], p.n)
        results.append(AssignmentResult(order, parts, r is not None, *(r or (0, 0))))
    return TypeReport(_label(kind, k), tuple(results))


def contractibility_counts(graph: ResolutionGraph, trails: TrailSet, p: Passport,
                           assignment: Sequence[int]) -> tuple[int, int, int, bool]:
    """Per-trail counts of cycles that block contraction to a smooth point.

    ``assignment[j]`` is the passport slot placed over the j-th trail in
    the canonical order (branch trails by branch number, then the rest).
    """
    ordered = canonical_trails(graph, trails)
    rs = []
    ok = True
    for j in range(3):
        parts = p.slots[assignment[j]]
        if j >= len(ordered) or not ordered[j].exceptional:
            rs.append(0)
            continue
        t = ordered[j]
        order = t.order(graph)
        if t.completely_exceptional:
            rs.append(sum(1 for x in parts if x != order))
            if any(order % x for x in parts):
                ok = False
        else:
            rs.append(sum(1 for x in parts if x % order))
    return rs[0], rs[1], rs[2], ok and sum(rs) <= 2


# cover formulas

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(omega|ω|z|w)|(\*\*|[-+*^()]))")


class _ExprParser:
    def __init__(self, text: str, n: int, j: int):
        self.text = text
        self.n, self.j = n, j
        self.tokens = self._lex(text)
        self.pos = 0
        self.groups: list[CPoly] = []

    @staticmethod
    def _lex(text: str) -> list[str]:
        out, i = [], 0
        text = text.strip()
        while i < len(text):
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise MalformedInputError(f"cannot read {text[i:]!r} in cover formula")
            out.append(m.group(m.lastindex))
            i = m.end()
            while i < len(text) and text[i].isspace():
                i += 1
        return out

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise MalformedInputError(f"unexpected end of formula {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> CPoly:
        out = self.expr()
        if self.peek() is not None:
            raise MalformedInputError(f"unexpected {self.peek()!r} in {self.text!r}")
        return out

    def expr(self) -> CPoly:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> CPoly:
        out = self.unary()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                out = out * self.unary()
            elif tok is not None and (tok == "(" or tok[0].isdigit() or tok in ("z", "w", "omega", "ω")):
                out = out * self.unary()
            else:
                return out

    def unary(self) -> CPoly:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> CPoly:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise MalformedInputError(f"exponent must be a non-negative integer, got {tok!r}")
            return base ** int(tok)
        return base

    def atom(self) -> CPoly:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise MalformedInputError(f"unbalanced parentheses in {self.text!r}")
            self.groups.append(inner)
            return inner
        if tok == "z":
            return CPoly.var(0, self.n)
        if tok == "w":
            return CPoly.var(1, self.n)
        if tok in ("omega", "ω"):
            return CPoly.const(CycloNumber.root(self.n, self.j), self.n)
        if tok[0].isdigit():
            return CPoly.const(Fraction(tok), self.n)
        raise MalformedInputError(f"unexpected {tok!r} in {self.text!r}")


@dataclass(frozen=True)
class CoverFormula:
    """A germ of a finite cover u = u(z, w), v = v(z, w).

    ``omega`` in the expressions stands for exp(2 pi i j / n) with
    (n, j) = (omega_order, omega_power).
    """

    u: str
    v: str
    omega_order: int = 1
    omega_power: int = 1
    label: str | None = None
    family: str | None = None
    params: tuple[tuple[str, int], ...] = ()
    degree: int | None = None
    branch: str | None = None
    components: tuple[str, ...] = ()

    def parsed(self) -> tuple[CPoly, CPoly, list[CPoly]]:
        if self.omega_order < 1:
            raise MalformedInputError("omega order must be positive")
        pu = _ExprParser(self.u, self.omega_order, self.omega_power)
        pv = _ExprParser(self.v, self.omega_order, self.omega_power)
        u, v = pu.parse(), pv.parse()
        extra = [_ExprParser(c, self.omega_order, self.omega_power).parse() for c in self.components]
        return u, v, pu.groups + pv.groups + extra

    def to_json(self) -> dict:
        out = {"u": self.u, "v": self.v}
        if self.omega_order != 1:
            out["omega"] = {"n": self.omega_order, "j": self.omega_power}
        for key in ("label", "family", "degree", "branch"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.params:
            out["params"] = dict(self.params)
        if self.components:
            out["components"] = list(self.components)
        return out

    @classmethod
    def from_json(cls, data: Mapping | str) -> "CoverFormula":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise MalformedInputError(f"formula is not valid JSON: {exc}") from None
        if not isinstance(data, Mapping) or "u" not in data or "v" not in data:
            raise MalformedInputError("formula needs string fields u and v")
        om = data.get("omega", 1)
        if isinstance(om, Mapping):
            n, j = int(om.get("n", 1)), int(om.get("j", 1))
        else:
            n, j = int(om), int(data.get("omega_power", 1))
        return cls(str(data["u"]), str(data["v"]), n, j, data.get("label"), data.get("family"),
                   tuple(sorted((str(k), int(x)) for k, x in (data.get("params") or {}).items())),
                   data.get("degree"), data.get("branch"), tuple(data.get("components") or ()))


# the Bel2 catalog


@dataclass(frozen=True)
class FamilyInfo:
    label: str
    index: int
    formula: str
    constraints: tuple[str, ...]

    def to_json(self) -> dict:
        return {"type": self.label, "family": self.index, "formula": self.formula,
                "constraints": list(self.constraints)}


def _need(cond: bool, text: str, **details):
    if not cond:
        raise ConstraintError(f"side condition fails: {text}", condition=text, **details)


def _pw(base: str, e: int) -> str:
    if e == 0:
        return "1"
    if e == 1:
        return base
    return f"{base}^{e}"


def _get(params: Mapping[str, int], name: str, default=None) -> int:
    val = params.get(name, default)
    if val is None:
        raise ConstraintError(f"parameter {name} is required", parameter=name)
    return int(val)


def family_infos(label: str) -> list[FamilyInfo]:
    """The Bel2 families for a type, with their side conditions in words."""
    kind, k = parse_ade_label(label)
    lab = _label(kind, k)
    g = "gcd(m1, m2) = 1"
    if kind == "A" and k == 0:
        return [FamilyInfo(lab, 1, "u = z^m, v = w", ("n = 1", "m >= 2"))]
    if kind == "A" and k == 1:
        return [FamilyInfo(lab, 1, "u = z^(n m1), v = w^(n m2)", ("m1 >= m2 >= 1", "n m2 >= 2", g))]
    if kind == "A" and k % 2 == 1:
        h = (k + 1) // 2
        return [
            FamilyInfo(lab, 1, "u = (z^m + w^m0)^n, v = w", (f"n m0 = {h}", "n, m, m0 > 1", "gcd(m, m0) = 1")),
            FamilyInfo(lab, 2, "u = z^(n m1), v = z^m1 + w^m2", (f"n = {h}", "m1 >= 1", "m2 > 1", g)),
            FamilyInfo(lab, 3, "u = (omega_j z^m1 - w^m2)^n, v = z^m1 - w^m2",
                       (f"n = {h}", "m1, m2 > 1", "1 <= j <= n-1", g)),
        ]
    if kind == "D" and k == 4:
        return [
            FamilyInfo(lab, 1, "u = z^(m1 n), v = (z^m1 + w^m2)^n", ("n >= 2", "m2 >= 2", g)),
            FamilyInfo(lab, 2, "u = (z^m1 - w^m2)^n, v = (z^m1 - omega_j w^m2)^n",
                       ("n >= 2", "max(m1, m2) >= 2", "1 <= j <= n-1", g)),
        ]
    if kind == "D" and k % 2 == 1:
        h = k - 2
        return [FamilyInfo(lab, 1, f"u = z^(2 m1), v = z^(m1 {h}) + w^m2",
                           ("n = 2", "m2 > 1", f"gcd({h}, m2) = 1", g))]
    if kind == "D":
        h = (k - 2) // 2
        return [
            FamilyInfo(lab, 1, "u = z^(n1 m1), v = (z^(m1 k2) + w^m2)^n",
                       (f"k1 = gcd(n, {h}), k2 = {h}/k1, n1 = n/k1", "n >= 2", "m2 >= 2", "n1 m1 >= 2",
                        "gcd(m2, k2) = 1", g)),
            FamilyInfo(lab, 2, "u = (z^m1 - w^m2)^n1, v = z^(m1 n)",
                       (f"n = {h} n1", "n1 >= 2", "m2 >= 2", g)),
            FamilyInfo(lab, 3, "u = (z^m1 - w^m2)^n1, v = (z^m1 - omega_j w^m2)^n",
                       (f"n = {h} n1", "n1 >= 2", "max(m1, m2) >= 2", "1 <= j <= n-1", g)),
        ]
    if kind == "E" and k == 7:
        return [FamilyInfo(lab, 1, "u = z^(3 m1), v = z^(2 m1) + w^m2", ("n = 3", "m2 > 1", "gcd(2, m2) = 1", g))]
    raise NoBel2FamilyError(f"type {lab} has no covers over a Belyi pair branched at two points; "
                            "every such cover lies over a pair branched at three points", type=lab)


def _family_spec(label: str, params: Mapping[str, int], family: int):
    infos = family_infos(label)
    if not 1 <= family <= len(infos):
        raise MalformedInputError(f"type {infos[0].label} has {len(infos)} families", families=len(infos))
    kind, k = parse_ade_label(label)
    p = {key: int(val) for key, val in params.items() if val is not None}
    m1 = p.get("m1", 1)
    m2 = p.get("m2", 1)

    def coprime():
        _need(gcd(m1, m2) == 1, "gcd(m1, m2) = 1", m1=m1, m2=m2)
        _need(m1 >= 1 and m2 >= 1, "m1, m2 >= 1")

    N, j = 1, 1
    if kind == "A" and k == 0:
        m = _get(p, "m")
        _need(p.get("n", 1) == 1, "n = 1")
        _need(m >= 2, "m >= 2", m=m)
        u, v, br, used = _pw("z", m), "w", "u", {"n": 1, "m": m}
    elif kind == "A" and k == 1:
        n = _get(p, "n")
        coprime()
        _need(n >= 1 and m1 >= m2, "n >= 1 and m1 >= m2 >= 1", n=n, m1=m1, m2=m2)
        _need(n * m2 >= 2, "n m2 >= 2", n=n, m2=m2)
        u, v, br, used = _pw("z", n * m1), _pw("w", n * m2), "u*v", {"n": n, "m1": m1, "m2": m2}
    elif kind == "A":
        h = (k + 1) // 2
        if family == 1:
            n, m = _get(p, "n"), _get(p, "m")
            _need(n > 1 and h % n == 0, f"n > 1 divides {h}", n=n)
            m0 = p.get("m0", h // n)
            _need(n * m0 == h, f"n m0 = {h}", n=n, m0=m0)
            _need(m > 1 and m0 > 1, "m, m0 > 1", m=m, m0=m0)
            _need(gcd(m, m0) == 1, "gcd(m, m0) = 1", m=m, m0=m0)
            u, v = f"({_pw('z', m)} + {_pw('w', m0)})^{n}", "w"
            used = {"n": n, "m": m, "m0": m0}
        else:
            n = p.get("n", h)
            _need(n == h, f"n = {h}", n=n)
            coprime()
            if family == 2:
                _need(m2 > 1, "m2 > 1", m2=m2)
                u, v = _pw("z", n * m1), f"{_pw('z', m1)} + {_pw('w', m2)}"
                used = {"n": n, "m1": m1, "m2": m2}
            else:
                j = p.get("j", 1)
                _need(m1 > 1 and m2 > 1, "m1, m2 > 1", m1=m1, m2=m2)
                _need(1 <= j <= n - 1, "1 <= j <= n-1", j=j)
                N = n
                u, v = f"(omega*{_pw('z', m1)} - {_pw('w', m2)})^{n}", f"{_pw('z', m1)} - {_pw('w', m2)}"
                used = {"n": n, "m1": m1, "m2": m2, "j": j}
        br = f"u*(u - v^{h})"
    elif kind == "D" and k == 4:
        n = _get(p, "n")
        _need(n >= 2, "n >= 2", n=n)
        coprime()
        if family == 1:
            _need(m2 >= 2, "m2 >= 2", m2=m2)
            u, v = _pw("z", m1 * n), f"({_pw('z', m1)} + {_pw('w', m2)})^{n}"
            used = {"n": n, "m1": m1, "m2": m2}
        else:
            j = p.get("j", 1)
            _need(max(m1, m2) >= 2, "max(m1, m2) >= 2", m1=m1, m2=m2)
            _need(1 <= j <= n - 1, "1 <= j <= n-1", j=j)
            N = n
            u = f"({_pw('z', m1)} - {_pw('w', m2)})^{n}"
            v = f"({_pw('z', m1)} - omega*{_pw('w', m2)})^{n}"
            used = {"n": n, "m1": m1, "m2": m2, "j": j}
        br = "u*v*(u - v)"
    elif kind == "D" and k % 2 == 1:
        h = k - 2
        n = p.get("n", 2)
        _need(n == 2, "n = 2", n=n)
        coprime()
        _need(m2 > 1, "m2 > 1", m2=m2)
        _need(gcd(h, m2) == 1, f"gcd({h}, m2) = 1", m2=m2)
        u, v = _pw("z", 2 * m1), f"{_pw('z', m1 * h)} + {_pw('w', m2)}"
        br = f"u*(v^2 - u^{h})"
        used = {"n": 2, "m1": m1, "m2": m2}
    elif kind == "D":
        h = (k - 2) // 2
        n = _get(p, "n")
        coprime()
        if family == 1:
            _need(n >= 2, "n >= 2", n=n)
            k1 = gcd(n, h)
            k2, n1 = h // k1, n // k1
            _need(m2 >= 2, "m2 >= 2", m2=m2)
            _need(n1 * m1 >= 2, "n1 m1 >= 2", n1=n1, m1=m1)
            # gcd(n1, k2) = 1 already, so only m2 matters; gcd(n m2, k2) = 1 would drop e.g. k = 4, n = 2
            _need(gcd(m2, k2) == 1, "gcd(m2, k2) = 1", m2=m2, k2=k2)
            u, v = _pw("z", n1 * m1), f"({_pw('z', m1 * k2)} + {_pw('w', m2)})^{n}"
            used = {"n": n, "m1": m1, "m2": m2, "k1": k1, "k2": k2, "n1": n1}
        else:
            _need(n % h == 0, f"n = {h} n1", n=n)
            n1 = n // h
            _need(n1 >= 2, "n1 >= 2", n1=n1)
            if family == 2:
                _need(m2 >= 2, "m2 >= 2", m2=m2)
                u, v = f"({_pw('z', m1)} - {_pw('w', m2)})^{n1}", _pw("z", m1 * n)
                used = {"n": n, "m1": m1, "m2": m2, "n1": n1}
            else:
                j = p.get("j", 1)
                _need(max(m1, m2) >= 2, "max(m1, m2) >= 2", m1=m1, m2=m2)
                _need(1 <= j <= n - 1, "1 <= j <= n-1", j=j)
                N = n
                u = f"({_pw('z', m1)} - {_pw('w', m2)})^{n1}"
                v = f"({_pw('z', m1)} - omega*{_pw('w', m2)})^{n}"
                used = {"n": n, "m1": m1, "m2": m2, "n1": n1, "j": j}
        br = f"u*v*(v - u^{h})"
    else:
        n = p.get("n", 3)
        _need(n == 3, "n = 3", n=n)
        coprime()
        _need(m2 > 1, "m2 > 1", m2=m2)
        # with m2 even the curve over the center is a double cover of the one for m2 = 1
        _need(m2 % 2 == 1, "gcd(2, m2) = 1", m2=m2)
        u, v = _pw("z", 3 * m1), f"{_pw('z', 2 * m1)} + {_pw('w', m2)}"
        br = "u*(u^2 - v^3)"
        used = {"n": 3, "m1": m1, "m2": m2}
    return u, v, N, j, br, used


def bel2_catalog(label: str, params: Mapping[str, int], family: int = 1) -> CoverFormula:
    """Explicit cover of the requested family, after checking its side conditions."""
    u, v, N, j, br, used = _family_spec(label, params, family)
    lab = family_infos(label)[0].label
    formula = CoverFormula(u, v, N, j, lab, f"{lab}/{family}", tuple(sorted(used.items())), None, br)
    return CoverFormula(u, v, N, j, lab, formula.family, formula.params,
                        local_degree(*formula.parsed()[:2]), br)


# local degree and weights


def _weight_constraints(p: CPoly) -> set[tuple[int, int]]:
    out = set()
    exps = list(p.terms)
    for (i1, j1), (i2, j2) in itertools.combinations(exps, 2):
        a, b = j2 - j1, i1 - i2
        if a == 0 and b == 0:
            continue
        if a * b <= 0:
            out.add((0, 0))
            continue
        g = gcd(a, b)
        out.add((abs(a) // g, abs(b) // g))
    return out


def quasi_homogeneous_weights(*polys: CPoly) -> tuple[int, int] | None:
    """Positive weights making every poly weighted homogeneous, or None."""
    cons = set()
    for p in polys:
        cons |= _weight_constraints(p)
    if not cons:
        return (1, 1)
    if len(cons) != 1 or (0, 0) in cons:
        return None
    return next(iter(cons))


def _wdeg(p: CPoly, a: int, b: int) -> int:
    return min(a * i + b * j for i, j in p.terms)


def local_degree(u: CPoly, v: CPoly) -> int | None:
    """Degree of a quasi-homogeneous finite map germ, du dv / (a b)."""
    w = quasi_homogeneous_weights(u, v)
    if w is None or u.is_zero() or v.is_zero():
        return None
    a, b = w
    num = _wdeg(u, a, b) * _wdeg(v, a, b)
    return num // (a * b) if num % (a * b) == 0 else None


# verification of a cover formula


@dataclass
class NormalFormCheck:
    germ: GermCurve
    label: str | None
    components: list[dict]
    degree: int | None
    center_valuation: tuple[int, int] | None
    expected: str | None = None

    @property
    def matches(self) -> bool | None:
        if self.expected is None:
            return None
        return self.label == self.expected

    def to_json(self) -> dict:
        out = {
            "branch": format_poly(self.germ.equation, GERM_VARS),
            "type": self.label,
            "components": self.components,
            "degree": self.degree,
        }
        if self.expected is not None:
            out["expected"] = self.expected
            out["matches"] = self.matches
        return out


def _normalize_component(p: CPoly) -> CPoly:
    lead = p.terms[max(p.terms)]
    inv = lead.inverse()
    return CPoly({e: c * inv for e, c in p.terms.items()}, p.n)


def _binomial_shape(p: CPoly):
    """(a, alpha, b, beta) for a z^alpha + b w^beta, else None."""
    if len(p.terms) != 2:
        return None
    items = sorted(p.terms.items())
    (e1, c1), (e2, c2) = items
    zs = [(e, c) for e, c in items if e[1] == 0 and e[0] > 0]
    ws = [(e, c) for e, c in items if e[0] == 0 and e[1] > 0]
    if len(zs) != 1 or len(ws) != 1:
        return None
    return zs[0][1], zs[0][0][0], ws[0][1], ws[0][0][1]


def _bezout(a: int, b: int) -> tuple[int, int]:
    """x, y with x a - y b = 1 for coprime a, b."""
    x = pow(a, -1, b) if b > 1 else 1
    y = (x * a - 1) // b
    return x, y


def _parametrize(comp: CPoly):
    """(cz, ez, cw, ew) with z = cz s^ez, w = cw s^ew covering the component."""
    n = comp.n
    one, zero = CycloNumber.rational(1, n), CycloNumber.rational(0, n)
    terms = comp.terms
    if set(terms) == {(1, 0)}:
        return zero, 1, one, 1
    if set(terms) == {(0, 1)}:
        return one, 1, zero, 1
    shape = _binomial_shape(comp)
    if shape is None:
        raise OutOfScopeFormulaError("Jacobian component is not an axis, a binomial, or a factor of u, v, u - v",
                                     component=_cpoly_str(comp))
    a, alpha, b, beta = shape
    if gcd(alpha, beta) != 1:
        raise OutOfScopeFormulaError("binomial component with non-coprime exponents",
                                     component=_cpoly_str(comp))
    r = -b / a
    x, y = _bezout(alpha, beta)
    return r ** x, beta, r ** y, alpha


def _image_equation(pu: dict, pv: dict) -> Poly:
    u, v = Poly.var(0), Poly.var(1)
    if not pu and not pv:
        raise VerificationError("a Jacobian component is contracted to the origin")
    if not pu:
        return u
    if not pv:
        return v
    if len(pu) != 1 or len(pv) != 1:
        raise OutOfScopeFormulaError("image of a Jacobian component is not a monomial curve")
    (e1, c1), = pu.items()
    (e2, c2), = pv.items()
    g = gcd(e1, e2)
    p, q = e1 // g, e2 // g
    lam = (c1 ** q) / (c2 ** p)
    if not lam.is_rational():
        raise OutOfScopeFormulaError("image of a Jacobian component has irrational coefficients")
    return u ** q - (v ** p).scale(lam.to_fraction())


def _divisor_image(comp: CPoly, u: CPoly, v: CPoly) -> Poly | None:
    """Image of a non-axis component that divides u, v or u - v; None if it divides none of them."""
    if set(comp.terms) in ({(1, 0)}, {(0, 1)}):
        return None
    in_u = u.divide_exact(comp) is not None
    in_v = v.divide_exact(comp) is not None
    if in_u and in_v:
        raise VerificationError("a Jacobian component is contracted to the origin")
    x, y = Poly.var(0), Poly.var(1)
    if in_u:
        return x
    if in_v:
        return y
    if (u - v).divide_exact(comp) is not None:
        return x - y
    return None


def _cpoly_str(p: CPoly) -> str:
    r = p.rational()
    if r is not None:
        return format_poly(r, ("z", "w"))
    parts = []
    for (i, j), c in sorted(p.terms.items(), reverse=True):
        mono = "*".join(x for x in (_pw("z", i) if i else "", _pw("w", j) if j else "") if x)
        parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts)


def jacobian_components(u: CPoly, v: CPoly, candidates: Sequence[CPoly]) -> list[tuple[CPoly, int]]:
    """Split the Jacobian determinant over the candidate curves; the rest must be a constant."""
    n = u.n
    jac = u.derivative(0) * v.derivative(1) - u.derivative(1) * v.derivative(0)
    if jac.is_zero():
        raise VerificationError("Jacobian determinant vanishes identically; the map is not finite")
    pool = [CPoly.var(0, n), CPoly.var(1, n)]
    for c in candidates:
        if c.is_constant() or c.is_zero():
            continue
        nc = _normalize_component(c)
        if nc not in pool:
            pool.append(nc)
    found = []
    rest = jac
    for c in pool:
        e = 0
        while True:
            q = rest.divide_exact(c)
            if q is None:
                break
            rest = q
            e += 1
        if e:
            found.append((c, e))
    if not rest.is_constant():
        raise VerificationError("Jacobian has a factor that is neither an axis nor a listed binomial",
                                cofactor=_cpoly_str(rest))
    return found


def verify_normal_form(c: CoverFormula) -> NormalFormCheck:
    """Recompute the branch curve of a cover formula and its ADE type."""
    u, v, groups = c.parsed()
    comps = jacobian_components(u, v, groups)
    images: list[Poly] = []
    report = []
    for comp, e in comps:
        img = _divisor_image(comp, u, v)
        if img is None:
            cz, ez, cw, ew = _parametrize(comp)
            img = _image_equation(u.substitute_monomials(cz, ez, cw, ew),
                                  v.substitute_monomials(cz, ez, cw, ew))
        norm = img.content_monic()
        if norm not in images:
            images.append(norm)
        report.append({"component": _cpoly_str(comp), "multiplicity": e,
                       "image": format_poly(norm, GERM_VARS)})
    branch = Poly.const(1)
    for img in images:
        branch = branch * img
    if c.branch is not None:
        claimed = parse_germ(c.branch).equation
        if claimed.content_monic() != branch.content_monic():
            raise VerificationError(
                "branch curve of the formula differs from the claimed one",
                claimed=c.branch, computed=format_poly(branch, GERM_VARS))
    germ = GermCurve(branch, tuple(images), None)
    graph, _ = resolve_minimal(germ)
    from .resolution import ade_type_of_graph
    label = ade_type_of_graph(graph, branch)
    return NormalFormCheck(germ, label, report, local_degree(u, v), graph.center_valuation(), c.label)


# beta of a cover


@dataclass(frozen=True)
class BetaForms:
    """(h1 : h2) over Q(zeta_N), as x1-exponent -> coefficient maps of a given degree."""

    h1: dict
    h2: dict
    degree: int
    weights: tuple[int, int]
    order: int

    def _diff(self) -> dict:
        keys = set(self.h1) | set(self.h2)
        zero = CycloNumber.rational(0, self.order)
        out = {k: self.h1.get(k, zero) - self.h2.get(k, zero) for k in keys}
        return {k: c for k, c in out.items() if c}

    def passport(self) -> Passport:
        return Passport(tuple(profile_of_form(self.h1, self.degree)),
                        tuple(profile_of_form(self._diff(), self.degree)),
                        tuple(profile_of_form(self.h2, self.degree)))

    def form_pair(self) -> FormPair:
        def conv(h):
            if not all(c.is_rational() for c in h.values()):
                raise OutOfScopeFormulaError("the Belyi pair has non-rational coefficients")
            return Poly({(i, self.degree - i): c.to_fraction() for i, c in h.items()})
        return FormPair(conv(self.h1), conv(self.h2))


def _as_cpolys(F) -> tuple[CPoly, CPoly, int]:
    if isinstance(F, CoverFormula):
        u, v, _ = F.parsed()
        return u, v, F.omega_order
    u, v = F
    conv = []
    for p in (u, v):
        if isinstance(p, str):
            p = _ExprParser(p, 1, 1).parse()
        elif isinstance(p, Poly):
            p = CPoly.from_poly(p, 1)
        conv.append(p)
    return conv[0], conv[1], conv[0].n


def _initial(p: CPoly, a: int, b: int) -> tuple[int, CPoly]:
    d = _wdeg(p, a, b)
    return d, CPoly({e: c for e, c in p.terms.items() if a * e[0] + b * e[1] == d}, p.n)


def _to_form(p: CPoly, a: int, b: int, imin: int, smax: int) -> dict:
    out = {}
    for (i, j), c in p.terms.items():
        s, r = divmod(i - imin, b)
        assert r == 0
        out[s] = c
    return out


def _candidate_weights(u: CPoly, v: CPoly, p: int, q: int) -> list[tuple[int, int]]:
    cands = {(1, 1)}
    pairs = list(itertools.combinations(u.terms, 2)) + list(itertools.combinations(v.terms, 2))
    for (i1, j1), (i2, j2) in pairs:
        x, y = j2 - j1, i1 - i2
        if x * y > 0:
            g = gcd(x, y)
            cands.add((abs(x) // g, abs(y) // g))
    for (i1, j1) in u.terms:
        for (i2, j2) in v.terms:
            x, y = p * j2 - q * j1, q * i1 - p * i2
            if x * y > 0:
                g = gcd(x, y)
                cands.add((abs(x) // g, abs(y) // g))
    return sorted(cands)


def beta_forms(F, center: tuple[int, int] = (1, 1)) -> BetaForms:
    """Restriction of a cover to the curve over the center of the resolution.

    With ``center`` = (p, q) the orders of u and v along the target curve,
    u^q / v^p restricts to a coordinate there.  The source curve is the
    weighted blowup with weights (a, b) on (z, w); weights are tried at
    the breakpoints of the Newton polygons and the one giving a non-constant
    map is kept.  With p = q = 1 and a = b = 1 this is the pair of lowest
    homogeneous parts.
    """
    u, v, order = _as_cpolys(F)
    if u.is_zero() or v.is_zero():
        raise NotOverEError("both functions must be nonzero")
    p, q = center
    g = gcd(p, q)
    p, q = p // g, q // g
    found = []
    for a, b in _candidate_weights(u, v, p, q):
        du, iu = _initial(u, a, b)
        dv, iv = _initial(v, a, b)
        if q * du != p * dv:
            continue
        A, B = iu ** q, iv ** p
        imin = min(i for i, _ in list(A.terms) + list(B.terms))
        smax = max((i - imin) // b for i, _ in list(A.terms) + list(B.terms))
        h1 = _to_form(A, a, b, imin, smax)
        h2 = _to_form(B, a, b, imin, smax)
        h1, h2, deg = _reduce_forms(h1, h2, smax, order)
        if deg == 0:
            continue
        found.append(BetaForms(h1, h2, deg, (a, b), order))
    if not found:
        raise NotOverEError("no weighting of the source makes the cover restrict to a map onto the "
                            "exceptional curve", center=[p, q])
    if len({(tuple(sorted(f.h1.items(), key=lambda kv: kv[0])), f.degree) for f in found}) > 1:
        raise NotOverEError("several weightings restrict to different maps", center=[p, q])
    return found[0]


def _reduce_forms(h1: dict, h2: dict, degree: int, order: int) -> tuple[dict, dict, int]:
    zero = CycloNumber.rational(0, order)
    d1 = _trim([h1.get(i, zero) for i in range(degree + 1)])
    d2 = _trim([h2.get(i, zero) for i in range(degree + 1)])
    g = poly_gcd(d1, d2)
    if len(g) > 1:
        d1 = poly_divmod(d1, g)[0]
        d2 = poly_divmod(d2, g)[0]
    degree -= len(g) - 1
    inf = min(degree - (len(d1) - 1), degree - (len(d2) - 1))
    degree -= inf
    # a common power of x1 shows up as leading zeros
    low = min(next(i for i, c in enumerate(d1) if c), next(i for i, c in enumerate(d2) if c))
    d1, d2 = d1[low:], d2[low:]
    degree -= low
    return ({i: c for i, c in enumerate(d1) if c}, {i: c for i, c in enumerate(d2) if c}, degree)


def beta_of_cover(F, center: tuple[int, int] = (1, 1)) -> FormPair:
    """The Belyi pair a cover induces on the curve over the center, as rational forms."""
    return beta_forms(F, center).form_pair()


def beta_of_formula(c: CoverFormula) -> tuple[BetaForms, NormalFormCheck]:
    """Beta computed over the center of the formula's own branch curve."""
    check = verify_normal_form(c)
    return beta_forms(c, check.center_valuation), check


# D4 covers from any Belyi pair


def _value_at(f: FormPair, point: tuple[int, int]):
    a, b = f.h1.evaluate(point), f.h2.evaluate(point)
    if b == 0:
        return "inf"
    if a == 0:
        return 0
    if a == b:
        return 1
    return a / b


def _branch_values(p: Passport) -> set:
    out = set()
    for name, c in zip((0, 1, "inf"), p.slots):
        if any(x > 1 for x in c):
            out.add(name)
    return out


def _subst_form(h: Poly, m1: int, m2: int) -> str:
    return format_poly(h.compose([Poly.monomial((m1, 0)), Poly.monomial((0, m2))]), ("z", "w"))


def d4_construct(f: FormPair, m1: int, m2: int) -> CoverFormula:
    """u = h1(z^m1, w^m2), v = h2(z^m1, w^m2), branched in a D4 germ."""
    if m1 < 1 or m2 < 1:
        raise ConstraintError("m1 and m2 must be positive", m1=m1, m2=m2)
    if gcd(m1, m2) != 1:
        raise ConstraintError("side condition fails: gcd(m1, m2) = 1", condition="gcd(m1, m2) = 1",
                              m1=m1, m2=m2)
    if not is_belyi(f):
        raise ConstraintError("the pair is not a Belyi pair", condition="belyi")
    if f.n < 2:
        raise ConstraintError("side condition fails: deg f > 1", condition="n > 1", n=f.n)
    p = passport_of_forms(f)
    v1, v2 = _value_at(f, (0, 1)), _value_at(f, (1, 0))
    bf = _branch_values(p)
    if {v1, v2} | bf != {0, 1, "inf"}:
        raise PointConditionError("the points (0:1) and (1:0) together with the branch values do not "
                                  "give exactly 0, 1, infinity",
                                  values=sorted(map(str, {v1, v2} | bf)))
    if p.bel2:
        if m1 <= 1:
            raise ConstraintError("side condition fails: m1 > 1 for a pair branched at two points",
                                  condition="m1 > 1", m1=m1)
        if v1 != 1:
            raise PointConditionError("for a pair branched at two points f(0:1) must be 1",
                                      value=str(v1))
    comps = []
    for h in (f.h1, f.h2, f.difference()):
        for _, fac in squarefree_decomposition(h):
            if fac.total_degree() == 0:
                continue
            s = {"x1": "z", "x2": "w"}.get(format_poly(fac.content_monic())) or _subst_form(fac, m1, m2)
            if s not in comps:
                comps.append(s)
    return CoverFormula(_subst_form(f.h1, m1, m2), _subst_form(f.h2, m1, m2), 1, 1, "D4", "D4/construction",
                        (("m1", m1), ("m2", m2), ("n", f.n)), f.n * f.n * m1 * m2, "u*v*(u - v)",
                        tuple(comps))


# fibres


@dataclass
class FiberDescription:
    label: str
    n: int
    passport: Passport
    typing: TypeReport
    nonempty: bool | None
    complete: bool
    m0: int | None = None
    evidence: list = field(default_factory=list)
    series: list = field(default_factory=list)
    witness: str = ""
    status: str = "decided"

    @property
    def min_degree(self) -> int | None:
        return self.n * self.m0 if self.nonempty and self.m0 is not None else None

    def to_json(self) -> dict:
        out = {
            "type": self.label,
            "n": self.n,
            "passport": self.passport.to_json(),
            "typed": self.typing.typed,
            "nonempty": self.nonempty,
            "complete": self.complete,
            "status": self.status,
            "m0": self.m0,
            "min_degree": self.min_degree,
            "series": self.series,
            "orbits": "not computed",
        }
        if self.evidence:
            out["evidence"] = self.evidence
        if self.witness:
            out["witness"] = self.witness
        return out


def _passport_of(f) -> Passport:
    if isinstance(f, Passport):
        return f
    if isinstance(f, PermTriple):
        return passport_of_triple(f)
    if isinstance(f, FormPair):
        return passport_of_forms(f)
    raise MalformedInputError("expected a permutation triple, a form pair or a passport")


def _cycle_type_of_exponent(x: int, n: int) -> tuple[int, ...]:
    g = gcd(x % n, n)
    return tuple([n // g] * g)


def cyclic_pullbacks(label: str, n: int) -> list[tuple[tuple[int, ...], BZeroChain]]:
    """All cyclic covers of degree n of the germ whose boundary cycle types are those of z -> z^n."""
    graph, trails = resolve_minimal(ade_germ(label))
    table = lemma1_exponents(graph)
    branches = graph.branch_ids()
    nbrs = graph.neighbors(graph.center)
    want = sorted([tuple([1] * n), (n,), (n,)])
    units = [x for x in range(1, n) if gcd(x, n) == 1] or [1]
    seen = set()
    out = []
    for c in itertools.product(range(n), repeat=len(branches)):
        canon = min(tuple(u * ci % n for ci in c) for u in units)
        if canon in seen:
            continue
        ex = {vid: sum(ci * x for ci, x in zip(canon, vec)) % n for vid, vec in table.items()}
        if ex[graph.center]:
            continue
        types = [_cycle_type_of_exponent(ex[x], n) for x in nbrs]
        types += [tuple([1] * n)] * (3 - len(types))
        if sorted(types) != want:
            continue
        seen.add(canon)
        out.append((canon, pullback_cyclic(CyclicCoverSpec(n, graph, trails, canon))))
    return out


def _catalog_series(label: str, n: int) -> list[dict]:
    try:
        infos = family_infos(label)
    except NoBel2FamilyError:
        return []
    out = []
    for info in infos:
        if _family_admits(label, info.index, n):
            d = info.to_json()
            d["n"] = n
            out.append(d)
    return out


def _family_admits(label: str, family: int, n: int) -> bool:
    """Whether some parameter choice with this n passes the side conditions."""
    for m, m1, m2 in itertools.product(range(1, 8), range(1, 6), range(1, 6)):
        params = {"n": n, "m": m, "m1": m1, "m2": m2, "j": 1}
        try:
            _family_spec(label, params, family)
            return True
        except ConstraintError:
            continue
    return False


def _d4_series(p: Passport) -> list[dict]:
    lines = []
    for name, c in zip(SLOT_NAMES, p.slots):
        for i, part in enumerate(c):
            lines.append({"line": f"{name}[{i}]", "r": part, "a": 1})
    s1 = [{"kind": "S1", **ln, "constraint": "gcd(m, 1) = 1"} for ln in lines]
    s2 = [{"kind": "S2", "lines": [a["line"], b["line"]], "a": [1, 1],
           "constraint": "gcd(m1 m2, m1 + m2) = 1"}
          for a, b in itertools.permutations(lines, 2)]
    return s1 + s2


def fiber_describe(f, label: str) -> FiberDescription:
    """Is there a cover branched in a germ of this type lying over f, and what is the smallest?"""
    p = _passport_of(f)
    kind, k = parse_ade_label(label)
    lab = _label(kind, k)
    typing = type_check(p, lab)
    n = p.n
    if not typing.typed:
        return FiberDescription(lab, n, p, typing, False, True,
                                witness=f"the passport does not have type {lab} under any ordering")
    if n == 1 and lab not in ("A0", "A1"):
        return FiberDescription(lab, n, p, typing, False, True,
                                witness="a degree-1 pair only lifts to covers branched in a smooth "
                                        "germ or a node")
    if lab == "D4" and not p.bel2:
        chain = d4_m0(n)
        return FiberDescription(lab, n, p, typing, True, True, chain.order, [chain.to_json()],
                                _d4_series(p))
    if not p.bel2:
        return FiberDescription(lab, n, p, typing, None, False,
                                witness="the pair is branched at three points and its monodromy is not "
                                        "cyclic; only the D4 case is decided",
                                status="machinery-incomplete")
    results = cyclic_pullbacks(lab, n)
    evidence = [{"branch_exponents": list(c), **r.to_json()} for c, r in results]
    good = [r for _, r in results if r.ok]
    if not good:
        reasons = sorted({r.reason for _, r in results}) or ["no cyclic cover has the right boundary cycle types"]
        return FiberDescription(lab, n, p, typing, False, True, evidence=evidence,
                                witness="; ".join(reasons))
    m0 = min(r.order for r in good)
    series = _d4_series(p) if lab == "D4" else _catalog_series(lab, n)
    return FiberDescription(lab, n, p, typing, True, True, m0, evidence, series)
