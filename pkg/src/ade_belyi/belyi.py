"""Belyi pairs as permutation triples or as pairs of binary forms.

A form pair (h1, h2) stands for the map (x1:x2) -> (h1:h2) of the
projective line.  Its ramification over 0, 1 and infinity is read from
the root multiplicities of h1, h1 - h2 and h2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    BinaryForm,
    Poly,
    exact_divide,
    multiplicity_profile,
    poly_gcd,
    radical,
)
from .errors import DomainError, MalformedInputError
from .perms import CycleType, Permutation, cycle_type, is_transitive


class MalformedPassportError(MalformedInputError):
    code = "malformed-passport"


class NotGenusZeroError(DomainError):
    code = "not-genus-zero"


class NotBelyiError(DomainError):
    code = "not-belyi"


@dataclass(frozen=True)
class PermTriple:
    """Monodromy around 0, 1 and infinity, with s0 * s1 * sinf = id."""

    s0: Permutation
    s1: Permutation
    sinf: Permutation

    def __post_init__(self):
        n = self.s0.degree
        if self.s1.degree != n or self.sinf.degree != n:
            raise MalformedInputError("permutations of different degrees")
        if not (self.s0 * self.s1 * self.sinf).is_identity():
            raise MalformedInputError("s0 * s1 * sinf is not the identity")
        if not is_transitive([self.s0, self.s1], n):
            raise MalformedInputError("monodromy group is not transitive")

    @classmethod
    def from_pair(cls, s0: Permutation, s1: Permutation) -> "PermTriple":
        return cls(s0, s1, (s0 * s1).inverse())

    @property
    def n(self) -> int:
        return self.s0.degree


@dataclass(frozen=True)
class Passport:
    c0: CycleType
    c1: CycleType
    cinf: CycleType

    def __post_init__(self):
        for name in ("c0", "c1", "cinf"):
            parts = tuple(sorted((int(x) for x in getattr(self, name)), reverse=True))
            if not parts or min(parts) < 1:
                raise MalformedPassportError(f"{name} must be a nonempty list of positive parts")
            object.__setattr__(self, name, parts)
        totals = {sum(self.c0), sum(self.c1), sum(self.cinf)}
        if len(totals) != 1:
            raise MalformedPassportError(
                f"cycle types have different totals {sum(self.c0)}, {sum(self.c1)}, {sum(self.cinf)}")

    @property
    def n(self) -> int:
        return sum(self.c0)

    @property
    def slots(self) -> tuple[CycleType, CycleType, CycleType]:
        return (self.c0, self.c1, self.cinf)

    @property
    def bel2(self) -> bool:
        """Branched over at most two points."""
        return any(all(p == 1 for p in c) for c in self.slots)

    def genus(self) -> int:
        """Genus of the covering curve from the Riemann-Hurwitz count."""
        ram = sum(self.n - len(c) for c in self.slots)
        return (ram - 2 * self.n + 2) // 2

    def normalized(self) -> "Passport":
        """For a pair branched over two points, move the unbranched slot to c1."""
        ones = tuple([1] * self.n)
        if self.c1 == ones or not self.bel2:
            return self
        if self.c0 == ones:
            return Passport(self.c1, self.c0, self.cinf)
        return Passport(self.c0, self.cinf, self.c1)

    def to_json(self, belyi: bool = True) -> dict:
        return {"n": self.n, "c0": list(self.c0), "c1": list(self.c1),
                "cinf": list(self.cinf), "belyi": belyi}


def check_riemann_hurwitz(p: Passport) -> bool:
    """n + 2 = k0 + k1 + kinf, the genus-zero condition."""
    return p.n + 2 == len(p.c0) + len(p.c1) + len(p.cinf)


def passport_of_triple(t: PermTriple) -> Passport:
    p = Passport(cycle_type(t.s0), cycle_type(t.s1), cycle_type(t.sinf))
    if not check_riemann_hurwitz(p):
        raise NotGenusZeroError(f"passport {p.slots} has genus {p.genus()}",
                                genus=p.genus(), passport=[list(c) for c in p.slots])
    return p


def bel2_triple(n: int) -> PermTriple:
    """The pair z -> z^n: an n-cycle over 0 and infinity, nothing over 1."""
    s0 = Permutation.from_cycles([list(range(1, n + 1))], n)
    return PermTriple.from_pair(s0, Permutation.identity(n))


@dataclass(frozen=True)
class FormPair:
    h1: BinaryForm
    h2: BinaryForm

    def __post_init__(self):
        h1, h2 = self.h1, self.h2
        if not isinstance(h1, BinaryForm):
            h1 = BinaryForm.of(h1)
            object.__setattr__(self, "h1", h1)
        if not isinstance(h2, BinaryForm):
            h2 = BinaryForm.of(h2)
            object.__setattr__(self, "h2", h2)
        if h1.is_zero() or h2.is_zero():
            raise MalformedInputError("forms must be nonzero")
        if h1.degree != h2.degree or h1.degree < 1:
            raise MalformedInputError(f"forms need equal positive degree, got {h1.degree}, {h2.degree}")
        g = poly_gcd(h1, h2)
        if g.total_degree() > 0:
            raise MalformedInputError(f"forms share the factor {g}", common_factor=str(g))

    @property
    def n(self) -> int:
        return self.h1.degree

    def difference(self) -> BinaryForm:
        return BinaryForm.of(self.h1 - self.h2, self.n)


def jacobian_form(f: FormPair) -> BinaryForm:
    h1, h2 = f.h1, f.h2
    j = h1.derivative(0) * h2.derivative(1) - h1.derivative(1) * h2.derivative(0)
    return BinaryForm.of(j, 2 * f.n - 2)


def _extra_critical_factor(f: FormPair) -> Poly | None:
    j = jacobian_form(f)
    if j.total_degree() <= 0:
        return None
    rad = radical(j)
    branch = radical(f.h1 * f.h2 * f.difference())
    g = poly_gcd(rad, branch)
    extra = exact_divide(rad, g)
    return extra.content_monic() if extra.total_degree() > 0 else None


def is_belyi(f: FormPair) -> bool:
    """Whether every critical point maps to 0, 1 or infinity."""
    return _extra_critical_factor(f) is None


def passport_of_forms(f: FormPair) -> Passport:
    extra = _extra_critical_factor(f)
    if extra is not None:
        raise NotBelyiError(f"critical points {extra} = 0 lie over a value outside 0, 1, infinity",
                            witness=str(extra))
    return Passport(tuple(multiplicity_profile(f.h1)),
                    tuple(multiplicity_profile(f.difference())),
                    tuple(multiplicity_profile(f.h2)))


def ramification_total(p: Passport) -> int:
    return sum(p.n - len(c) for c in p.slots)


def passports_agree(a: Passport, b: Passport) -> bool:
    return a.slots == b.slots


def cycle_types_from_parts(parts: Sequence[Sequence[int]]) -> Passport:
    if len(parts) != 3:
        raise MalformedPassportError("need exactly three cycle types")
    return Passport(*(tuple(p) for p in parts))
