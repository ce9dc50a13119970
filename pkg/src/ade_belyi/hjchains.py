"""Hirzebruch-Jung continued fractions and weighted chains of rational curves.

Weights are positive: a curve with self-intersection -w has weight w.
The cyclic cover of a chain is computed torically: the chain (with its
two boundary germs) is the fan of a toric surface, a cyclic cover
branched on the boundary is the same fan over a sublattice of index m,
and the singular cones of the cover are resolved by their continued
fraction expansions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Sequence

from .errors import DomainError, MalformedInputError


class MalformedChainError(MalformedInputError):
    code = "malformed-chain"


class NonFaithfulActionError(DomainError):
    code = "non-faithful-action"


class NotAChainError(DomainError):
    code = "not-a-chain"


@dataclass(frozen=True, eq=False)
class HJType:
    """Cyclic quotient singularity A_{m0,q}; m0 = 1 (with q = 0) is a smooth point.

    A_{m0,q} and A_{m0,q'} with q*q' = 1 (mod m0) are the same singularity,
    so equality accepts either orientation.
    """

    m0: int
    q: int
    unit_weights: bool = False

    def __post_init__(self):
        if self.m0 < 1:
            raise MalformedChainError(f"order must be positive, got {self.m0}")
        if self.m0 == 1:
            if self.q != 0:
                object.__setattr__(self, "q", 0)
        elif not (1 <= self.q <= self.m0) or gcd(self.m0, self.q) != 1:
            raise MalformedChainError(f"invalid pair ({self.m0}, {self.q})")

    @property
    def is_smooth(self) -> bool:
        return self.m0 == 1

    def dual_q(self) -> int:
        return pow(self.q, -1, self.m0) if self.m0 > 1 else 0

    def _canonical(self) -> tuple[int, int]:
        return (self.m0, min(self.q, self.dual_q()))

    def __eq__(self, other) -> bool:
        if isinstance(other, HJType):
            return self._canonical() == other._canonical()
        if isinstance(other, tuple) and len(other) == 2:
            return self == HJType(*other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._canonical())

    def as_pair(self) -> list[int]:
        return [self.m0, self.q]

    def __str__(self) -> str:
        return "smooth" if self.is_smooth else f"A_{{{self.m0},{self.q}}}"


@dataclass(frozen=True)
class WeightedChain:
    """Chain of rational curves; ``marks`` are 0-based indices that never contract.

    ``branches`` attaches non-contractible curve germs to vertices, as a
    tuple of (index, label) pairs.  The two boundary germs of a cyclic
    quotient chain sit at the first and last vertex.
    """

    weights: tuple[int, ...]
    marks: frozenset[int] = field(default_factory=frozenset)
    branches: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "marks", frozenset(self.marks))
        k = len(self.weights)
        for i in self.marks:
            if not 0 <= i < k:
                raise MalformedChainError(f"mark {i} outside chain of length {k}")
        for i, _ in self.branches:
            if not 0 <= i < k:
                raise MalformedChainError(f"branch attached at {i} outside chain of length {k}")

    def __len__(self) -> int:
        return len(self.weights)

    def reversed(self) -> "WeightedChain":
        k = len(self.weights)
        return WeightedChain(self.weights[::-1], frozenset(k - 1 - i for i in self.marks),
                             tuple((k - 1 - i, lab) for i, lab in self.branches))


def _as_weights(chain) -> tuple[int, ...]:
    if isinstance(chain, WeightedChain):
        return chain.weights
    return tuple(int(w) for w in chain)


def cf_eval(chain) -> HJType:
    """Evaluate w1 - 1/(w2 - 1/(...)) as a reduced fraction m0/q.

    Chains containing weight-1 curves are accepted and flagged; the value
    is then reduced modulo m0, which is the type obtained after blowing
    those curves down.
    """
    weights = _as_weights(chain)
    if any(w < 1 for w in weights):
        raise MalformedChainError(f"weights must be positive: {list(weights)}")
    # columns of the product of [[w, -1], [1, 0]]
    p, q = 1, 0
    for w in reversed(weights):
        p, q = w * p - q, p
    if p <= 0:
        raise MalformedChainError(f"continued fraction {list(weights)} evaluates to {p}/{q}",
                                  weights=list(weights))
    unit = any(w == 1 for w in weights)
    if p == 1:
        return HJType(1, 0, unit)
    return HJType(p, q % p, unit)


def hj_expansion(m0: int, q: int) -> list[int]:
    """Inverse of ``cf_eval``: weights (all >= 2) of the minimal chain for A_{m0,q}."""
    if m0 == 1:
        return []
    if not (1 <= q < m0) or gcd(m0, q) != 1:
        raise MalformedChainError(f"invalid pair ({m0}, {q})")
    out = []
    a, b = m0, q
    while b:
        w = -(-a // b)
        out.append(w)
        a, b = b, w * b - a
    return out


@dataclass(frozen=True)
class ChainGroup:
    chain: WeightedChain
    order: int
    exponents: tuple[int, ...]

    def generates(self, index: int) -> bool:
        """Whether the class of vertex ``index`` (0-based) generates the group."""
        if self.order == 0:
            return abs(self.exponents[index]) == 1
        return gcd(self.exponents[index], self.order) == 1


def chain_sequence(weights: Sequence[int], x0: int = 0, x1: int = 1) -> list[int]:
    """x_0, x_1, ..., x_{k+1} with x_{j+1} = w_j x_j - x_{j-1}."""
    xs = [x0, x1]
    for w in weights:
        xs.append(w * xs[-1] - xs[-2])
    return xs


def chain_group(chain) -> ChainGroup:
    """Cyclic group of the chain complement, with each curve's class as a power of the first.

    The order is |x_{k+1}|; an order of 0 means the group is infinite cyclic.
    """
    if not isinstance(chain, WeightedChain):
        chain = WeightedChain(tuple(chain))
    xs = chain_sequence(chain.weights)
    order = abs(xs[-1])
    exps = xs[1:-1]
    if order:
        exps = [x % order for x in exps]
    return ChainGroup(chain, order, tuple(exps))


def decompose_cyclic_action(m: int, p1: int, p2: int) -> tuple[int, int, int, int]:
    """Split (y1, y2) -> (e^p1 y1, e^p2 y2) of order m into reflections and a rotation.

    Returns (m1, m2, m0, q): the pseudo-reflection orders along each axis
    and the residual quotient A_{m0,q}.
    """
    if m < 1 or not (1 <= p1 <= m and 1 <= p2 <= m):
        raise MalformedInputError(f"need 1 <= p1, p2 <= m, got ({m}, {p1}, {p2})")
    if gcd(gcd(m, p1), p2) != 1:
        raise NonFaithfulActionError(f"gcd({m}, {p1}, {p2}) != 1", m=m, p1=p1, p2=p2)
    m1 = gcd(m, p1)
    m2 = gcd(m, p2)
    m0 = m // (m1 * m2)
    if m0 == 1:
        return m1, m2, 1, 0
    q = (p1 // m1) * pow(p2 // m2, -1, m0) % m0
    return m1, m2, m0, q


# contraction


@dataclass
class ContractionResult:
    chain: WeightedChain
    blowdowns: dict[str, int]
    steps: int
    branches_meet: bool = False


def _valency(k: int, i: int, branches: list[list[str]]) -> int:
    return (i > 0) + (i < k - 1) + len(branches[i])


def contract_chain_tracked(chain: WeightedChain,
                           pick: Callable[[list[int]], int] | None = None) -> ContractionResult:
    """Blow down unmarked (-1)-curves of valency at most 2 until none remain.

    ``blowdowns`` counts, for every branch label, how many blown-down
    points lay on that branch.  ``pick`` chooses among the contractible
    vertices (the default takes the first), which lets tests check that the
    outcome does not depend on the order.
    """
    weights = list(chain.weights)
    marked = [i in chain.marks for i in range(len(weights))]
    branches: list[list[str]] = [[] for _ in weights]
    for i, lab in chain.branches:
        branches[i].append(lab)
    counts: dict[str, int] = {lab: 0 for _, lab in chain.branches}
    steps = 0
    met = False
    while True:
        k = len(weights)
        cands = [i for i in range(k)
                 if weights[i] == 1 and not marked[i] and _valency(k, i, branches) <= 2]
        if not cands:
            break
        i = cands[0] if pick is None else pick(cands)
        for lab in branches[i]:
            counts[lab] += 1
        nbrs = [j for j in (i - 1, i + 1) if 0 <= j < k]
        for j in nbrs:
            weights[j] -= 1
        moved = branches[i]
        if len(nbrs) == 1:
            branches[nbrs[0]].extend(moved)
        elif len(nbrs) == 0 and len(moved) == 2:
            met = True
        del weights[i], marked[i], branches[i]
        steps += 1
    k = len(weights)
    stuck = [i for i in range(k) if weights[i] == 1 and not marked[i] and _valency(k, i, branches) > 2]
    if stuck:
        raise NotAChainError(
            f"(-1)-curve at position {stuck[0]} meets {_valency(k, stuck[0], branches)} curves",
            weights=weights, position=stuck[0])
    new = WeightedChain(tuple(weights), frozenset(i for i in range(k) if marked[i]),
                        tuple((i, lab) for i in range(k) for lab in branches[i]))
    return ContractionResult(new, counts, steps, met)


def contract_chain(chain) -> WeightedChain:
    if not isinstance(chain, WeightedChain):
        chain = WeightedChain(tuple(chain))
    return contract_chain_tracked(chain).chain


# cyclic covers of chains


def _det(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class CoverVertex:
    """A compact curve of the resolved cover.

    ``source`` is the index of the curve it lies over (0-based in the
    base chain) or None for curves created by resolving singular points;
    ``ramification`` is the branching order along it.
    """

    weight: int
    source: int | None
    ramification: int


@dataclass(frozen=True)
class ChainCover:
    degree: int
    components: int
    vertices: tuple[CoverVertex, ...]
    boundary_ramification: tuple[int, int]

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self.vertices)

    def chain(self, marks: Sequence[int] = (), left: str | None = "B1",
              right: str | None = "B2") -> WeightedChain:
        k = len(self.vertices)
        br = []
        if k:
            if left:
                br.append((0, left))
            if right:
                br.append((k - 1, right))
        return WeightedChain(self.weights, frozenset(marks), tuple(br))

    def preimage_index(self, source: int) -> int:
        for i, v in enumerate(self.vertices):
            if v.source == source:
                return i
        raise KeyError(source)


def chain_exponents(weights: Sequence[int], a0: int, a1: int, m: int) -> list[int]:
    """Loop exponents a_0..a_{k+1} (boundary, chain curves, boundary) modulo m."""
    return [x % m for x in chain_sequence(weights, a0, a1)]


def cover_chain(weights: Sequence[int], a0: int, a1: int, m: int) -> ChainCover:
    """Resolve the cyclic degree-m cover of a chain branched only on its curves.

    The loop around the first boundary germ maps to a0 and the loop around
    the first chain curve maps to a1 in Z/m; the other exponents follow from
    the chain relations.  Returns the minimal-normal-crossing preimage chain
    before any blow-downs.
    """
    weights = [int(w) for w in weights]
    if m < 1:
        raise MalformedInputError("cover degree must be positive")
    if not weights:
        raise MalformedChainError("cannot cover an empty chain")
    comps = gcd(gcd(a0, a1), m)
    m_conn = m // comps
    a0c, a1c = (a0 // comps) % m_conn, (a1 // comps) % m_conn

    def phi(v):
        return (a0c * v[0] + a1c * v[1]) % m_conn

    rays = [(1, 0), (0, 1)]
    for w in weights:
        a, b = rays[-1], rays[-2]
        rays.append((w * a[0] - b[0], w * a[1] - b[1]))
    for a, b in zip(rays, rays[1:]):
        if _det(a, b) <= 0:
            raise MalformedChainError(f"chain {weights} is not contractible", weights=weights)

    def order_of(v):
        return m_conn // gcd(phi(v), m_conn)

    lifted = [(tuple(order_of(v) * c for c in v), src) for src, v in enumerate(rays)]
    full: list[tuple[tuple[int, int], int | None]] = [lifted[0]]
    for (u, _), (u2, src2) in zip(lifted, lifted[1:]):
        d = _det(u, u2) // m_conn
        if d > 1:
            q = next(q for q in range(1, d)
                     if all((u2[c] + q * u[c]) % d == 0 for c in (0, 1))
                     and phi(tuple((u2[c] + q * u[c]) // d for c in (0, 1))) == 0)
            prev, cur = u, tuple((u2[c] + q * u[c]) // d for c in (0, 1))
            for b in hj_expansion(d, q):
                full.append((cur, None))
                prev, cur = cur, tuple(b * cur[c] - prev[c] for c in (0, 1))
        full.append((u2, src2))
    verts = []
    for i in range(1, len(full) - 1):
        r = full[i][0]
        s = (full[i - 1][0][0] + full[i + 1][0][0], full[i - 1][0][1] + full[i + 1][0][1])
        w = s[0] // r[0] if r[0] else s[1] // r[1]
        src = full[i][1]
        ram = order_of(rays[src]) if src is not None else 1
        verts.append(CoverVertex(w, None if src is None else src - 1, ram))
    return ChainCover(m, comps, tuple(verts),
                      (order_of(rays[0]), order_of(rays[-1])))


@dataclass(frozen=True)
class Supplement:
    delta: int
    residual: HJType
    cover_weights: tuple[int, ...]
    contracted: tuple[int, ...]


def supplement_delta(n: int, m: int) -> Supplement:
    """Blow-downs on the first boundary germ for the degree-m cover of A_{n,n-1}.

    The all-2 chain of length n-1 is covered with the loop around the j-th
    curve sent to j mod m; the preimage is resolved, then blown down to its
    minimal model while counting blow-downs of points on the first germ.
    """
    if n < 1 or m < 1:
        raise MalformedInputError("n and m must be positive")
    if n % m:
        raise MalformedInputError(f"{m} does not divide {n}", n=n, m=m)
    if n == 1:
        return Supplement(0, HJType(1, 0), (), ())
    cov = cover_chain([2] * (n - 1), 0, 1, m)
    res = contract_chain_tracked(cov.chain())
    residual = cf_eval(res.chain.weights)
    return Supplement(res.blowdowns["B1"], residual, cov.weights, res.chain.weights)
