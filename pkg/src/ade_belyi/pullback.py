"""Pull a resolution graph back along a cyclic cover and contract it.

Loops are written additively.  The loop around an exceptional curve is
an integer vector over the loops around the germ branches; a cyclic
cover of degree n sends the loop around branch i to c_i in Z/n, and every
other curve inherits the matching combination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .errors import DomainError, MalformedInputError
from .hjchains import chain_group, hj_expansion
from .resolution import (
    ResolutionGraph,
    TrailSet,
    Vertex,
    ade_germ,
    resolve_minimal,
)


class MissingHistoryError(DomainError):
    code = "missing-birth-history"


class DisconnectedCoverError(DomainError):
    code = "disconnected-cover"


class UnknownTrailError(MalformedInputError):
    code = "unknown-trail"


def lemma1_exponents(graph: ResolutionGraph) -> dict[str, tuple[int, ...]]:
    """Loop class of every curve as a vector over the branch loops.

    Exceptional curves are processed in birth order: the loop around a new
    curve is the sum of the loops of the exceptional curves through its
    center plus each branch loop times that branch's multiplicity there.
    """
    if graph.births is None or graph.branch_multiplicities is None:
        raise MissingHistoryError("graph carries no blowup history")
    branches = graph.branch_ids()
    out: dict[str, tuple[int, ...]] = {}
    for i, b in enumerate(branches):
        out[b] = tuple(int(j == i) for j in range(len(branches)))
    for birth in graph.births:
        vid = f"E{birth.exceptional + 1}"
        acc = [0] * len(branches)
        for d in birth.through:
            prev = out[f"E{d + 1}"]
            acc = [a + p for a, p in zip(acc, prev)]
        mults = graph.branch_multiplicities[vid]
        acc = [a + mults[b] for a, b in zip(acc, branches)]
        out[vid] = tuple(acc)
    return out


def exponents_by_intersection(graph: ResolutionGraph) -> dict[str, tuple[Fraction, ...]]:
    """Same vectors from the intersection form: sum_j v_j (E_j . E_i) + (b . E_i) = 0."""
    exc = graph.exceptional_ids()
    branches = graph.branch_ids()
    idx = {v: i for i, v in enumerate(exc)}
    k = len(exc)
    mat = [[Fraction(0)] * k for _ in range(k)]
    for v in exc:
        mat[idx[v]][idx[v]] = Fraction(-graph.vertex(v).weight)
    for a, b in graph.edges:
        if a in idx and b in idx:
            mat[idx[a]][idx[b]] += 1
            mat[idx[b]][idx[a]] += 1
    cols = []
    for b in branches:
        rhs = [Fraction(0)] * k
        for x in graph.neighbors(b):
            if x in idx:
                rhs[idx[x]] -= 1
        cols.append(_solve(mat, rhs))
    out = {v: tuple(col[idx[v]] for col in cols) for v in exc}
    for i, b in enumerate(branches):
        out[b] = tuple(Fraction(int(j == i)) for j in range(len(branches)))
    return out


def _solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


# generic cyclic pullback of a weighted graph


@dataclass
class CoverGraph:
    """Resolved preimage of a weighted graph under a cyclic cover.

    Vertices are keyed by strings; ``origin`` maps each to the base curve
    it lies over (None for curves created by resolving singular points).
    """

    weights: dict[str, int] = field(default_factory=dict)
    kinds: dict[str, str] = field(default_factory=dict)
    origin: dict[str, str | None] = field(default_factory=dict)
    edges: list[tuple[str, str]] = field(default_factory=list)

    def neighbors(self, v: str) -> list[str]:
        return [b if a == v else a for a, b in self.edges if v in (a, b)]


def _subgroup_order(n: int, gens: Sequence[int]) -> int:
    g = n
    for x in gens:
        g = gcd(g, x % n)
    return n // g


def pullback_graph(vertices: Sequence[Vertex], edges: Sequence[tuple[str, str]],
                   exponents: Mapping[str, int], n: int) -> CoverGraph:
    """Preimage of a normal-crossing configuration under a connected cyclic cover.

    Over a curve C with exponent a the cover is branched of order
    e = n/gcd(n, a); the components over C are the cosets of the subgroup
    generated by a and the neighbouring exponents.  Over an intersection
    point the cover is a cyclic cover of the plane branched on the two
    axes; its quotient singularity is resolved by the continued fraction
    chain, and the self-intersection of each component is -d*w/e minus the
    correction q/m0 from every singular point on it.
    """
    names = [v.id for v in vertices]
    kind = {v.id: v.kind for v in vertices}
    weight = {v.id: v.weight for v in vertices}
    nbrs: dict[str, list[str]] = {v: [] for v in names}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    a_of = {v: exponents[v] % n for v in names}
    if _subgroup_order(n, list(a_of.values())) != n:
        raise DisconnectedCoverError("exponents do not generate Z/n; the cover is disconnected")

    out = CoverGraph()
    comp_sub: dict[str, int] = {}
    corrections: dict[str, Fraction] = {}
    for v in names:
        h = _subgroup_order(n, [a_of[v]] + [a_of[x] for x in nbrs[v]])
        comp_sub[v] = h
        ncomp = n // h
        e = n // gcd(n, a_of[v]) if a_of[v] else 1
        for c in range(ncomp):
            key = f"{v}#{c}"
            out.kinds[key] = kind[v]
            out.origin[key] = v
            out.weights[key] = 0
            if kind[v] == "exceptional":
                corrections[key] = Fraction(h // e * weight[v], e)
    hj_count = 0
    for a, b in edges:
        h = _subgroup_order(n, [a_of[a], a_of[b]])
        step = n // h
        pa, pb = (a_of[a] // step) % h, (a_of[b] // step) % h
        chain, qa, qb = _local_singularity(h, pa, pb)
        for c in range(step):
            ca = f"{a}#{c % (n // comp_sub[a])}"
            cb = f"{b}#{c % (n // comp_sub[b])}"
            prev = ca
            for w in chain:
                hj_count += 1
                key = f"H{hj_count}"
                out.kinds[key] = "exceptional"
                out.origin[key] = None
                out.weights[key] = w
                out.edges.append((prev, key))
                prev = key
            out.edges.append((prev, cb))
            if ca in corrections:
                corrections[ca] += qa
            if cb in corrections:
                corrections[cb] += qb
    for key, val in corrections.items():
        if val.denominator != 1:
            raise DomainError(f"non-integral self-intersection {val} for {key}")
        out.weights[key] = int(val)
    return out


def _local_singularity(h: int, pa: int, pb: int) -> tuple[list[int], Fraction, Fraction]:
    """Resolution chain (read from the first axis) and the two corrections.

    The local cover has degree h; the loop around the first axis maps to
    pa and around the second to pb (as elements of Z/h).
    """
    if h == 1:
        return [], Fraction(0), Fraction(0)
    ea = h // gcd(h, pa) if pa else 1
    eb = h // gcd(h, pb) if pb else 1
    u = (ea, 0)
    u2 = (0, eb)
    d = ea * eb // h
    if d == 1:
        return [], Fraction(0), Fraction(0)
    q = next(q for q in range(1, d)
             if all((u2[c] + q * u[c]) % d == 0 for c in (0, 1))
             and (pa * ((u2[0] + q * u[0]) // d) + pb * ((u2[1] + q * u[1]) // d)) % h == 0)
    qd = pow(q, -1, d)
    return hj_expansion(d, q), Fraction(q, d), Fraction(qd, d)


# contraction of trees


@dataclass
class ContractedGraph:
    weights: dict[str, int]
    edges: set[frozenset[str]]
    attachments: dict[str, list[str]]
    blowdowns: int
    blowdowns_on: dict[str, int] = field(default_factory=dict)

    def neighbors(self, v: str) -> list[str]:
        return sorted(next(iter(e - {v})) for e in self.edges if v in e)


def contract_graph(cover: CoverGraph, marked: set[str]) -> ContractedGraph:
    """Blow down unmarked (-1)-curves among the exceptional curves.

    Branch preimages are kept as attachments; a curve is contractible when
    it meets at most two curves in total.
    """
    exc = {k for k, kind in cover.kinds.items() if kind == "exceptional"}
    weights = {k: cover.weights[k] for k in exc}
    edges: set[frozenset[str]] = set()
    attach: dict[str, list[str]] = {k: [] for k in exc}
    for a, b in cover.edges:
        if a in exc and b in exc:
            edges.add(frozenset((a, b)))
        elif a in exc:
            attach[a].append(b)
        elif b in exc:
            attach[b].append(a)
    steps = 0
    on: dict[str, int] = {}
    while True:
        cands = []
        for v in sorted(weights, key=_natural):
            if v in marked or weights[v] != 1:
                continue
            deg = sum(1 for e in edges if v in e) + len(attach[v])
            if deg <= 2:
                cands.append(v)
        if not cands:
            break
        v = cands[0]
        nb = [next(iter(e - {v})) for e in edges if v in e]
        for x in nb:
            weights[x] -= 1
        edges = {e for e in edges if v not in e}
        if len(nb) == 2:
            edges.add(frozenset(nb))
        elif len(nb) == 1:
            attach[nb[0]].extend(attach[v])
        for a in attach[v]:
            on[a] = on.get(a, 0) + 1
        del weights[v], attach[v]
        steps += 1
    return ContractedGraph(weights, edges, attach, steps, on)


def _natural(key: str):
    head, _, tail = key.partition("#")
    return (head[0], int(head[1:]) if head[1:].isdigit() else 0, tail)


def as_chain(g: ContractedGraph) -> list[str] | None:
    """Vertices in path order when the graph is a chain, else None."""
    verts = list(g.weights)
    if not verts:
        return []
    if len(g.edges) != len(verts) - 1:
        return None
    deg = {v: len(g.neighbors(v)) for v in verts}
    if any(d > 2 for d in deg.values()):
        return None
    ends = sorted((v for v in verts if deg[v] <= 1), key=_natural)
    order = [ends[0]]
    prev = None
    while True:
        nxt = [x for x in g.neighbors(order[-1]) if x != prev]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    return order if len(order) == len(verts) else None


# cyclic covers of resolution graphs


@dataclass(frozen=True)
class CyclicCoverSpec:
    degree: int
    graph: ResolutionGraph
    trails: TrailSet
    branch_exponents: tuple[int, ...]

    def exponents(self) -> dict[str, int]:
        table = lemma1_exponents(self.graph)
        return {v: sum(c * x for c, x in zip(self.branch_exponents, vec)) % self.degree
                for v, vec in table.items()}

    def branched_trails(self) -> list[int]:
        ex = self.exponents()
        return [i for i, t in enumerate(self.trails) if any(ex[v] for v in t.vertices)]


@dataclass
class BZeroChain:
    """The contracted exceptional curve over the quotient point, with C marked."""

    ok: bool
    weights: tuple[int, ...] = ()
    marked: int | None = None
    order: int | None = None
    marked_exponent: int | None = None
    generates: bool | None = None
    reason: str = ""
    raw_weights: tuple[int, ...] = ()
    status: str = "computed"

    def to_json(self) -> dict:
        out = {"ok": self.ok, "status": self.status}
        if self.status == "computed":
            out.update({"chain": list(self.weights), "marked": self.marked, "m0": self.order,
                        "marked_exponent": self.marked_exponent, "generates": self.generates})
        if self.reason:
            out["reason"] = self.reason
        return out


def pullback_cyclic(spec: CyclicCoverSpec) -> BZeroChain:
    """Second necessary condition for a cyclic cover branched on two trails."""
    g = spec.graph
    ex = spec.exponents()
    n = spec.degree
    if ex[g.center] % n:
        return BZeroChain(False, reason="loop around the center is not sent to the identity",
                          status="rejected")
    try:
        cover = pullback_graph(g.vertices, g.edges, ex, n)
    except DisconnectedCoverError as exc:
        return BZeroChain(False, reason=str(exc), status="rejected")
    exc_keys = [k for k, kind in cover.kinds.items() if kind == "exceptional"]
    centers = [k for k in exc_keys if cover.origin[k] == g.center]
    sub_edges = [(a, b) for a, b in cover.edges if a in exc_keys and b in exc_keys]
    if len(sub_edges) != len(exc_keys) - 1 or not _connected(exc_keys, sub_edges):
        return BZeroChain(False, reason="preimage of the exceptional curves is not a tree")
    if len(centers) != 1:
        return BZeroChain(False, reason=f"center has {len(centers)} preimages")
    contracted = contract_graph(cover, set(centers))
    order = as_chain(contracted)
    if order is None:
        return BZeroChain(False, reason="contracted exceptional curve is not a chain")
    weights = tuple(contracted.weights[v] for v in order)
    idx = order.index(centers[0])
    grp = chain_group(weights)
    gen = grp.generates(idx)
    return BZeroChain(gen, weights, idx, grp.order, grp.exponents[idx], gen,
                      "" if gen else "loop around the center does not generate the local group",
                      tuple(cover.weights[k] for k in sorted(exc_keys, key=_natural)))


def _connected(verts: Sequence[str], edges: Sequence[tuple[str, str]]) -> bool:
    if not verts:
        return True
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {verts[0]}
    todo = [verts[0]]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(verts)


def d4_m0(n: int) -> BZeroChain:
    """For D4 the preimage of the center is a single curve of weight n."""
    if n < 1:
        raise MalformedInputError("degree must be positive")
    grp = chain_group([n])
    return BZeroChain(True, (n,), 0, grp.order, grp.exponents[0], grp.generates(0))


# naming trails


def canonical_trails(graph: ResolutionGraph, trails: TrailSet) -> list:
    """Trails with branches first (by branch number), then the others by length and weights."""
    def key(t):
        br = t.branches(graph)
        if br:
            return (0, min(int(b[1:]) for b in br), ())
        ws = tuple(graph.vertex(v).weight for v in t.vertices)
        return (1, len(ws), ws)
    return sorted(trails, key=key)


def resolve_trail_name(name: str, graph: ResolutionGraph, trails: TrailSet) -> int:
    """Index into ``trails`` for names like B1 (trail holding branch 1) or trail3."""
    ordered = canonical_trails(graph, trails)
    s = name.strip()
    low = s.lower()
    if low.startswith("trail") and low[5:].isdigit():
        j = int(low[5:])
        if not 1 <= j <= len(ordered):
            raise UnknownTrailError(f"no trail {j}; there are {len(ordered)}")
        return list(trails).index(ordered[j - 1])
    if s[:1].upper() == "B" and s[1:].isdigit():
        bid = f"B{int(s[1:])}"
        for i, t in enumerate(trails):
            if bid in t.vertices:
                return i
        raise UnknownTrailError(f"no branch {bid}")
    raise UnknownTrailError(f"cannot read trail name {name!r}")


def branch_exponent_choices(graph: ResolutionGraph, trails: TrailSet, branched: Sequence[int],
                            n: int) -> list[tuple[int, ...]]:
    """Branch exponent vectors, up to units of Z/n, that branch exactly the given trails.

    The loop around the center must be trivial and the exponents must
    generate Z/n.
    """
    table = lemma1_exponents(graph)
    branches = graph.branch_ids()
    units = [u for u in range(1, n) if gcd(u, n) == 1] or [1]
    seen: set[tuple[int, ...]] = set()
    out = []
    for c in itertools.product(range(n), repeat=len(branches)):
        if _subgroup_order(n, list(c)) != n and n > 1:
            continue
        ex = {v: sum(ci * x for ci, x in zip(c, vec)) % n for v, vec in table.items()}
        if ex[graph.center]:
            continue
        hit = [i for i, t in enumerate(trails) if any(ex[v] for v in t.vertices)]
        if sorted(hit) != sorted(branched):
            continue
        canon = min(tuple(u * ci % n for ci in c) for u in units)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return sorted(out)


@dataclass
class PullbackReport:
    label: str
    degree: int
    branched: list[int]
    results: list[tuple[tuple[int, ...], BZeroChain]]
    names: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return any(r.ok for _, r in self.results)

    def to_json(self) -> dict:
        out = {
            "type": self.label,
            "degree": self.degree,
            "branched_trails": self.names or self.branched,
            "ok": self.ok,
            "covers": [{"branch_exponents": list(c), **r.to_json()} for c, r in self.results],
        }
        if not self.results:
            out["reason"] = ("no cyclic cover of this degree is branched on exactly these trails "
                             "with a trivial loop around the center")
        return out


def trail_name(graph: ResolutionGraph, trails: TrailSet, index: int) -> str:
    """B<i> for a trail holding branch i, else trail<j> in the canonical order."""
    t = list(trails)[index]
    br = sorted(t.branches(graph), key=lambda b: int(b[1:]))
    if br:
        return br[0]
    return f"trail{canonical_trails(graph, trails).index(t) + 1}"


def pullback_for_type(label: str, branched_names: Sequence[str], n: int) -> PullbackReport:
    """Try every cyclic cover of degree n of an ADE germ branched on two named trails."""
    if n < 1:
        raise MalformedInputError("degree must be positive")
    graph, trails = resolve_minimal(ade_germ(label))
    idx = sorted({resolve_trail_name(b, graph, trails) for b in branched_names})
    if len(idx) != 2:
        raise MalformedInputError("name exactly two distinct trails")
    results = []
    for c in branch_exponent_choices(graph, trails, idx, n):
        results.append((c, pullback_cyclic(CyclicCoverSpec(n, graph, trails, c))))
    names = sorted((trail_name(graph, trails, i) for i in idx), key=lambda s: (not s.startswith("B"), s))
    return PullbackReport(label, n, idx, results, names)


def noncyclic_status() -> BZeroChain:
    return BZeroChain(False, reason="pullback along non-cyclic monodromy is only done for D4",
                      status="machinery-incomplete")


def tower_pullback(n: int, m: int) -> tuple[int, tuple[int, ...]]:
    """Degree-m cover of the all-2 chain of length n-1, built by the graph pullback.

    The boundary germ B1 has loop 0, the j-th curve loop j and B2 loop n.
    Returns the number of blow-downs on the preimage of B1 and the
    contracted chain, for comparison with ``supplement_delta``.
    """
    if n < 2 or m < 1 or n % m:
        raise MalformedInputError("need n >= 2 and m dividing n")
    verts = [Vertex("B1", "branch", 0)]
    verts += [Vertex(f"E{j}", "exceptional", 2) for j in range(1, n)]
    verts.append(Vertex("B2", "branch", 0))
    ids = [v.id for v in verts]
    edges = list(zip(ids, ids[1:]))
    exps = {"B1": 0, "B2": n % m, **{f"E{j}": j for j in range(1, n)}}
    cover = pullback_graph(verts, edges, exps, m)
    contracted = contract_graph(cover, set())
    order = as_chain(contracted)
    if order is None:
        raise DomainError("tower cover does not contract to a chain")
    delta = sum(c for k, c in contracted.blowdowns_on.items() if cover.origin[k] == "B1")
    return delta, tuple(contracted.weights[v] for v in order)
