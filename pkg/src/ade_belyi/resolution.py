"""Embedded resolution of plane curve germs by point blowups.

Every curve through a point is kept as a polynomial in the local chart
coordinates (X, Y) of that point: germ pieces, the strict transforms of
earlier exceptional curves (which stay lines), and auxiliary functions
whose orders along the exceptional curves are tracked.  A point is done
once at most two smooth transversal curves pass through it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .algebra import Poly, parse_poly, rational_roots, squarefree_decomposition
from .errors import CapacityError, DomainError, MalformedInputError
from .hjchains import chain_group

GERM_VARS = ("u", "v")
MAX_BLOWUPS = 400


class NonIsolatedSingularityError(DomainError):
    code = "non-isolated-singularity"


class OutOfScopeError(DomainError):
    code = "out-of-scope"


class NotOnCurveError(DomainError):
    code = "not-on-curve"


def u_var() -> Poly:
    return Poly.var(0)


def v_var() -> Poly:
    return Poly.var(1)


@dataclass(frozen=True)
class GermCurve:
    equation: Poly
    branches: tuple[Poly, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if self.equation.nvars != 2:
            raise MalformedInputError("germ equations are bivariate")
        if self.equation.is_zero():
            raise MalformedInputError("zero germ equation")
        if self.equation.evaluate((0, 0)) != 0:
            raise MalformedInputError("germ does not pass through the origin")

    def __str__(self) -> str:
        from .algebra import format_poly
        return format_poly(self.equation, GERM_VARS)


def parse_germ(text: str) -> GermCurve:
    return GermCurve(parse_poly(text, GERM_VARS))


_ADE_RE = re.compile(r"^\s*([ADEade])_?\{?(\d+)\}?\s*$")


def parse_ade_label(label: str) -> tuple[str, int]:
    m = _ADE_RE.match(label)
    if not m:
        raise MalformedInputError(f"not an ADE label: {label!r}")
    kind, k = m.group(1).upper(), int(m.group(2))
    if (kind == "A" and k < 0) or (kind == "D" and k < 4) or (kind == "E" and k not in (6, 7, 8)):
        raise MalformedInputError(f"{kind}{k} is not a simple singularity type")
    return kind, k


def ade_germ(label: str) -> GermCurve:
    """Normal-form equation of an ADE curve germ, with its branches over Q."""
    kind, k = parse_ade_label(label)
    u, v = u_var(), v_var()
    name = f"{kind}{k}"
    if kind == "A":
        eq = u**2 - v**(k + 1)
        if k % 2 == 1:
            h = v**((k + 1) // 2)
            br = (u - h, u + h)
        else:
            br = (eq,)
        return GermCurve(eq, br, name)
    if kind == "D":
        inner = u**2 - v**(k - 2)
        if k % 2 == 0:
            h = v**((k - 2) // 2)
            br = (v, u - h, u + h)
        else:
            br = (v, inner)
        return GermCurve(v * inner, br, name)
    if k == 6:
        eq = u**3 - v**4
        return GermCurve(eq, (eq,), name)
    if k == 7:
        return GermCurve(u * (u**2 - v**3), (u, u**2 - v**3), name)
    eq = u**3 - v**5
    return GermCurve(eq, (eq,), name)


# squarefree test for bivariate polynomials


def _univariate_in(p: Poly, var: int, value: int) -> Poly:
    other = 1 - var
    out: dict[tuple[int], Fraction] = {}
    for e, c in p.terms.items():
        key = (e[var],)
        out[key] = out.get(key, 0) + c * Fraction(value) ** e[other]
    return Poly(out, 1)


def _squarefree_along(p: Poly, var: int) -> bool:
    deg = p.degree_in(var)
    if deg <= 0:
        return True
    other_deg = max(p.degree_in(1 - var), 0)
    tries = 2 * (2 * deg) * (other_deg + 1) + 4
    for i in range(tries):
        value = (i + 1) // 2 * (1 if i % 2 else -1)
        q = _univariate_in(p, var, value)
        if q.degree_in(0) != deg:
            continue
        if all(m == 1 for m, _ in squarefree_decomposition(q)):
            return True
    return False


def is_squarefree_bivariate(p: Poly) -> bool:
    """Whether a bivariate polynomial has no repeated factor.

    A repeated factor that involves u survives every specialisation of v,
    while for a squarefree polynomial only finitely many specialisations
    (roots of the discriminant) create one; same with the roles swapped.
    """
    return _squarefree_along(p, 0) and _squarefree_along(p, 1)


# blowup engine


@dataclass
class _Point:
    pid: int
    pieces: list[tuple[tuple[str, int], Poly]]
    aux: list[Poly]
    parent: int | None = None
    on_exceptional: int | None = None
    children: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class Birth:
    """History of one blowup: its center point and what passed through it."""

    exceptional: int
    point: int
    through: tuple[int, ...]
    germ_multiplicity: int


class PartialResolution:
    """Mutable state of a sequence of point blowups over a germ."""

    def __init__(self, germ: GermCurve, aux: Sequence[Poly] = ()):
        self.germ = germ
        aux = [u_var(), v_var()] + list(aux)
        self.points: dict[int, _Point] = {0: _Point(0, [(("G", 0), germ.equation)], aux)}
        self.open: list[int] = [0]
        self.weights: list[int] = []
        self.births: list[Birth] = []
        self.valuations: list[list[int]] = []
        self._next_piece = 1
        self._next_point = 1

    # local geometry

    @staticmethod
    def _directions(f: Poly) -> list[Fraction | None]:
        """Tangent directions of f at the origin; None is the direction x = 0."""
        low = f.lowest_form()
        d = low.total_degree()
        inf_mult = low.min_degree_in(0)
        out: list[Fraction | None] = []
        count = inf_mult
        g = Poly({(b,): c for (a, b), c in low.terms.items()}, 1)
        if g.degree_in(0) > 0:
            for t, mult in rational_roots(g):
                out.append(t)
                count += mult
        if count != d:
            raise OutOfScopeError("tangent cone has directions that are not rational",
                                  tangent_cone=str(low))
        if inf_mult:
            out.append(None)
        return out

    @staticmethod
    def _transform(f: Poly, direction: Fraction | None) -> Poly:
        X, Y = Poly.var(0), Poly.var(1)
        k = f.order()
        if direction is None:
            g = f.compose([X * Y, Y])
            return g.unshift((0, k)) if k else g
        g = f.compose([X, X * (Y + direction)])
        return g.unshift((k, 0)) if k else g

    @staticmethod
    def _passes(f: Poly) -> bool:
        return f.coeff((0, 0)) == 0

    def is_normal_crossing(self, pid: int) -> bool:
        pts = self.points[pid].pieces
        if len(pts) > 2:
            return False
        if any(f.order() != 1 for _, f in pts):
            return False
        if len(pts) == 2:
            a, b = (f.homogeneous_part(1) for _, f in pts)
            det = a.coeff((1, 0)) * b.coeff((0, 1)) - a.coeff((0, 1)) * b.coeff((1, 0))
            return det != 0
        return True

    def blowup_step(self, pid: int) -> int:
        """Blow up an open point; returns the index of the new exceptional curve."""
        if pid not in self.open:
            raise NotOnCurveError(f"point {pid} is not an open point of the total transform")
        P = self.points[pid]
        if not P.pieces:
            raise NotOnCurveError(f"point {pid} lies on no curve")
        k = len(self.weights)
        through = tuple(i for (kind, i), _ in P.pieces if kind == "E")
        germ_mult = sum(f.order() for (kind, _), f in P.pieces if kind == "G")
        for i in through:
            self.weights[i] += 1
        self.weights.append(1)
        self.births.append(Birth(k, pid, through, germ_mult))
        self.valuations.append([
            sum(self.valuations[i][j] for i in through) + a.order()
            for j, a in enumerate(P.aux)
        ])
        by_dir: dict[object, list[tuple[tuple[str, int], Poly]]] = {}
        order: list[object] = []
        for label, f in P.pieces:
            dirs = self._directions(f)
            for t in dirs:
                key = ("inf",) if t is None else ("fin", t)
                if key not in by_dir:
                    by_dir[key] = []
                    order.append(key)
                if label[0] == "G" and len(dirs) > 1:
                    new_label = ("G", self._next_piece)
                    self._next_piece += 1
                else:
                    new_label = label
                g = self._transform(f, t)
                if self._passes(g):
                    by_dir[key].append((new_label, g))
        order.sort(key=lambda kk: (kk[0] == "inf", kk[1] if kk[0] == "fin" else 0))
        self.open.remove(pid)
        for key in order:
            t = None if key[0] == "inf" else key[1]
            e_eq = Poly.var(1) if t is None else Poly.var(0)
            child = _Point(self._next_point, [(("E", k), e_eq)] + by_dir[key],
                           [self._transform(a, t) for a in P.aux], pid, k)
            self._next_point += 1
            self.points[child.pid] = child
            P.children.append(child.pid)
            self.open.append(child.pid)
        return k

    def first_non_nc(self) -> int | None:
        for pid in self.open:
            if not self.is_normal_crossing(pid):
                return pid
        return None


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str
    weight: int


@dataclass(frozen=True)
class Trail:
    vertices: tuple[str, ...]
    exceptional: bool
    completely_exceptional: bool

    def exceptional_part(self, graph: "ResolutionGraph") -> list[str]:
        return [v for v in self.vertices if graph.vertex(v).kind == "exceptional"]

    def order(self, graph: "ResolutionGraph") -> int:
        """Order of the chain group of the exceptional curves of the trail."""
        part = self.exceptional_part(graph)
        if not part:
            return 1
        return chain_group([graph.vertex(v).weight for v in part]).order

    def branches(self, graph: "ResolutionGraph") -> list[str]:
        return [v for v in self.vertices if graph.vertex(v).kind == "branch"]


@dataclass(frozen=True)
class TrailSet:
    trails: tuple[Trail, ...]

    def __iter__(self):
        return iter(self.trails)

    def __len__(self) -> int:
        return len(self.trails)

    def containing(self, vertex: str) -> Trail:
        for t in self.trails:
            if vertex in t.vertices:
                return t
        raise KeyError(vertex)


@dataclass(frozen=True)
class ResolutionGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...]
    center: str | None
    births: tuple[Birth, ...] | None = None
    valuations: dict[str, tuple[int, ...]] | None = None
    branch_multiplicities: dict[str, dict[str, int]] | None = None
    germ_multiplicities: tuple[int, ...] = ()

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def neighbors(self, vid: str) -> list[str]:
        out = []
        for a, b in self.edges:
            if a == vid:
                out.append(b)
            elif b == vid:
                out.append(a)
        return sorted(out, key=_vid_key)

    def exceptional_ids(self) -> list[str]:
        return [v.id for v in self.vertices if v.kind == "exceptional"]

    def branch_ids(self) -> list[str]:
        return [v.id for v in self.vertices if v.kind == "branch"]

    @property
    def blowups(self) -> int:
        return len(self.exceptional_ids())

    def is_tree(self) -> bool:
        n = len(self.vertices)
        if len(self.edges) != n - 1:
            return False
        seen = {self.vertices[0].id}
        todo = [self.vertices[0].id]
        while todo:
            x = todo.pop()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == n

    def center_valuation(self) -> tuple[int, int] | None:
        if self.center is None or self.valuations is None:
            return None
        val = self.valuations[self.center]
        return (val[0], val[1])

    def milnor_number(self) -> int:
        delta = sum(m * (m - 1) // 2 for m in self.germ_multiplicities)
        return 2 * delta - len(self.branch_ids()) + 1

    def to_json(self, trails: TrailSet | None = None) -> dict:
        out = {
            "vertices": [{"id": v.id, "kind": v.kind, "weight": v.weight} for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "center": self.center,
        }
        if trails is not None:
            out["trails"] = [list(t.vertices) for t in trails]
        return out

    def to_dot(self, trails: TrailSet | None = None) -> str:
        lines = ["graph resolution {"]
        for v in self.vertices:
            shape = "box" if v.kind == "branch" else "ellipse"
            label = v.id if v.kind == "branch" else f"{v.id} ({-v.weight})"
            extra = ", style=bold" if v.id == self.center else ""
            lines.append(f'  "{v.id}" [label="{label}", shape={shape}{extra}];')
        for a, b in self.edges:
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vid_key(vid: str):
    return (vid[0] != "E", int(vid[1:]))


def _finalize(state: PartialResolution) -> ResolutionGraph:
    edges: set[tuple[str, str]] = set()
    branch_of_point: list[tuple[int, str]] = []
    terminal: dict[str, int] = {}
    nb = 0
    for pid in state.open:
        labels = []
        for (kind, i), _ in state.points[pid].pieces:
            if kind == "E":
                labels.append(f"E{i + 1}")
            else:
                nb += 1
                bid = f"B{nb}"
                labels.append(bid)
                terminal[bid] = pid
                branch_of_point.append((pid, bid))
        if len(labels) == 2:
            a, b = sorted(labels, key=_vid_key)
            edges.add((a, b))
    verts = [Vertex(f"E{i + 1}", "exceptional", w) for i, w in enumerate(state.weights)]
    verts += [Vertex(f"B{j}", "branch", 0) for j in range(1, nb + 1)]
    center = f"E{len(state.weights)}" if state.weights else None
    vals = {f"E{i + 1}": tuple(v) for i, v in enumerate(state.valuations)}
    mults = _branch_multiplicities(state, terminal)
    return ResolutionGraph(
        tuple(verts),
        tuple(sorted(edges, key=lambda e: (_vid_key(e[0]), _vid_key(e[1])))),
        center,
        tuple(state.births),
        vals,
        mults,
        tuple(b.germ_multiplicity for b in state.births),
    )


def _branch_multiplicities(state: PartialResolution, terminal: dict[str, int]) -> dict[str, dict[str, int]]:
    """Multiplicity of every branch at the center of every blowup.

    Uses m_P(b) = sum over the next point Q on E_P of I_Q(b, E_P), and
    I_Q(b, D) = m_Q(b) + I_Q'(b, D) where Q' is the point of D on E_Q,
    with I = 1 at the normal-crossing point where b ends.
    """
    pts = state.points
    path: dict[str, list[int]] = {}
    for bid, pid in terminal.items():
        chain = [pid]
        while pts[chain[-1]].parent is not None:
            chain.append(pts[chain[-1]].parent)
        path[bid] = chain[::-1]

    def exc_at(pid: int) -> set[int]:
        return {i for (kind, i), _ in pts[pid].pieces if kind == "E"}

    def mult(bid: str, depth: int) -> int:
        p = path[bid]
        if depth == len(p) - 1:
            return 1
        e_here = pts[p[depth + 1]].on_exceptional
        return inter(bid, depth + 1, e_here)

    def inter(bid: str, depth: int, d: int) -> int:
        p = path[bid]
        if depth == len(p) - 1:
            return 1
        nxt = p[depth + 1]
        rest = inter(bid, depth + 1, d) if d in exc_at(nxt) else 0
        return mult(bid, depth) + rest

    out: dict[str, dict[str, int]] = {}
    for birth in state.births:
        row = {}
        for bid, p in path.items():
            row[bid] = mult(bid, p.index(birth.point)) if birth.point in p else 0
        out[f"E{birth.exceptional + 1}"] = row
    return out


def resolve_minimal(germ: GermCurve | Poly | str, aux: Sequence[Poly] = ()) -> tuple[ResolutionGraph, TrailSet]:
    """Minimal normal-crossing resolution and trails of a reduced curve germ.

    A germ that already has normal crossings (smooth, or a node) is blown
    up once, so the graph always has an exceptional center.
    """
    if isinstance(germ, str):
        germ = parse_germ(germ)
    elif isinstance(germ, Poly):
        germ = GermCurve(germ)
    if not is_squarefree_bivariate(germ.equation):
        raise NonIsolatedSingularityError("germ equation has a repeated factor",
                                          equation=str(germ))
    state = PartialResolution(germ, aux)
    if state.is_normal_crossing(0):
        state.blowup_step(0)
    while True:
        pid = state.first_non_nc()
        if pid is None:
            break
        if len(state.weights) >= MAX_BLOWUPS:
            raise CapacityError(f"more than {MAX_BLOWUPS} blowups", limit=MAX_BLOWUPS)
        state.blowup_step(pid)
    graph = _finalize(state)
    return graph, compute_trails(graph)


def compute_trails(graph: ResolutionGraph) -> TrailSet:
    """Components of the graph with the center removed, each read outward from it."""
    c = graph.center
    if c is None:
        return TrailSet(())
    trails = []
    for start in graph.neighbors(c):
        chain = [start]
        prev = c
        while True:
            nxt = [y for y in graph.neighbors(chain[-1]) if y != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                raise OutOfScopeError(f"trail through {chain[-1]} branches; not a chain")
            prev = chain[-1]
            chain.append(nxt[0])
        kinds = [graph.vertex(v).kind for v in chain]
        trails.append(Trail(tuple(chain), "exceptional" in kinds,
                            all(k == "exceptional" for k in kinds)))
    return TrailSet(tuple(trails))


def identify_ade(germ: GermCurve | Poly | str) -> str | None:
    """ADE type of a germ from its multiplicity, tangent cone and Milnor number."""
    if isinstance(germ, str):
        germ = parse_germ(germ)
    elif isinstance(germ, Poly):
        germ = GermCurve(germ)
    graph, _ = resolve_minimal(germ)
    return ade_type_of_graph(graph, germ.equation)


def ade_type_of_graph(graph: ResolutionGraph, equation: Poly) -> str | None:
    mu = graph.milnor_number()
    mult = equation.order()
    if mult == 1:
        return "A0"
    if mult == 2:
        return f"A{mu}"
    if mult != 3:
        return None
    low = equation.lowest_form()
    distinct = len(PartialResolution._directions(low))
    if distinct >= 2:
        return f"D{mu}" if mu >= 4 else None
    return f"E{mu}" if mu in (6, 7, 8) else None


def trail_orders(graph: ResolutionGraph, trails: TrailSet) -> list[int]:
    return [t.order(graph) for t in trails if t.exceptional]


def ade_labels(max_index: int = 10) -> Iterable[str]:
    for k in range(0, max_index + 1):
        yield f"A{k}"
    for k in range(4, max_index + 1):
        yield f"D{k}"
    yield from ("E6", "E7", "E8")


def center_valuation_weights(graph: ResolutionGraph) -> tuple[int, int]:
    """Orders of u and v along the center, divided by their gcd."""
    a, b = graph.center_valuation()
    g = gcd(a, b)
    return a // g, b // g
