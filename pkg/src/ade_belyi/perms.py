"""Permutations on {1..n}, cycle types, transitivity and group orders."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError, MalformedInputError

DEFAULT_DEGREE_BOUND = 12


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise MalformedInputError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        cycles = [list(c) for c in cycles]
        moved = [p for c in cycles for p in c]
        if len(moved) != len(set(moved)):
            raise MalformedInputError("cycles are not disjoint")
        if any(p < 1 for p in moved):
            raise MalformedInputError("points are 1-based")
        top = max(moved, default=0)
        if n is None:
            n = top
        elif top > n:
            raise MalformedInputError(f"point {top} exceeds degree {n}")
        img = list(range(1, n + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-to-right product: apply ``self`` first, then ``other``."""
        if other.degree != self.degree:
            raise MalformedInputError("degree mismatch")
        return Permutation(tuple(other.images[i - 1] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def to_cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.to_cycle_string()


CycleType = tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse cycle notation such as ``(1 2)(3 4 5)``; ``()`` or ``id`` is the identity."""
    s = text.strip()
    if s in ("", "id", "()", "e"):
        if n is None:
            raise MalformedInputError("identity needs an explicit degree")
        return Permutation.identity(n)
    lead = len(text) - len(text.lstrip())
    at = 0
    for m in _CYCLE_RE.finditer(s):
        if s[at:m.start()].strip():
            break
        at = m.end()
    if s[at:].strip():
        gap = s[at:]
        raise MalformedInputError(f"bad cycle notation: {text!r}",
                                  position=lead + at + len(gap) - len(gap.lstrip()))
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        toks = m.group(1).replace(",", " ").split()
        if not toks:
            continue
        try:
            cycles.append([int(t) for t in toks])
        except ValueError as exc:
            raise MalformedInputError(f"bad point in {text!r}", position=lead + m.start()) from exc
    return Permutation.from_cycles(cycles, n)


def cycle_type(p: Permutation) -> CycleType:
    return tuple(sorted((len(c) for c in p.cycles(include_fixed=True)), reverse=True))


def _check_degrees(gens: Sequence[Permutation], n: int | None) -> int:
    degs = {g.degree for g in gens}
    if n is not None:
        degs.add(n)
    if len(degs) > 1:
        raise MalformedInputError(f"generators have different degrees {sorted(degs)}")
    if not degs:
        raise MalformedInputError("degree unknown for an empty generator list")
    return degs.pop()


def orbit(gens: Sequence[Permutation], start: int = 1) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        i = todo.pop()
        for g in gens:
            j = g(i)
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return seen


def is_transitive(gens: Sequence[Permutation], n: int | None = None) -> bool:
    """True when the generated group acts transitively on {1..n}.

    With no generators the group is trivial, transitive only on one point.
    """
    n = _check_degrees(gens, n)
    if n <= 1:
        return True
    if not gens:
        return False
    return len(orbit(gens)) == n


def group_order(gens: Sequence[Permutation], n: int | None = None,
                bound: int = DEFAULT_DEGREE_BOUND) -> int:
    """Order of the generated group by breadth-first closure."""
    n = _check_degrees(gens, n)
    if n > bound:
        raise CapacityError(f"degree {n} exceeds bound {bound}", degree=n, bound=bound)
    ident = Permutation.identity(n)
    seen = {ident.images}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = p * g
            if q.images not in seen:
                seen.add(q.images)
                queue.append(q)
    return len(seen)
