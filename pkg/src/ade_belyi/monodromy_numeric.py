"""Numerical monodromy of a Belyi pair by tracking its fibre around 0 and 1.

The fibre over t is the zero set of h1(x, 1) - t h2(x, 1) on the projective
line.  Points are compared in the chordal metric, so a root passing near
infinity needs no special casing in the matching; root polishing switches
to the chart y = 1/x once |x| > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .belyi import FormPair, NotBelyiError, PermTriple, is_belyi, passport_of_forms, passport_of_triple
from .errors import DomainError, MalformedInputError
from .perms import Permutation


class NearCriticalValueError(DomainError):
    code = "near-critical-value"


class TrackingFailureError(DomainError):
    code = "tracking-failure"


INF = complex("inf")


@dataclass(frozen=True)
class TrackerConfig:
    base: float = 0.5
    radius: float = 0.5
    step: float = 1 / 32
    min_step: float = 1e-9
    eps_match: float = 1e-6
    eps_root: float = 1e-11

    def __post_init__(self):
        if not 0 < self.base < 1:
            raise MalformedInputError("base point must lie strictly between 0 and 1")
        if not 0 < self.radius <= min(self.base, 1 - self.base):
            raise MalformedInputError("loop radius must be positive and keep the loops apart",
                                      radius=self.radius)
        if not 0 < self.min_step <= self.step <= 1:
            raise MalformedInputError("need 0 < min_step <= step <= 1")
        if not 0 < self.eps_root < self.eps_match:
            raise MalformedInputError("need 0 < eps_root < eps_match")


def chordal(a: complex, b: complex) -> float:
    if np.isinf(a) and np.isinf(b):
        return 0.0
    if np.isinf(a):
        return 1 / math.hypot(1, abs(b))
    if np.isinf(b):
        return 1 / math.hypot(1, abs(a))
    return abs(a - b) / (math.hypot(1, abs(a)) * math.hypot(1, abs(b)))


def _coeffs(f: FormPair) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of h1, h2 indexed by the power of x1, as complex arrays."""
    n = f.n
    a = np.zeros(n + 1, dtype=complex)
    b = np.zeros(n + 1, dtype=complex)
    for (i, _), c in f.h1.terms.items():
        a[i] = float(c)
    for (i, _), c in f.h2.terms.items():
        b[i] = float(c)
    return a, b


def _polish(coef: np.ndarray, x: complex, eps: float) -> complex:
    """Newton in x if |x| <= 1, else in y = 1/x; coef[i] multiplies x^i."""
    scale = np.abs(coef).sum()
    if np.isinf(x) or abs(x) > 1:
        rev = coef[::-1]
        y = 0j if np.isinf(x) else 1 / x
        y = _newton(rev, y, eps * scale)
        return INF if y == 0 else 1 / y
    return _newton(coef, x, eps * scale)


def _newton(coef: np.ndarray, x: complex, tol: float) -> complex:
    p = np.polynomial.Polynomial(coef)
    dp = p.deriv()
    for _ in range(8):
        val = p(x)
        if abs(val) <= tol:
            break
        d = dp(x)
        if d == 0:
            break
        x = x - val / d
    return complex(x)


def _raw_fibre(a: np.ndarray, b: np.ndarray, t: complex, eps_root: float) -> list[complex]:
    coef = a - t * b
    n = len(coef) - 1
    nz = np.nonzero(np.abs(coef) > 1e-14 * max(np.abs(coef).max(), 1.0))[0]
    top = int(nz.max()) if len(nz) else 0
    roots = list(np.roots(coef[: top + 1][::-1])) if top > 0 else []
    roots += [INF] * (n - top)
    return [_polish(coef, complex(r), eps_root) for r in roots]


def _min_gap(points: list[complex]) -> float:
    gaps = [chordal(p, q) for i, p in enumerate(points) for q in points[i + 1:]]
    return min(gaps) if gaps else 1.0


def _sort_key(x: complex):
    return (1, 0.0, 0.0) if np.isinf(x) else (0, round(x.real, 9), round(x.imag, 9))


def fiber_roots(f: FormPair, t: complex, cfg: TrackerConfig = TrackerConfig()) -> list[complex]:
    """The n points over t, infinity included, polished and sorted."""
    if t in (0, 1):
        raise NearCriticalValueError("t is a branch value", t=str(t))
    a, b = _coeffs(f)
    pts = _raw_fibre(a, b, complex(t), cfg.eps_root)
    gap = _min_gap(pts)
    if gap < cfg.eps_match:
        raise NearCriticalValueError("two points of the fibre nearly coincide; t is close to a critical "
                                     "value, try a smaller loop radius", t=str(t), gap=gap)
    return sorted(pts, key=_sort_key)


def _match(prev: list[complex], new: list[complex], eps: float) -> list[int] | None:
    """prev[i] -> new[out[i]] by nearest neighbour, or None if ambiguous."""
    out = []
    for p in prev:
        d = sorted((chordal(p, q), j) for j, q in enumerate(new))
        if len(d) > 1 and (d[1][0] - d[0][0] < eps or d[0][0] > d[1][0] / 3):
            return None
        out.append(d[0][1])
    if len(set(out)) != len(out):
        return None
    return out


def _path(center: float, cfg: TrackerConfig):
    """Loop based at cfg.base: out along the real axis, once round the circle, back."""
    r = cfg.radius
    start = center + (r if center == 0 else -r)
    theta0 = 0.0 if center == 0 else np.pi

    def point(s: float) -> complex:
        # s in [0, 3]: [0,1] segment out, [1,2] circle, [2,3] segment back
        if s <= 1:
            return complex(cfg.base + (start - cfg.base) * s)
        if s <= 2:
            return complex(center + r * np.exp(1j * (theta0 + 2 * np.pi * (s - 1))))
        return complex(start + (cfg.base - start) * (s - 2))

    return point


def _track(a, b, start: list[complex], center: float, cfg: TrackerConfig) -> list[complex]:
    point = _path(center, cfg)
    pts = list(start)
    s, h = 0.0, cfg.step
    while s < 3:
        h = min(h, 3 - s)
        if abs(point(s) - point(s + h)) == 0:
            s += h
            continue
        new = _raw_fibre(a, b, point(s + h), cfg.eps_root)
        idx = _match(pts, new, cfg.eps_match)
        if idx is None:
            h /= 2
            if h < cfg.min_step:
                raise TrackingFailureError("step size fell below the floor", loop=f"around {center:g}",
                                           arc=[s, s + 2 * h])
            continue
        pts = [new[j] for j in idx]
        s += h
        h = min(2 * h, cfg.step)
    return pts


def _loop_permutation(a, b, base: list[complex], center: float, cfg: TrackerConfig) -> Permutation:
    end = _track(a, b, base, center, cfg)
    idx = _match(end, base, cfg.eps_match)
    if idx is None:
        raise TrackingFailureError("tracked points do not return to the fibre", loop=f"around {center:g}")
    return Permutation(tuple(j + 1 for j in idx))


def monodromy_triple(f: FormPair, cfg: TrackerConfig = TrackerConfig()) -> PermTriple:
    """Permutations of the fibre over the base point for counterclockwise loops around 0 and 1.

    Points are labelled 1..n in the sorted order of the fibre.  The product
    s0 * s1 applies the loop around 0 first.
    """
    if not is_belyi(f):
        raise NotBelyiError("the pair has a critical value outside 0, 1, infinity")
    base = fiber_roots(f, cfg.base, cfg)
    a, b = _coeffs(f)
    s0 = _loop_permutation(a, b, base, 0.0, cfg)
    s1 = _loop_permutation(a, b, base, 1.0, cfg)
    return PermTriple.from_pair(s0, s1)


@dataclass(frozen=True)
class MonodromyReport:
    triple: PermTriple
    verified: bool

    def to_json(self) -> dict:
        return {"s0": self.triple.s0.to_cycle_string(), "s1": self.triple.s1.to_cycle_string(),
                "sinf": self.triple.sinf.to_cycle_string(), "verified_cycle_types": self.verified}


def monodromy_report(f: FormPair, cfg: TrackerConfig = TrackerConfig()) -> MonodromyReport:
    """Tracked triple together with a check of its cycle types against the exact passport."""
    triple = monodromy_triple(f, cfg)
    return MonodromyReport(triple, passport_of_triple(triple) == passport_of_forms(f))
