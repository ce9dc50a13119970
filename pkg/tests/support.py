from fractions import Fraction
import itertools

import sympy
from hypothesis import strategies as st

from ade_belyi.algebra import BinaryForm, Poly
from ade_belyi.belyi import FormPair
from ade_belyi.perms import Permutation

X1, X2 = sympy.symbols("x1 x2")
X = sympy.Symbol("x")


def to_sympy(p: Poly):
    gens = (X,) if p.nvars == 1 else (X1, X2)
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for g, k in zip(gens, e):
            term *= g ** k
        out += term
    return sympy.expand(out)


def from_sympy(expr, nvars: int = 2) -> Poly:
    gens = (X,) if nvars == 1 else (X1, X2)
    sp = sympy.Poly(sympy.expand(expr), *gens)
    terms = {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in sp.terms()}
    return Poly(terms, nvars)


def same_up_to_unit(a: Poly, b: Poly) -> bool:
    return a.content_monic() == b.content_monic()


def forms(f1: str, f2: str) -> FormPair:
    from ade_belyi.algebra import parse_form
    return FormPair(parse_form(f1), parse_form(f2))


def xn_pair(n: int) -> FormPair:
    return FormPair(BinaryForm({(n, 0): 1}), BinaryForm({(0, n): 1}))


# the degree-3 dessin with passport {(2,1),(2,1),(3)}
DESSIN = ("x1^2*(3*x2 - 2*x1)", "x2^3")


small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def univariate(draw, max_degree: int = 6, nonzero: bool = True):
    deg = draw(st.integers(0, max_degree))
    coeffs = draw(st.lists(small_fracs, min_size=deg + 1, max_size=deg + 1))
    if nonzero and not any(coeffs):
        coeffs[-1] = Fraction(1)
    return Poly.from_univariate(coeffs)


@st.composite
def binary_forms(draw, min_degree: int = 0, max_degree: int = 6):
    deg = draw(st.integers(min_degree, max_degree))
    coeffs = draw(st.lists(small_fracs, min_size=deg + 1, max_size=deg + 1))
    if not any(coeffs):
        coeffs[0] = Fraction(1)
    return BinaryForm({(deg - k, k): c for k, c in enumerate(coeffs)}, deg)


@st.composite
def permutations(draw, n: int):
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


def smith_invariants(rows: list[list[int]]) -> list[int]:
    """Invariant factors of an integer matrix by elementary row and column operations."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    for t in range(min(m, n)):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            out.extend([0] * (min(m, n) - t))
            break
        while True:
            _, i, j = min(nz)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p]
                if not bad:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0][0]])]
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                  if a[i][j] and (i == t or j == t)]
        out.append(abs(a[t][t]))
    return out


def chain_relation_matrix(weights) -> list[list[int]]:
    """Abelianized chain relations w_j e_j = e_{j-1} + e_{j+1}, with e_0 = e_{k+1} = 0."""
    k = len(weights)
    rows = []
    for j, w in enumerate(weights):
        r = [0] * k
        r[j] = w
        if j > 0:
            r[j - 1] = -1
        if j < k - 1:
            r[j + 1] = -1
        rows.append(r)
    return rows


CATALOG_LABELS = ("A0", "A1", "A3", "A5", "A7", "D4", "D5", "D6", "D7", "D8", "D9", "D10", "D11", "E7")


def catalog_grid(labels=CATALOG_LABELS, top=4):
    """Every (label, family, params) with parameter values in 1..top passing the side conditions."""
    from ade_belyi.classify import ConstraintError, bel2_catalog, family_infos

    seen = set()
    for label in labels:
        for info in family_infos(label):
            for n, m, m0, m1, m2, j in itertools.product(range(1, top + 1), repeat=6):
                params = {"n": n, "m": m, "m0": m0, "m1": m1, "m2": m2, "j": j}
                try:
                    c = bel2_catalog(label, params, info.index)
                except ConstraintError:
                    continue
                key = (c.family, c.params)
                if key not in seen:
                    seen.add(key)
                    yield c


DEGREE_FOUR = (
    ("x1^3*(4*x2 - 3*x1)", "x2^4"),
    ("4*x1^2*(x2^2 - x1^2)", "x2^4"),
)


def catalog_bel3_images(max_degree=6):
    """Rational beta images branched at three points, from the E7 conflict formula and D4 constructions."""
    from ade_belyi.belyi import passport_of_forms
    from ade_belyi.classify import CoverFormula, beta_of_cover, beta_of_formula, d4_construct

    out = []
    b, _ = beta_of_formula(CoverFormula("z^3", "z^2 + w^2", branch="u*(u^2 - v^3)"))
    out.append(b.form_pair())
    for h1, h2 in (DESSIN,) + DEGREE_FOUR:
        out.append(beta_of_cover(d4_construct(forms(h1, h2), 1, 2)))
    return [f for f in out if f.n <= max_degree and not passport_of_forms(f).bel2]


def chain_oracle_problem(w):
    """None if chain_group and cf_eval agree with the integer Smith form of the chain relations."""
    from ade_belyi.hjchains import cf_eval, chain_group, chain_sequence

    g = chain_group(w)
    rows = chain_relation_matrix(w)
    inv = smith_invariants(rows)
    # the complement group is cyclic: all invariant factors but one are units
    main = max(inv, key=lambda x: (x == 0, x))
    rest = list(inv)
    rest.remove(main)
    if rest != [1] * (len(w) - 1):
        return f"{w}: group is not cyclic, invariants {inv}"
    if g.order != main:
        return f"{w}: order {g.order}, oracle {main}"
    if g.order and any(sum(r * x for r, x in zip(row, g.exponents)) % g.order for row in rows):
        return f"{w}: exponents {g.exponents} violate a relation"
    if chain_sequence(w)[-1] > 0:
        t = cf_eval(w)
        if t.m0 != g.order:
            return f"{w}: cf_eval m0 {t.m0}, group order {g.order}"
        if g.order > 1 and (g.exponents[-1] * t.q) % g.order != 1:
            return f"{w}: q {t.q} does not invert the last exponent {g.exponents[-1]}"
    return None


ACCEPTANCE_LINES = {}


def report(number, ok, detail):
    """Record and print the one-line outcome of an acceptance criterion."""
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok
