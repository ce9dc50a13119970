"""The ten acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import itertools
import time

from ade_belyi.belyi import (
    NotGenusZeroError,
    Passport,
    PermTriple,
    check_riemann_hurwitz,
    passport_of_forms,
    passport_of_triple,
)
from ade_belyi.classify import beta_of_cover, beta_of_formula, d4_construct, fiber_describe, verify_normal_form
from ade_belyi.hjchains import HJType, cf_eval, supplement_delta
from ade_belyi.monodromy_numeric import monodromy_triple
from ade_belyi.perms import Permutation, is_transitive
from ade_belyi.pullback import d4_m0, pullback_for_type, trail_name
from ade_belyi.resolution import ade_germ, ade_labels, parse_ade_label, resolve_minimal, trail_orders
from support import (
    DEGREE_FOUR,
    DESSIN,
    catalog_bel3_images,
    catalog_grid,
    chain_oracle_problem,
    forms,
    report,
    xn_pair,
)


def test_criterion_1_hj_identities():
    start = time.perf_counter()
    bad = []
    for k in range(1, 51):
        t = cf_eval([2] * k)
        if (t.m0, t.q) != (k + 1, k):
            bad.append(("all twos", k))
    for n in range(2, 11):
        for k in range(0, 11):
            w = [n] + [2] * k
            t, r = cf_eval(w), cf_eval(w[::-1])
            if (t.m0, t.q) != (n * (k + 1) - k, k + 1):
                bad.append(("heavy end", n, k))
            if r.m0 != t.m0 or (t.q * r.q) % t.m0 != 1 % t.m0:
                bad.append(("reversal", n, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1
    report(1, ok, f"continued fraction identities, {len(bad)} mismatches, {elapsed:.3f}s")
    assert ok, bad[:5]


def test_criterion_2_chain_groups_against_row_reduction():
    problems = []
    count = 0
    for length in range(1, 9):
        for w in itertools.product(range(1, 6), repeat=length):
            count += 1
            p = chain_oracle_problem(list(w))
            if p:
                problems.append(p)
    ok = not problems
    report(2, ok, f"{count} chains with weights 1..5 and length <= 8, {len(problems)} disagreements")
    assert ok, problems[:5]


def _expected_trail_orders(label):
    kind, idx = parse_ade_label(label)
    if kind == "A":
        k = idx // 2
        return [k + 1] if idx % 2 else sorted([2, 2 * k + 1])
    if kind == "D":
        if idx % 2 == 0:
            return [(idx - 2) // 2]
        return sorted([idx - 2, 2])
    return {"E6": [3, 4], "E7": [2, 3], "E8": [3, 5]}[label]


def test_criterion_3_resolution_of_ade_germs():
    start = time.perf_counter()
    bad = []
    labels = list(ade_labels(23))
    for label in labels:
        g, trails = resolve_minimal(ade_germ(label))
        if label in ("A0", "A1", "D4"):
            if g.blowups != 1:
                bad.append((label, "blowups", g.blowups))
            if label != "D4":
                continue
        hubs = [v for v in g.exceptional_ids() if len(g.neighbors(v)) == 3]
        if hubs != [g.center] or g.vertex(g.center).weight != 1:
            bad.append((label, "center"))
        if label != "D4":
            if sorted(trail_orders(g, trails)) != _expected_trail_orders(label):
                bad.append((label, "orders", trail_orders(g, trails)))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    report(3, ok, f"{len(labels)} ADE germs up to index 23, {len(bad)} mismatches, {elapsed:.2f}s")
    assert ok, bad[:5]


def test_criterion_4_supplement():
    bad = []
    cases = 0
    for n in range(1, 25):
        for m in range(1, n + 1):
            if n % m:
                continue
            cases += 1
            s = supplement_delta(n, m)
            if s.delta != m - 1 or s.residual != HJType(n // m, n // m - 1):
                bad.append((n, m, s.delta, s.residual))
    ok = not bad
    report(4, ok, f"{cases} pairs (n, m) with m | n <= 24, {len(bad)} mismatches")
    assert ok, bad[:5]


def _single(rep):
    assert len(rep.results) == 1
    return rep.results[0][1]


def test_criterion_5_worked_pullbacks():
    bad = []
    for k in range(1, 9):
        r = _single(pullback_for_type(f"A{2 * k + 1}", ["B1", "B2"], 2))
        if not (r.weights == (2,) * (2 * k + 1) and r.order == 2 * k + 2
                and r.marked_exponent == k + 1 and not r.ok):
            bad.append(("a", k))
        r = _single(pullback_for_type(f"A{2 * k}", ["B1", "trail2"], 2))
        if not (r.weights == (2,) * (k - 1) + (3, 1, 3) + (2,) * (k - 1)
                and r.marked_exponent == 0 and not r.ok):
            bad.append(("b", k))
        r = _single(pullback_for_type(f"D{2 * k + 3}", ["B1", "trail3"], 2))
        if not (r.ok and sorted(r.weights) == [1] + [2] * (2 * k) and r.weights[r.marked] == 1):
            bad.append(("c", k))
    g, t = resolve_minimal(ade_germ("E6"))
    names = [trail_name(g, t, i) for i in range(3)]
    for n in range(2, 13):
        for pair in itertools.combinations(names, 2):
            if pullback_for_type("E6", list(pair), n).ok:
                bad.append(("d", n, pair))
    for n in range(1, 11):
        if d4_m0(n).order != n:
            bad.append(("e", n))
    ok = not bad
    report(5, ok, f"worked pullback fixtures (a)-(e), {len(bad)} mismatches")
    assert ok, bad[:5]


def _genus(t):
    chi = len(t.s0.cycles(True)) + len(t.s1.cycles(True)) - t.n + len(t.sinf.cycles(True))
    return (2 - chi) // 2


def test_criterion_6_riemann_hurwitz_brute_force():
    start = time.perf_counter()
    bad = []
    genus_zero = 0
    for n in range(1, 6):
        perms = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
        for s0, s1 in itertools.product(perms, repeat=2):
            if not is_transitive([s0, s1], n):
                continue
            t = PermTriple.from_pair(s0, s1)
            p = Passport(*(tuple(len(c) for c in s.cycles(True)) for s in (t.s0, t.s1, t.sinf)))
            if _genus(t) == 0:
                genus_zero += 1
                if not check_riemann_hurwitz(p) or passport_of_triple(t) != p:
                    bad.append((s0, s1))
            else:
                try:
                    passport_of_triple(t)
                    bad.append((s0, s1))
                except NotGenusZeroError:
                    pass
                if check_riemann_hurwitz(p):
                    bad.append((s0, s1))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    report(6, ok, f"{genus_zero} genus-0 transitive triples in S_n, n <= 5, {len(bad)} mismatches, "
                  f"{elapsed:.1f}s")
    assert ok, bad[:5]


def test_criterion_7_catalog_verification():
    bad = []
    count = 0
    for c in catalog_grid():
        count += 1
        b, check = beta_of_formula(c)
        p = b.passport().normalized()
        if not check.matches or not p.bel2 or p.c0 != (b.degree,):
            bad.append((c.family, c.params, check.label, p))
    ok = not bad and count > 0
    report(7, ok, f"{count} catalog covers with parameters <= 4, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_8_d4_round_trip():
    bad = []
    three_point = [forms(*DESSIN)] + [forms(*p) for p in DEGREE_FOUR]
    # pairs branched at two points need m1 > 1 and f(0:1) = 1, so z^n enters as (z + 1)^n
    two_point = [forms(f"(x1 + x2)^{n}", f"x2^{n}") for n in range(2, 7)]
    checks = 0
    for f in three_point + two_point:
        identity = (1, 1) if f in three_point else (2, 1)
        checks += 1
        if beta_of_cover(d4_construct(f, *identity)) != f:
            bad.append(("identity", f))
        grid = [(1, 2), (2, 3), (3, 4)] if f in three_point else [(2, 1), (2, 3), (3, 4)]
        for m in grid:
            checks += 1
            if verify_normal_form(d4_construct(f, *m)).label != "D4":
                bad.append(("germ", f, m))
    ok = not bad
    report(8, ok, f"{checks} D4 constructions round-tripped or resolved, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_9_emptiness():
    bad = []
    labels = [f"A{2 * k}" for k in range(1, 6)] + ["E6", "E8"]
    for label in labels:
        for n in range(1, 7):
            d = fiber_describe(xn_pair(n), label)
            out = d.to_json()
            if d.nonempty is not False or not d.complete or not d.witness or "typed" not in out:
                bad.append((label, n))
    ok = not bad
    report(9, ok, f"{len(labels) * 6} fibres over z^n (n <= 6) for A_2k, E6, E8, {len(bad)} not empty")
    assert ok, bad[:5]


def test_criterion_10_numeric_monodromy():
    fixtures = [xn_pair(n) for n in range(1, 9)] + [forms(*DESSIN)] + catalog_bel3_images(6)
    bad = []
    slowest = 0.0
    for f in fixtures:
        runs = []
        for _ in range(3):
            start = time.perf_counter()
            runs.append(monodromy_triple(f))
            slowest = max(slowest, time.perf_counter() - start)
        t = runs[0]
        if passport_of_triple(t) != passport_of_forms(f) or not (t.s0 * t.s1 * t.sinf).is_identity():
            bad.append(("passport", f))
        if runs[1] != t or runs[2] != t:
            bad.append(("determinism", f))
    ok = not bad and slowest < 1
    report(10, ok, f"{len(fixtures)} pairs tracked three times, {len(bad)} failures, slowest run {slowest:.2f}s")
    assert ok, bad[:5]
