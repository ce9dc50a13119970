import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from ade_belyi.hjchains import (
    HJType,
    MalformedChainError,
    NonFaithfulActionError,
    NotAChainError,
    WeightedChain,
    cf_eval,
    chain_group,
    chain_sequence,
    contract_chain,
    contract_chain_tracked,
    cover_chain,
    decompose_cyclic_action,
    hj_expansion,
    supplement_delta,
)
from ade_belyi.errors import MalformedInputError
from support import chain_oracle_problem, chain_relation_matrix, smith_invariants


# continued fractions

def test_cf_examples():
    assert cf_eval([2, 2, 2]) == HJType(4, 3)
    assert cf_eval([3, 2]).as_pair() == [5, 2]
    assert cf_eval([7]).as_pair() == [7, 1]
    assert cf_eval([]).is_smooth


@pytest.mark.parametrize("k", range(1, 51))
def test_all_two_chains(k):
    assert cf_eval([2] * k).as_pair() == [k + 1, k]


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 11) for k in range(0, 11)])
def test_one_heavy_end(n, k):
    t = cf_eval([n] + [2] * k)
    assert t.as_pair() == [n * (k + 1) - k, k + 1]
    r = cf_eval([2] * k + [n])
    assert r.m0 == t.m0 and (r.q * t.q) % t.m0 == 1 % t.m0


def test_cf_rejects_nonpositive_value():
    with pytest.raises(MalformedChainError):
        cf_eval([1, 1, 1])
    with pytest.raises(MalformedChainError):
        cf_eval([0])


def test_unit_weights_are_flagged():
    assert cf_eval([3, 1, 3]).unit_weights
    assert not cf_eval([3, 2]).unit_weights


def test_hjtype_equality_accepts_dual():
    assert HJType(5, 2) == HJType(5, 3)
    assert HJType(7, 3) == (7, 5)
    assert HJType(7, 3) != HJType(7, 2)
    with pytest.raises(MalformedChainError):
        HJType(6, 2)


@pytest.mark.parametrize("m0", range(2, 30))
def test_expansion_inverts_evaluation(m0):
    for q in range(1, m0):
        if gcd(m0, q) == 1:
            w = hj_expansion(m0, q)
            assert min(w) >= 2
            assert cf_eval(w).as_pair() == [m0, q]


# chain groups

def test_chain_group_examples():
    g = chain_group([2, 2, 2])
    assert (g.order, g.exponents) == (4, (1, 2, 3))
    g = chain_group([3, 1, 3])
    assert (g.order, g.exponents) == (3, (1, 0, 2))
    assert not g.generates(1)


@pytest.mark.parametrize("k", range(1, 9))
def test_all_two_chain_with_middle_mark(k):
    g = chain_group([2] * (2 * k + 1))
    assert g.order == 2 * k + 2
    assert g.exponents[k] == k + 1
    assert not g.generates(k)


def _check_against_oracle(w):
    problem = chain_oracle_problem(w)
    assert problem is None, problem


@pytest.mark.parametrize("length", range(1, 6))
def test_chain_group_exhaustive_against_row_reduction(length):
    for w in itertools.product(range(1, 6), repeat=length):
        _check_against_oracle(list(w))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=8))
def test_row_reduction_oracle_matches_sympy(w):
    s = smith_normal_form(Matrix(chain_relation_matrix(w)), domain=ZZ)
    assert sorted(abs(s[i, i]) for i in range(len(w))) == sorted(smith_invariants(chain_relation_matrix(w)))


@pytest.mark.parametrize("length", range(1, 7))
def test_reversal_gives_inverse_q(length):
    for w in itertools.product(range(2, 6), repeat=length):
        t, r = cf_eval(w), cf_eval(w[::-1])
        assert t.m0 == r.m0
        assert (t.q * r.q) % t.m0 == 1 % t.m0
        assert t == r


# cyclic actions

def _brute_decompose(m, p1, p2):
    m1 = sum(1 for t in range(m) if p1 * t % m == 0)
    m2 = sum(1 for t in range(m) if p2 * t % m == 0)
    # residual action on (y1^m2, y2^m1), angles as multiples of 1/m
    pairs = {(p1 * m2 * t % m, p2 * m1 * t % m) for t in range(m)}
    m0 = len(pairs)
    if m0 == 1:
        return m1, m2, 1, 0
    unit = m // m0
    a = next(a for a, b in pairs if b == unit)
    return m1, m2, m0, a // unit


def test_decompose_examples():
    assert decompose_cyclic_action(12, 2, 3) == (2, 3, 2, 1)
    assert decompose_cyclic_action(7, 1, 6) == (1, 1, 7, 6)
    assert decompose_cyclic_action(9, 1, 1) == (1, 1, 9, 1)


@pytest.mark.parametrize("m", range(1, 25))
def test_decompose_against_group_enumeration(m):
    for p1 in range(1, m + 1):
        for p2 in range(1, m + 1):
            if gcd(gcd(m, p1), p2) != 1:
                continue
            assert decompose_cyclic_action(m, p1, p2) == _brute_decompose(m, p1, p2)


def test_decompose_errors():
    with pytest.raises(NonFaithfulActionError):
        decompose_cyclic_action(12, 2, 4)
    with pytest.raises(MalformedInputError):
        decompose_cyclic_action(5, 0, 1)


# contraction

def test_contract_examples():
    assert contract_chain([2, 1]).weights == ()
    # [2,1,2] has determinant 0: it blows down to a 0-curve, not to a point
    assert contract_chain([2, 1, 2]).weights == (0,)
    one = WeightedChain((1,), frozenset({0}))
    assert contract_chain(one) == one
    mid = WeightedChain((2, 3, 2, 3, 2), frozenset({2}))
    assert contract_chain(mid) == mid
    c = WeightedChain((3, 1, 3), frozenset({1}))
    assert contract_chain(c) == c


def test_contract_stuck_vertex_is_not_a_chain():
    c = WeightedChain((1, 2), frozenset(), ((0, "B1"), (0, "B2")))
    with pytest.raises(NotAChainError):
        contract_chain(c)


def test_contraction_counts_blowdowns_on_branches():
    # blowing up the node of B1 + B2 twice, then blowing back down
    c = WeightedChain((2, 1), frozenset(), ((0, "B1"), (1, "B2")))
    res = contract_chain_tracked(c)
    assert res.chain.weights == ()
    assert res.blowdowns == {"B1": 1, "B2": 2}
    assert res.branches_meet


def _all_outcomes(chain):
    outcomes = set()

    def run(script):
        seen = []

        def pick(cands):
            k = len(seen)
            seen.append(len(cands))
            return cands[script[k]] if k < len(script) else cands[0]

        try:
            res = contract_chain_tracked(chain, pick)
            outcomes.add((res.chain.weights, res.chain.marks, res.steps))
        except NotAChainError:
            outcomes.add("stuck")
        for k in range(len(script), len(seen)):
            prefix = script + [0] * (k - len(script))
            for alt in range(1, seen[k]):
                run(prefix + [alt])

    run([])
    return outcomes


def _negative_definite(w):
    return all(x > 0 for x in chain_sequence(w)[1:])


@pytest.mark.parametrize("length", range(1, 7))
def test_contraction_is_confluent(length):
    for w in itertools.product(range(1, 4), repeat=length):
        if not _negative_definite(w):
            continue
        for marks in ([], [0], [length // 2]):
            out = _all_outcomes(WeightedChain(w, frozenset(marks)))
            assert len(out) == 1, (w, marks, out)


# covers and the supplement

def test_supplement_examples():
    for n in range(2, 10):
        s = supplement_delta(n, 1)
        assert (s.delta, s.residual) == (0, HJType(n, n - 1))
        s = supplement_delta(n, n)
        assert s.delta == n - 1 and s.residual.is_smooth
    s = supplement_delta(6, 2)
    assert (s.delta, s.residual.as_pair()) == (1, [3, 2])


@pytest.mark.parametrize("n", range(1, 25))
def test_supplement_for_every_divisor(n):
    for m in range(1, n + 1):
        if n % m == 0:
            s = supplement_delta(n, m)
            assert s.delta == m - 1
            assert s.residual == HJType(n // m, n // m - 1)


def test_supplement_needs_divisor():
    with pytest.raises(MalformedInputError):
        supplement_delta(6, 4)


@pytest.mark.parametrize("m0", range(2, 14))
def test_quotient_cover_blows_down_to_smooth_point(m0):
    # the plane is the degree-m0 cover of A_{m0,q}: the pulled-back chain contracts away
    for q in range(1, m0):
        if gcd(m0, q) == 1:
            cov = cover_chain(hj_expansion(m0, q), 0, 1, m0)
            assert cov.components == 1
            assert contract_chain_tracked(cov.chain()).chain.weights == ()


def test_trivial_cover_is_the_chain():
    cov = cover_chain([3, 2, 4], 0, 1, 1)
    assert cov.weights == (3, 2, 4)
    assert [v.source for v in cov.vertices] == [0, 1, 2]
