from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup

from ade_belyi.errors import CapacityError, MalformedInputError
from ade_belyi.perms import Permutation, cycle_type, group_order, is_transitive, parse_cycles
from support import permutations


def c(text, n=None):
    return parse_cycles(text, n)


def test_cycle_type_examples():
    assert cycle_type(Permutation.identity(4)) == (1, 1, 1, 1)
    assert cycle_type(c("(1 2 3)")) == (3,)
    assert cycle_type(c("(1 2)", 3)) == (2, 1)


def test_transitivity_examples():
    assert is_transitive([c("(1 2 3)")])
    assert not is_transitive([c("(1 2)", 3)])
    assert is_transitive([c("(1 2)", 3), c("(2 3)")])
    assert not is_transitive([], 3)
    assert is_transitive([], 1)


def test_group_order_examples():
    assert group_order([c("(1 2 3)")]) == 3
    assert group_order([c("(1 2)", 3), c("(2 3)")]) == 6
    assert group_order([], 5) == 1


def test_group_order_capacity():
    with pytest.raises(CapacityError):
        group_order([c("(1 2)", 13)])
    assert group_order([c("(1 2)", 13)], bound=13) == 2


def test_product_applies_left_factor_first():
    a, b = c("(1 2)", 3), c("(2 3)", 3)
    assert (a * b)(1) == b(a(1)) == 3


def test_cycle_string_roundtrip():
    p = c("(1 4)(2 5 3)")
    assert p.to_cycle_string() == "(1 4)(2 5 3)"
    assert c(p.to_cycle_string()) == p
    assert Permutation.identity(3).to_cycle_string() == "()"


@pytest.mark.parametrize("bad", ["(1 2", "(1 2)(2 3)", "(0 1)", "(a b)", "1 2"])
def test_bad_cycle_text(bad):
    with pytest.raises(MalformedInputError):
        parse_cycles(bad)


def test_identity_needs_degree():
    with pytest.raises(MalformedInputError):
        parse_cycles("()")
    assert parse_cycles("id", 4) == Permutation.identity(4)


def test_mixed_degrees_rejected():
    with pytest.raises(MalformedInputError):
        is_transitive([c("(1 2)"), c("(1 2 3)")])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(permutations(n), permutations(n))))
def test_cycle_type_is_class_function(pg):
    p, g = pg
    assert cycle_type(g * p * g.inverse()) == cycle_type(p)
    assert sum(cycle_type(p)) == p.degree


def _sym(p: Permutation) -> SymPerm:
    return SymPerm([i - 1 for i in p.images])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(permutations(n), min_size=1, max_size=3)))
def test_group_order_matches_sympy(gens):
    n = gens[0].degree
    order = group_order(gens)
    assert order == PermutationGroup([_sym(g) for g in gens]).order()
    assert factorial(n) % order == 0
    if is_transitive(gens):
        assert order % n == 0
    orbit_sizes = {len(o) for o in PermutationGroup([_sym(g) for g in gens]).orbits()}
    assert is_transitive(gens) == (orbit_sizes == {n})
