import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symspec.errors import CapacityError, ValidationError
from symspec.permgroup import (
    Order,
    Permutation,
    adjacent_generators,
    closure,
    compose,
    enumerate_group,
    format_cycles,
    identity,
    inverse,
    parse_cycles,
    permutation_matrix,
)


def P(text, k=3):
    return parse_cycles(text, k)


def test_identity_fixes_every_label():
    e = identity(3)
    assert [e(i) for i in (1, 2, 3)] == [1, 2, 3]
    assert e.is_identity()


def test_compose_orders():
    a, b = P("(12)"), P("(13)")
    assert compose(a, b, Order.RIGHT_TO_LEFT) == P("(132)")
    assert compose(a, b, Order.LEFT_TO_RIGHT) == P("(123)")
    assert a * b == P("(132)")


@pytest.mark.parametrize("order", list(Order))
def test_identity_and_inverse_laws(order):
    for s in enumerate_group(4):
        assert compose(identity(4), s, order) == s
        assert compose(s, inverse(s), order) == identity(4)


def test_compose_rejects_degree_mismatch():
    with pytest.raises(ValidationError):
        compose(identity(3), identity(4))


def test_inverse_examples():
    assert inverse(P("(123)")) == P("(132)")
    assert inverse(P("(12)")) == P("(12)")
    for s in enumerate_group(4):
        assert np.array_equal(permutation_matrix(inverse(s)), permutation_matrix(s).T)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_enumeration_counts_and_order(k):
    perms = enumerate_group(k)
    assert len(perms) == math.factorial(k) == len(set(perms))
    assert [p.map for p in perms] == sorted(p.map for p in perms)


def test_enumeration_cap():
    with pytest.raises(CapacityError, match="8"):
        enumerate_group(9)
    assert len(enumerate_group(9, cap=9)) == math.factorial(9)


def test_adjacent_generators():
    assert adjacent_generators(3) == [P("(12)"), P("(23)")]
    assert len(adjacent_generators(4)) == 3
    for k in (3, 4, 5):
        assert closure(adjacent_generators(k)) == set(enumerate_group(k))


def test_permutation_matrix_entries():
    assert permutation_matrix(P("(12)")).tolist() == [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert np.array_equal(permutation_matrix(identity(4)), np.eye(4, dtype=int))
    for s in enumerate_group(4):
        m = permutation_matrix(s)
        assert (m.sum(0) == 1).all() and (m.sum(1) == 1).all()


def test_permutation_matrix_product_convention():
    # (i, sigma(i)) = 1 means the matrix of s*t is P(t) @ P(s)
    for s, t in itertools.product(enumerate_group(3), repeat=2):
        assert np.array_equal(permutation_matrix(s * t), permutation_matrix(t) @ permutation_matrix(s))


def test_permutation_matrix_injective():
    mats = {permutation_matrix(s).tobytes() for s in enumerate_group(5)}
    assert len(mats) == 120


def test_associativity_exhaustive_s4():
    G = enumerate_group(4)
    for a, b, c in itertools.product(G, repeat=3):
        assert (a * b) * c == a * (b * c)


@given(st.permutations(range(6)), st.permutations(range(6)), st.permutations(range(6)))
def test_associativity_s6_sampled(a, b, c):
    a, b, c = Permutation(tuple(a)), Permutation(tuple(b)), Permutation(tuple(c))
    for order in Order:
        assert compose(compose(a, b, order), c, order) == compose(a, compose(b, c, order), order)


def test_cycle_parsing_and_formatting():
    assert P("(1 2 3)") == P("(123)")
    assert parse_cycles("e", 4) == identity(4)
    assert parse_cycles("(12)(34)", 4).map == (1, 0, 3, 2)
    assert format_cycles(P("(132)")) == "(132)"
    assert format_cycles(identity(3)) == "e"
    s = parse_cycles("(1 10)", 10)
    assert s(1) == 10 and parse_cycles(format_cycles(s), 10) == s


@pytest.mark.parametrize("bad", ["(11)", "(14)", "(1a)", "(12"])
def test_cycle_parsing_errors(bad):
    with pytest.raises(ValidationError):
        parse_cycles(bad, 3)


def test_permutation_validation():
    with pytest.raises(ValidationError):
        Permutation((0, 0, 1))
    with pytest.raises(ValidationError):
        Permutation((0,))
