import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from interpforce.core import (BUILTINS, BackAndForthFailure, FinitePerm, InsufficientOracle, PartialAutomorphism,
                              PartialInjection, RejectedInput, Signature, eval_atomic, extend_partial_automorphism,
                              pullback, q_index, q_of, table_structure, z_index, z_of)


def integer_at(n):
    """Independent oracle for the enumeration 0, 1, -1, 2, -2, ..."""
    return (n + 1) // 2 if n % 2 else -(n // 2)


def test_dense_order_is_irreflexive_at_zero():
    assert eval_atomic(BUILTINS["dense"](), "Lt", (0, 0)) is False


def test_pure_set_rejects_every_query():
    with pytest.raises(RejectedInput):
        eval_atomic(BUILTINS["pureset"](), "Lt", (0, 1))


def test_integer_ring_add_through_enumeration():
    assert eval_atomic(BUILTINS["zring"](), "Add", (1, 1, 3))


def test_arity_mismatch_rejected():
    with pytest.raises(RejectedInput):
        eval_atomic(BUILTINS["omega"](), "Lt", (0, 1, 2))


def test_integer_enumeration_matches_oracle():
    assert [z_of(n) for n in range(40)] == [integer_at(n) for n in range(40)]
    assert all(z_index(integer_at(n)) == n for n in range(40))


def test_ring_relations_match_integer_arithmetic():
    Z = BUILTINS["zring"]()
    for a, b, c in itertools.product(range(9), repeat=3):
        x, y, z = integer_at(a), integer_at(b), integer_at(c)
        assert Z.holds("Add", (a, b, c)) == (x + y == z)
        assert Z.holds("Mul", (a, b, c)) == (x * y == z)


def test_rational_enumeration_is_injective_and_inverse():
    qs = [q_of(n) for n in range(200)]
    assert len(set(qs)) == 200
    assert all(isinstance(q, Fraction) and q_index(q) == n for n, q in enumerate(qs))


def test_dense_order_agrees_with_rationals():
    D = BUILTINS["dense"]()
    for a, b in itertools.product(range(15), repeat=2):
        assert D.holds("Lt", (a, b)) == (q_of(a) < q_of(b))


def test_pullback_examples():
    om = BUILTINS["omega"]()
    assert pullback(om, PartialInjection.from_map({0: 3, 1: 1})).holds("Lt", (1, 0))
    P = BUILTINS["pairs"]()
    assert pullback(P, PartialInjection.from_map({0: 2, 1: 3})).holds("Edge", (0, 1))


def test_pullback_beyond_partial_map_is_insufficient_not_false():
    om = BUILTINS["omega"]()
    with pytest.raises(InsufficientOracle):
        pullback(om, PartialInjection.from_map({0: 3})).holds("Lt", (0, 1))


@given(st.permutations(range(8)), st.permutations(range(8)),
       st.tuples(st.integers(0, 7), st.integers(0, 7)))
def test_pullback_composes(p, q, pair):
    om = BUILTINS["omega"]()
    g, f = FinitePerm(tuple(enumerate(p))), FinitePerm(tuple(enumerate(q)))
    both = pullback(om, lambda a: g(f(a)))
    nested = pullback(pullback(om, g), f)
    assert both.holds("Lt", pair) == nested.holds("Lt", pair)


@given(st.tuples(st.integers(0, 30), st.integers(0, 30)))
def test_pullback_along_identity_is_identical(pair):
    P = BUILTINS["pairs"]()
    assert pullback(P, lambda a: a).holds("Edge", pair) == P.holds("Edge", pair)


def test_back_and_forth_dense_empty_map_extends():
    D = BUILTINS["dense"]()
    got = extend_partial_automorphism(D, PartialAutomorphism(D, PartialInjection()), {0, 1}, depth=3)
    assert set(got.map.domain()) == {0, 1} and got.is_valid()


def test_back_and_forth_omega_moving_minimum_fails():
    om = BUILTINS["omega"]()
    with pytest.raises(BackAndForthFailure):
        extend_partial_automorphism(om, PartialAutomorphism(om, PartialInjection.from_map({0: 1})), (), depth=2)


def test_back_and_forth_identity_unchanged():
    om = BUILTINS["omega"]()
    p = PartialAutomorphism(om, PartialInjection.identity(5))
    assert extend_partial_automorphism(om, p, (), depth=2).map == p.map


@given(st.permutations(range(6)), st.integers(1, 3))
def test_back_and_forth_output_preserves_relations(perm, depth):
    P = BUILTINS["pairs"]()
    # permuting whole pairs is always extendable
    m = {2 * k + e: 2 * perm[k] + e for k in range(3) for e in (0, 1)}
    got = extend_partial_automorphism(P, PartialAutomorphism(P, PartialInjection.from_map(m)), {7}, depth)
    assert got.is_valid() and 7 in got.map.domain()


def test_partial_injection_rejects_non_injective():
    with pytest.raises(RejectedInput):
        PartialInjection(((0, 1), (2, 1)))


def test_signature_rejects_duplicates_and_zero_arity():
    with pytest.raises(RejectedInput):
        Signature(("R", "R"), (1, 1))
    with pytest.raises(RejectedInput):
        Signature.of(R=0)


def test_table_structure():
    S = table_structure("t", Signature.of(E=2), [("E", (0, 1))])
    assert S.holds("E", (0, 1)) and not S.holds("E", (1, 0))
