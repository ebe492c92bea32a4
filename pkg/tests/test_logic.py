import pytest
from hypothesis import given
from hypothesis import strategies as st

from interpforce.core import PartialInjection, RejectedInput
from interpforce.logic import (BOTTOM, TOP, CompAtom, CountAnd, CountOr, FinAnd, FinOr, IndexedFamily, ListFamily,
                               RelAtom, ValAtom, ValueProgression, classify, holds, is_restricted, negat)

evens = CountOr(ValueProgression(1, 0, 2, 0))


def atoms():
    return st.one_of(
        st.builds(CompAtom, st.integers(1, 2), st.integers(1, 2), st.integers(0, 3), st.integers(0, 3), st.booleans()),
        st.builds(ValAtom, st.integers(1, 2), st.integers(0, 3), st.integers(0, 5), st.booleans()))


formulas = st.recursive(atoms(), lambda inner: st.one_of(
    st.builds(FinAnd, st.lists(inner, max_size=3).map(tuple)),
    st.builds(FinOr, st.lists(inner, max_size=3).map(tuple)),
    st.builds(lambda xs, flip: CountOr(ListFamily(xs), flip), st.lists(inner, min_size=1, max_size=3),
              st.booleans()),
    st.builds(lambda xs, flip: CountAnd(ListFamily(xs), flip), st.lists(inner, min_size=1, max_size=3),
              st.booleans())), max_leaves=8)

tuples = st.lists(st.integers(0, 6), max_size=4, unique=True).map(tuple)


def test_negation_flips_leaf_polarity():
    assert negat(ValAtom(1, 2, 5)) == ValAtom(1, 2, 5, False)


def test_negation_is_de_morgan_on_finite_connectives():
    a, b = ValAtom(1, 0, 1), CompAtom(1, 2, 0, 0)
    assert negat(FinAnd((a, b))) == FinOr((negat(a), negat(b)))


def test_negation_involution_on_countable_disjunction():
    assert negat(negat(evens)) == evens


@given(formulas)
def test_negation_is_an_involution(f):
    assert negat(negat(f)) == f


@given(formulas, tuples, tuples)
def test_truth_of_negation_is_complementary(f, left, right):
    t, u = holds(f, [left, right]), holds(negat(f), [left, right])
    assert (t is None and u is None) or (t is not None and u == (not t))


def test_classification_ranks():
    a = ValAtom(1, 0, 0)
    assert classify(FinAnd((a, CompAtom(1, 1, 0, 0)))).rank == 0
    tag = classify(CountOr(ListFamily([a, negat(a)])))
    assert (tag.rank, tag.side) == (1, "Sigma")
    inner = CountOr(ListFamily([a]))
    tag = classify(CountAnd(IndexedFamily(lambda n: inner)))
    assert (tag.rank, tag.side) == (2, "Pi")


def test_value_atom_truth():
    assert holds(ValAtom(1, 0, 4), [PartialInjection.from_map({0: 4})]) is True


def test_composite_atom_truth_through_shared_value():
    gs = [PartialInjection.from_map({1: 3}), PartialInjection.from_map({0: 3})]
    assert holds(CompAtom(1, 2, 0, 1), gs) is True


def test_parity_disjunction_is_false_at_odd_value():
    g = [PartialInjection.from_map({0: 7})]
    assert holds(evens, g) is False
    assert holds(negat(evens), g) is True


def test_unlocated_parity_stays_unknown_at_finite_budget():
    unlocated = CountOr(IndexedFamily(lambda n: ValAtom(1, 0, 2 * n)))
    assert holds(unlocated, [PartialInjection.from_map({0: 7})], budget=4) is None


@given(st.integers(0, 40), st.integers(1, 5), st.integers(0, 5))
def test_progression_locates_exactly(value, step, offset):
    fam = ValueProgression(1, 0, step, offset)
    g = [PartialInjection.from_map({0: value})]
    expected = any(value == step * n + offset for n in range(value + 1))
    assert holds(CountOr(fam), g) is expected


def test_progression_rejects_zero_step():
    with pytest.raises(RejectedInput):
        ValueProgression(1, 0, 0, 0)


def test_constants_and_restriction():
    assert holds(TOP, [()]) is True and holds(BOTTOM, [()]) is False
    assert is_restricted(RelAtom(1, "Lt", (0, 1))) and not is_restricted(evens)
