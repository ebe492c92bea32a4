import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from interpforce.core import BUILTINS, RejectedInput
from interpforce.forcing import (FORCES, FORCES_NEGATION, UNDECIDED, Bounds, Condition, DefinableRelation,
                                 GenericBudget, build_generic, decide, forces, restrict_check, truth_lemma_check)
from interpforce.logic import (CompAtom, CountAnd, CountOr, FinOr, IndexedFamily, ListFamily, RelAtom, ValAtom,
                               classify, negat)

pureset, pairs = BUILTINS["pureset"](), BUILTINS["pairs"]()
small = Bounds(pool=5, length=3, depth=4)


def kind(p, f, base=pureset, bounds=small):
    return forces(Condition.parse(p), f, bounds, base).kind


@pytest.mark.parametrize("cond,atom,expected", [
    ("(5,3);(3)", CompAtom(1, 2, 0, 1), FORCES),
    ("(5,3);(4)", CompAtom(1, 2, 0, 0, False), FORCES),
    ("();(7)", CompAtom(1, 2, 0, 0), UNDECIDED),
    ("(5,3);(5)", CompAtom(1, 2, 0, 1, False), FORCES),
])
def test_atomic_forcing_examples(cond, atom, expected):
    assert kind(cond, atom, bounds=Bounds(pool=8, length=3, depth=4)) == expected


def test_decide_fills_next_coordinate_for_any_value():
    f = CountOr(IndexedFamily(lambda n: ValAtom(1, 1, n)))
    q, v = decide(Condition.parse("(0)"), f, small, pureset)
    assert v.kind == FORCES and q == Condition.parse("(0,1)")


def test_decide_keeps_condition_already_forcing():
    p = Condition.parse("(2,4)")
    assert decide(p, ValAtom(1, 1, 4), small, pureset) == (p, forces(p, ValAtom(1, 1, 4), small, pureset))


def test_decide_negation_from_defined_other_value():
    p = Condition.parse("(1)")
    q, v = decide(p, ValAtom(1, 0, 0), small, pureset)
    assert q == p and v.kind == FORCES_NEGATION


def test_restriction_examples():
    p = Condition.parse("(5,3);(3)")
    b = Bounds(pool=8, length=3, depth=4)
    assert kind("(5,3);(3)", ValAtom(1, 0, 5), bounds=b) == FORCES
    assert restrict_check(p, ValAtom(1, 0, 5), 2, b, pureset)
    with pytest.raises(RejectedInput):
        restrict_check(p, CompAtom(1, 2, 0, 1), 2, b, pureset)


conditions = st.lists(st.lists(st.integers(0, 4), max_size=2, unique=True).map(tuple),
                      min_size=2, max_size=2).map(lambda ps: Condition(tuple(ps)))
finitary = st.one_of(
    st.builds(CompAtom, st.integers(1, 2), st.integers(1, 2), st.integers(0, 2), st.integers(0, 2), st.booleans()),
    st.builds(ValAtom, st.integers(1, 2), st.integers(0, 2), st.integers(0, 4), st.booleans()))
countable = st.builds(lambda xs, flip, disj: (CountOr if disj else CountAnd)(ListFamily(xs), flip),
                      st.lists(finitary, min_size=1, max_size=3), st.booleans(), st.booleans())


def extensions(p, bounds):
    per = []
    for c in p.parts:
        opts = [c]
        for k in range(1, bounds.length - len(c) + 1):
            opts += [c + e for e in itertools.permutations([x for x in range(bounds.pool) if x not in c], k)]
        per.append(opts)
    return [Condition(tuple(q)) for q in itertools.product(*per)]


@given(conditions, st.one_of(finitary, countable))
def test_forcing_is_consistent_and_monotone(p, f):
    b = Bounds(pool=5, length=3, depth=3)
    v = forces(p, f, b, pureset)
    assert not (v.kind == FORCES and forces(p, negat(f), b, pureset).kind == FORCES)
    if v.decided:
        for q in extensions(p, b)[:40]:
            assert forces(q, f, b, pureset).kind == v.kind


@given(conditions, st.one_of(finitary, countable))
def test_decide_returns_a_deciding_extension(p, f):
    b = Bounds(pool=5, length=3, depth=3)
    q, v = decide(p, f, b, pureset)
    if v.decided:
        assert q.extends(p) and forces(q, f, b, pureset).kind == v.kind


def test_generic_is_deterministic_and_meets_budget():
    fs = [CountOr(IndexedFamily(lambda n: ValAtom(1, 0, n)))]
    runs = [build_generic(1, GenericBudget(fs, pool=5, length=5, seed=4), pureset) for _ in range(2)]
    assert runs[0].condition == runs[1].condition and not runs[0].deficiencies
    assert runs[0].gs[0].get(0) is not None


def test_truth_lemma_on_pairs_relation():
    f = FinOr((RelAtom(1, "Edge", (0, 1)), RelAtom(1, "Edge", (0, 1), False)))
    gen = build_generic(1, GenericBudget([f], pool=6, length=6, seed=1), pairs)
    t, pos, neg = truth_lemma_check(f, gen, pairs, Bounds(pool=6, length=3, depth=3))
    assert t is True and pos and not neg


def brute_force_forces(p, f, base, bounds):
    """Independent reading for atoms and finite disjunctions of atoms."""
    if isinstance(f, FinOr):
        return any(brute_force_forces(p, x, base, bounds) for x in f.items)
    if isinstance(f, RelAtom):
        c = p.parts[f.i - 1]
        if all(a < len(c) for a in f.args):
            return base.holds(f.symbol, [c[a] for a in f.args]) == f.pos
    return False


@given(st.lists(st.integers(0, 5), max_size=3, unique=True).map(tuple),
       st.tuples(st.integers(0, 2), st.integers(0, 2)), st.booleans())
def test_definable_relation_matches_forcing(coord, args, pos):
    f = RelAtom(1, "Edge", args, pos)
    b = Bounds(pool=6, length=3, depth=3)
    p = Condition((coord,))
    rel = DefinableRelation(f, 1, b, pairs)
    assert rel.evaluate(p) == (forces(p, f, b, pairs).kind == FORCES) == brute_force_forces(p, f, pairs, b)


def test_definable_relation_tags_disjunction():
    f = CountOr(ListFamily([RelAtom(1, "Edge", (0, 1)), RelAtom(1, "Edge", (1, 0))]))
    rel = DefinableRelation(f, 1, small, pairs)
    assert (rel.tag.rank, rel.tag.side) == (1, "Sigma") == (classify(f).rank, "Sigma")


def test_definability_rejects_value_atoms():
    with pytest.raises(RejectedInput):
        DefinableRelation(ValAtom(1, 0, 0), 1, small, pureset)


def test_condition_parsing_rejects_repeats():
    with pytest.raises(RejectedInput):
        Condition.parse("(1,1)")
