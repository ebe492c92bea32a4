import itertools

from hypothesis import given
from hypothesis import strategies as st

from interpforce.core import BUILTINS
from interpforce.forcing import FORCES, FORCES_NEGATION, Bounds, Condition, ForcingEngine, forces
from interpforce.functors import ConstantFunctor, IdentityFunctor
from interpforce.logic import CompAtom, holds
from interpforce.statements import composition_law, inverse_law, morphism_value, structure_fact

pureset, omega = BUILTINS["pureset"](), BUILTINS["omega"]()
identity = IdentityFunctor(pureset.signature, pureset.universe_hint)


@given(st.permutations(range(6)), st.permutations(range(6)), st.integers(0, 4), st.integers(0, 4))
def test_identity_morphism_value_matches_shared_value_on_total_data(p, q, i, j):
    gs = [tuple(p), tuple(q)]
    assert holds(morphism_value(identity, i, j), gs, base=pureset) == holds(CompAtom(2, 1, i, j), gs)


def test_identity_morphism_value_never_contradicts_atom():
    b = Bounds(4, 2, 3)
    mv, atom = morphism_value(identity, 1, 1), CompAtom(2, 1, 1, 1)
    decided = 0
    for a, c in itertools.product(range(3), repeat=2):
        for left in itertools.permutations(range(4), a):
            for right in itertools.permutations(range(4), c):
                p = Condition((left, right))
                x = forces(p, mv, b, pureset).kind
                if x in (FORCES, FORCES_NEGATION):
                    decided += 1
                    assert x == forces(p, atom, b, pureset).kind
    assert decided > 50


def test_constant_functor_statement_is_tautology_or_contradiction():
    C = ConstantFunctor(omega, pureset.signature)
    b = Bounds(3, 2, 3)
    empty = Condition.empty(2)
    assert forces(empty, morphism_value(C, 2, 2), b, pureset).kind == FORCES
    assert forces(empty, morphism_value(C, 2, 3), b, pureset).kind == FORCES_NEGATION


def test_constant_functor_structure_fact_reads_fixed_target():
    C = ConstantFunctor(omega, pureset.signature)
    b = Bounds(3, 2, 3)
    assert forces(Condition.empty(1), structure_fact(C, "Lt", (2, 5)), b, pureset).kind == FORCES


def test_identity_functor_laws_hold_on_every_maximal_extension():
    b = Bounds(3, 3, 3)
    for law, ell in ((inverse_law(identity), 2), (composition_law(identity), 3)):
        eng = ForcingEngine(pureset, b, ell, [law])
        value, exact = eng.forced(Condition.empty(ell).parts, law)
        # true on every probed conjunct; certification needs the whole countable conjunction
        assert value and not exact
