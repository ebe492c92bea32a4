import pytest

from interpforce.core import BUILTINS
from interpforce.dsl import DSLError, FormulaContext, load_registry, parse_formula, parse_program
from interpforce.forcing import FORCES, Bounds, Condition, forces
from interpforce.interp import interpret
from interpforce.logic import CompAtom, CountOr, FinAnd, RelAtom, ValAtom, holds, negat

PROGRAM = """
rel Edge 2   # undirected matching
structure G table { Edge(0,1) Edge(1,0) Edge(2,3) Edge(3,2) }
structure P builtin pairs
formula evens = (or* k (val 1 0 (* 2 k) =))
interp Cl on P { dom[1] = (true); sim = (or (= x0 y0) (Edge x0 y0)); }
interp E2 on P {
  dom[2] = (Edge x0 x1);
  sim = (or (and (= x0 y0) (= x1 y1)) (and (= x0 y1) (= x1 y0)));
  rel Edge = (exists e (and (Edge x0 e) (= e y0)));
}
"""


def test_program_declares_everything():
    reg = parse_program(PROGRAM)
    assert set(reg.structures) >= {"G", "P"} and set(reg.interpretations) == {"Cl", "E2"}
    G = reg.structures["G"]
    assert G.holds("Edge", (2, 3)) and not G.holds("Edge", (1, 2))


def test_affine_disjunction_is_located():
    f = parse_program(PROGRAM).formulas["evens"]
    assert holds(f, [(7,)]) is False and holds(negat(f), [(7,)]) is True
    assert holds(f, [(4,)]) is True


def test_non_affine_body_stays_unlocated():
    f = parse_formula("(or* k (val 1 0 (* k k) =))")
    assert holds(f, [(7,)], budget=3) is None


def test_atoms_and_connectives():
    ctx = FormulaContext(signature=BUILTINS["pairs"]().signature)
    assert parse_formula("(comp 1 2 0 1 =)") == CompAtom(1, 2, 0, 1)
    assert parse_formula("(val 1 2 5 !=)") == ValAtom(1, 2, 5, False)
    assert parse_formula("(and (rel 1 Edge 0 1) (true))", ctx) == FinAnd((RelAtom(1, "Edge", (0, 1)), FinAnd(())))


def test_formula_from_program_is_forced():
    f = parse_program(PROGRAM).formulas["evens"]
    assert forces(Condition.parse("(4)"), f, Bounds(), BUILTINS["pureset"]()).kind == FORCES


def test_declared_interpretations_evaluate():
    reg = parse_program(PROGRAM)
    assert interpret(reg.interpretations["Cl"], reg.structures["P"], 1, 8).size == 4
    frag = interpret(reg.interpretations["E2"], reg.structures["P"], 2, 6)
    assert frag.size == 3 and frag.report.gate


def test_functor_statement_form():
    f = parse_formula("(stmt identity morphism-value 1 1)", FormulaContext(structure=BUILTINS["pureset"]()))
    assert isinstance(f, CountOr) and f.source.located


@pytest.mark.parametrize("text,fragment", [
    ("rel Edge 2\nstructure G table { Edge(0,1,2) }", "line 2"),
    ("interp X { dom[1] = (Foo x0); sim = (true); }", "unknown relation symbol 'Foo'"),
    ("formula f = (or* k (val 1 0 k =)", "unclosed parenthesis"),
    ("formula g = (val 1 0 q =)", "column 22: unbound name 'q'"),
    ("structure H builtin nope", "nope"),
    ("frob", "line 1, column 1"),
])
def test_errors_carry_positions(text, fragment):
    with pytest.raises(DSLError) as info:
        parse_program(text)
    assert fragment in str(info.value)


def test_registry_from_file(tmp_path):
    path = tmp_path / "decl.txt"
    path.write_text(PROGRAM)
    assert "Cl" in load_registry(str(path)).interpretations
