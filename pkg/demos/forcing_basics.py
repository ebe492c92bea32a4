"""Finite conditions, forcing verdicts, decisions and a generic built from a budget of formulas."""
from interpforce import (BUILTINS, Bounds, CompAtom, Condition, CountOr, GenericBudget, IndexedFamily, ValAtom,
                         build_generic, decide, forces, holds, negat, truth_lemma_check)

pureset = BUILTINS["pureset"]()
bounds = Bounds(pool=8, length=3, depth=4)

# Two finite approximations g1 = (5,3), g2 = (3): g1(1) and g2(0) share the value 3.
p = Condition.parse("(5,3);(3)")
print("g1^-1 g2 (0) = 1 at", p, "->", forces(p, CompAtom(1, 2, 0, 1), bounds, pureset))
print("g1^-1 g2 (0) = 0 at ();(7) ->", forces(Condition.parse("();(7)"), CompAtom(1, 2, 0, 0), bounds, pureset))

# A countable disjunction: g1(1) takes some value. One more entry decides it.
defined = CountOr(IndexedFamily(lambda n: ValAtom(1, 1, n), label="g1(1) defined"))
q, verdict = decide(Condition.parse("(0)"), defined, bounds, pureset)
print("deciding 'g1(1) is defined' from (0):", q, verdict)

# A generic meeting every formula in a budget; truth along it matches forcing by a prefix.
budget = [defined, negat(ValAtom(1, 2, 4))]
gen = build_generic(1, GenericBudget(budget, pool=6, length=6, seed=3), pureset)
print("generic:", gen.condition, "unmet:", gen.deficiencies)
for f in budget:
    truth, pos, neg = truth_lemma_check(f, gen, pureset, Bounds(pool=6, length=4, depth=4))
    print(f"  truth {truth}, some prefix forces it {pos}, some prefix forces its negation {neg}")
print("holds on the generic:", holds(defined, gen.gs))
