"""Absolutely indiscernible classes: pairs of the matched-pairs graph, and a failure on the order of omega."""
from interpforce import (BUILTINS, Bounds, check_absolute_indiscernibility, extract_indiscernibles,
                         interpretation_by_name, trivial_reduct)
from interpforce.interp import identity_interpretation

pairs, omega = BUILTINS["pairs"](), BUILTINS["omega"]()
w = extract_indiscernibles(interpretation_by_name("pairs-classes"), pairs, Bounds(pool=10), 5)
print("arity", w.arity, "classes", w.classes)
print(check_absolute_indiscernibility(pairs, w, 120, 6).summary())

w = extract_indiscernibles(trivial_reduct(identity_interpretation(omega)), omega, Bounds(pool=10), 5)
report = check_absolute_indiscernibility(omega, w, [(1, 0) + tuple(range(2, len(w.classes)))], 6, negative=True)
print("swapping the two least points of omega:", report.records[0].verdict, report.records[0].witness)
