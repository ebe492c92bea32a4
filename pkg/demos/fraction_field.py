"""The rationals interpreted in the integers, and the same structure recovered from a functor."""
import itertools
from fractions import Fraction

from interpforce import (BUILTINS, Bounds, Extraction, FracFieldFunctor, Report, check_functor_laws, check_witness,
                         extract_quotient, induced_functor, interpret, interpretation_by_name)
from interpforce.core import z_of
from interpforce.functors import composable_samples

Z = BUILTINS["zring"]()
I = interpretation_by_name("fraction")
frag = interpret(I, Z, length=2, pool=4)
print("classes of numerator/denominator pairs:",
      [str(Fraction(z_of(c[0][0]), z_of(c[0][1]))) for c in frag.classes])
print(check_witness(I, frag, I.witness, I.target, frag.report).summary())
print(check_functor_laws(induced_functor(I), composable_samples(Z, 10)).summary())

# Extraction from the fraction-field functor along a near-identity generic.
g = list(range(200))
g[1], g[2] = g[2], g[1]
report = Report("extraction")
frak, rels, _ = extract_quotient(Extraction(FracFieldFunctor(), Bounds(pool=8, length=3, depth=4)), Z, g, 6, report)
print(report.summary())
values = []
for h in itertools.count():
    for a, b in itertools.product(range(h + 1), repeat=2):
        if max(a, b) == h and z_of(g[b]) != 0 and Fraction(z_of(g[a]), z_of(g[b])) not in values:
            values.append(Fraction(z_of(g[a]), z_of(g[b])))
    if len(values) >= 6:
        break
values = values[:6]
print("extracted classes read as rationals:", [str(v) for v in values])
print("sums found:", sorted(f"{values[i]}+{values[j]}={values[k]}" for i, j, k in rels["Add"])[:6])
