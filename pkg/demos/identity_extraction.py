"""Recovering an interpretation from the identity functor on the matched-pairs graph."""
import time

from interpforce import BUILTINS, Bounds, IdentityFunctor, extract_sim, frak_F, verify_extraction
from interpforce.functors import copy_iso, sample_copies

pairs = BUILTINS["pairs"]()
F = IdentityFunctor(pairs.signature, pairs.universe_hint)
bounds = Bounds(pool=6, length=3, depth=4)

# Elements of the extracted domain are (tuple, index); two are equivalent when they name the same point.
print("((4,5),1) ~ ((5,),0):", extract_sim(F, pairs, ((4, 5), 1), ((5,), 0), bounds))
print("((4,5),0) ~ ((5,),0):", extract_sim(F, pairs, ((4, 5), 0), ((5,), 0), bounds))

# The generic map sends index i to the least prefix of g that names it.
g = (3, 0, 5, 1, 4, 2)
print("generic map along", g, ":", [frak_F(g, i, F, bounds, base=pairs) for i in range(3)])

copies = sample_copies(pairs, 4, seed=1)
start = time.perf_counter()
result = verify_extraction(F, pairs, bounds, g, morphisms=[copy_iso(copies[0], copies[1])], index_bound=6,
                           compare_with=pairs)
print(result.report.summary(), f"in {time.perf_counter() - start:.1f} s")
print("isomorphism found by brute force:", result.isomorphism)
