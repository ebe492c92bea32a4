"""A bi-interpretation turned into an adjoint equivalence and back again."""
from interpforce import (Bounds, PreconditionFailed, adjoint_from_biinterp, biinterp_from_adjoint,
                         biinterpretation_by_name)
from interpforce.biequiv import constant_pair, corrupt

bounds = Bounds(pool=10, length=3, depth=4)
bi = biinterpretation_by_name("pairs")
pair = adjoint_from_biinterp(bi, bounds, samples=3, bound=6)
print("to an adjoint equivalence:", pair.report.summary())
_, back = biinterp_from_adjoint(pair.F, pair.G, pair.eta, pair.eps, bi.B, bounds, samples=2, bound=5, reference=bi)
print("and back:", back.summary())

bad = adjoint_from_biinterp(corrupt(bi), bounds, samples=2, bound=6, negative=True)
print("corrupted identification, failing checks:",
      sorted({r.check for r in bad.report.records if r.verdict == "fail"}))
F, G, eta, eps = constant_pair(bi.B, bi.A)
try:
    biinterp_from_adjoint(F, G, eta, eps, bi.B, bounds, negative=True)
except PreconditionFailed as exc:
    print("constant functors rejected:", exc)
