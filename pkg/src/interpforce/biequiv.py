"""Bi-interpretations and adjoint equivalences between categories of copies, in both directions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .core import RejectedInput, Structure, matched_pairs, pair_classes
from .extract import IN, UNDECIDED, BudgetInsufficient, Extraction
from .forcing import Bounds
from .functors import (ConstantFunctor, FunctorOperator, Morphism, NaturalTransformation, check_adjoint_equivalence,
                       copy_iso, identity_transformation, invert_by_search, sample_copies)
from .interp import (InducedFunctor, Interpretation, identity_interpretation, pairclasses_in_pairs,
                     pairs_in_pairclasses, tau)
from .report import Report


class PreconditionFailed(RejectedInput):
    """The inputs do not pass the checks an operation requires; the report says which."""

    def __init__(self, message: str, report: Report):
        super().__init__(message)
        self.report = report


@dataclass(eq=False)
class DefinableIsomorphism:
    """A map evaluated inside each copy, given by its graph."""

    name: str
    fn: Callable

    def __call__(self, X, element):
        return self.fn(X, element)

    def graph(self, X, element, value) -> bool:
        return self.fn(X, element) == value

    def check(self, X, elements: Sequence, report: Report, instance) -> bool:
        images = [self.fn(X, e) for e in elements]
        ok = len(set(images)) == len(images)
        report.add("definable-iso-injective", instance, ok, None if ok else images)
        return ok


@dataclass(eq=False)
class BiInterpretation:
    """I interprets A in B, J interprets B in A; phi and psi identify the composites with B and A."""

    name: str
    I: Interpretation
    J: Interpretation
    B: Structure
    A: Structure
    phi: DefinableIsomorphism
    psi: DefinableIsomorphism
    g_maps: dict = field(default_factory=dict)


_INDUCED: dict = {}


def _induced(I: Interpretation) -> InducedFunctor:
    """One induced functor per interpretation, so copies and their enumerations are shared."""
    got = _INDUCED.get(id(I))
    if got is None or got[0] is not I:
        got = (I, InducedFunctor(I))
        _INDUCED[id(I)] = got
    return got[1]


def _compose_b(bi: BiInterpretation, X, n: int) -> tuple:
    FX = _induced(bi.I).structure(X)
    return tuple(tau(bi.I, X).rep(m) for m in tau(bi.J, FX).rep(n))


def _compose_a(bi: BiInterpretation, Y, n: int) -> tuple:
    GY = _induced(bi.J).structure(Y)
    return tuple(tau(bi.J, Y).rep(m) for m in tau(bi.I, GY).rep(n))


# ---------------------------------------------------------------- registry

def identity_biinterpretation(B: Structure) -> BiInterpretation:
    I = identity_interpretation(B)
    first = DefinableIsomorphism("first-entry", lambda X, e: e[0][0])
    return BiInterpretation("identity", I, I, B, B, first, first)


def pairs_biinterpretation() -> BiInterpretation:
    """The matched-pairs graph and its two-sorted pair-class structure, interpreted in each other."""
    I, J = pairclasses_in_pairs(), pairs_in_pairclasses()

    def phi(X, e):
        (b,), = e
        return b

    def psi(Y, e):
        if len(e) == 1:
            (x,), = e
            return x
        (x,), _ = e
        for p in itertools.count():
            if Y.rel("Cls", (p,)) and Y.rel("In", (x, p)):
                return p

    return BiInterpretation("pairs", I, J, matched_pairs(), pair_classes(),
                            DefinableIsomorphism("member", phi), DefinableIsomorphism("owner-class", psi))


BIINTERPRETATIONS = {"identity": lambda B=None: identity_biinterpretation(B or matched_pairs()),
                     "pairs": lambda B=None: pairs_biinterpretation()}


def biinterpretation_by_name(name: str, B: Optional[Structure] = None) -> BiInterpretation:
    if name not in BIINTERPRETATIONS:
        raise RejectedInput(f"unknown bi-interpretation {name!r}")
    return BIINTERPRETATIONS[name](B)


def corrupt(bi: BiInterpretation, a: int = 0, b: int = 1) -> BiInterpretation:
    """Negative control: phi composed with the transposition of a and b in every copy."""
    swap = {a: b, b: a}
    bad = DefinableIsomorphism(f"{bi.phi.name}*", lambda X, e: swap.get(bi.phi(X, e), bi.phi(X, e)))
    return BiInterpretation(f"{bi.name}-corrupted", bi.I, bi.J, bi.B, bi.A, bad, bi.psi)


# ---------------------------------------------------------------- invariant checks

def check_biinterpretation(bi: BiInterpretation, bound: int = 8, report: Optional[Report] = None) -> Report:
    """Composites land in the domain, phi and psi are injective on the fragment, and agree with witnesses."""
    report = report or Report("biequiv")
    for side, X, compose, fn, outer, inner in (
            ("B", bi.B, _compose_b, bi.phi, bi.J, bi.I),
            ("A", bi.A, _compose_a, bi.psi, bi.I, bi.J)):
        elems = [compose(bi, X, n) for n in range(bound)]
        inner_ok = all(inner.dom(X, x) for e in elems for x in e)
        report.add("composite-domain", {"bi": bi.name, "side": side}, inner_ok)
        fn.check(X, elems, report, {"bi": bi.name, "side": side})
        if inner.witness is not None and outer.witness is not None:
            wrong = [e for e in elems if fn(X, e) != outer.witness(tuple(inner.witness(x) for x in e))]
            report.add("composite-witness", {"bi": bi.name, "side": side}, not wrong, wrong[:2] or None)
    return report


# ---------------------------------------------------------------- bi-interpretation to adjoint equivalence

@dataclass
class AdjointPair:
    F: FunctorOperator
    G: FunctorOperator
    eta: NaturalTransformation
    eps: NaturalTransformation
    B: Structure
    report: Report

    @property
    def ok(self) -> bool:
        return self.report.gate


def sample_isos(S: Structure, n: int, seed: int, support: int = 8) -> list:
    cs = sample_copies(S, 2 * n, seed, support)
    return [copy_iso(cs[2 * k], cs[2 * k + 1]) for k in range(n)]


def adjoint_from_biinterp(bi: BiInterpretation, bounds: Bounds = Bounds(), samples: int = 4, seed: int = 0,
                          bound: Optional[int] = None, negative: bool = False,
                          report: Optional[Report] = None) -> AdjointPair:
    """F_I, F_J and the composite transformations; then both triangle identities and naturality."""
    report = report or Report("biequiv", bounds=bounds.as_dict())
    bound = bound if bound is not None else bounds.pool
    pre = check_biinterpretation(bi, bound, Report("biequiv", bounds=bounds.as_dict()))
    for r in pre.records:
        r.negative_control = negative
    report.extend(pre)
    F, G = _induced(bi.I), _induced(bi.J)

    def eta_back(X):
        return lambda n: bi.phi(X, _compose_b(bi, X, n))

    def eps_back(Y):
        return lambda n: bi.psi(Y, _compose_a(bi, Y, n))

    def inverse_of(back):
        def comp(X):
            fwd = back(X)
            return lambda y: invert_by_search(fwd, y)
        return comp

    # the composites map GF -> id; the unit and counit are their inverses
    eta = NaturalTransformation(f"eta[{bi.name}]", inverse_of(eta_back), eta_back)
    eps = NaturalTransformation(f"eps[{bi.name}]", inverse_of(eps_back), eps_back)
    b_isos = sample_isos(bi.B, samples, seed)
    a_isos = sample_isos(bi.A, samples, seed + 1)
    check_adjoint_equivalence(F, G, eta, eps, b_isos, a_isos, bound, report, negative)
    return AdjointPair(F, G, eta, eps, bi.B, report)


# ---------------------------------------------------------------- adjoint equivalence to bi-interpretation

def biinterp_from_adjoint(F: FunctorOperator, G: FunctorOperator, eta: NaturalTransformation,
                          eps: NaturalTransformation, B: Structure, bounds: Bounds = Bounds(),
                          samples: int = 4, seed: int = 0, bound: int = 6,
                          reference: Optional[BiInterpretation] = None,
                          report: Optional[Report] = None, negative: bool = False):
    """Extract I from F and J from G, with g-maps frak^B and frak^{F(B)} composed with eta_B.

    Raises PreconditionFailed when the inputs are not an adjoint equivalence on the samples.
    """
    report = report or Report("biequiv", bounds=bounds.as_dict())
    A = F.structure(B)
    b_isos = sample_isos(B, samples, seed)
    a_isos = [F.morphism(h) for h in b_isos]
    pre = check_adjoint_equivalence(F, G, eta, eps, b_isos, sample_isos(A, samples, seed + 1), bound,
                                    Report("biequiv", bounds=bounds.as_dict()))
    if not pre.gate:
        report.add("adjoint-precondition", {"F": F.name, "G": G.name}, False,
                   {"failures": len(pre.failures())}, negative)
        raise PreconditionFailed(f"{F.name}, {G.name} is not an adjoint equivalence on the samples", report)
    report.add("adjoint-precondition", {"F": F.name, "G": G.name}, True, None, negative)
    exF, exG = Extraction(F, bounds), Extraction(G, bounds)
    I, J = exF.interpretation(), exG.interpretation()

    # invariance of the composite: both frak squares plus naturality of eta
    for k, h in enumerate(b_isos):
        _frak_square(report, exF, F, h, bound, {"functor": F.name, "sample": k}, negative)
    for k, h in enumerate(a_isos):
        _frak_square(report, exG, G, h, bound, {"functor": G.name, "sample": k}, negative)
    for k, h in enumerate(b_isos):
        ex, ey, GFh = eta.at(h.src), eta.at(h.tgt), G.morphism(F.morphism(h))
        bad = [i for i in range(bound) if GFh(ex(i)) != ey(h(i))]
        report.add("composite-invariant", {"sample": k}, not bad, bad[:3] or None, negative)

    def composite_b(X, b):
        d, j = exG.frak_copy(F.structure(X), eta.at(X)(b))
        return (tuple(exF.frak_copy(X, m) for m in d), j)

    def composite_a(Y, a):
        c, i = exF.frak_copy(G.structure(Y), eps.at(Y)(a))
        return (tuple(exG.frak_copy(Y, m) for m in c), i)

    def phi(X, e):
        d, j = e
        FX = F.structure(X)
        idx = tuple(_index_by_frak(exF, X, x) for x in d)
        m = _index_by_frak(exG, FX, (idx, j))
        return eta.inverse().at(X)(m)

    def psi(Y, e):
        c, i = e
        GY = G.structure(Y)
        idx = tuple(_index_by_frak(exG, Y, x) for x in c)
        m = _index_by_frak(exF, GY, (idx, i))
        return eps.inverse().at(Y)(m)

    bi = BiInterpretation(f"extracted[{F.name},{G.name}]", I, J, B, A, DefinableIsomorphism("phi", phi),
                          DefinableIsomorphism("psi", psi), {"B->A": exF.frak_copy, "A->B": composite_b})
    for side, X, comp, fn in (("B", B, composite_b, phi), ("A", A, composite_a, psi)):
        bad = []
        for b in range(bound):
            try:
                back = fn(X, comp(X, b))
            except BudgetInsufficient as exc:
                bad.append({"element": b, "budget": str(exc)})
                continue
            if back != b:
                bad.append({"element": b, "image": back})
        report.add("composite-inverse", {"side": side}, not bad, bad[:3] or None, negative)
    if reference is not None:
        _renaming(report, exF, reference.I, B, bound, "I", negative)
        _renaming(report, exG, reference.J, A, bound, "J", negative)
    return bi, report


def _index_by_frak(ex: Extraction, X, x, cap: int = 256) -> int:
    for k in range(cap):
        if ex.sim(X, ex.frak_copy(X, k), x) == IN:
            return k
    raise BudgetInsufficient(f"no index below {cap} matches {x!r}")


def _frak_square(report, ex: Extraction, F, h: Morphism, bound, instance, negative):
    Fh = F.morphism(h)
    bad = None
    for i in range(bound):
        moved = (tuple(h(a) for a in ex.frak_copy(h.src, i)[0]), ex.frak_copy(h.src, i)[1])
        if ex.sim(h.tgt, ex.frak_copy(h.tgt, Fh(i)), moved) != IN:
            bad = {"index": i, "moved": moved}
            break
    report.add("frak-commutes", instance, bad is None, bad, negative)


def _renaming(report: Report, ex: Extraction, ref: Interpretation, X: Structure, bound: int, label: str,
              negative: bool):
    """Class i of the extraction (via frak) corresponds to class i of the reference (via tau)."""
    xs = [ex.frak_copy(X, i) for i in range(bound)]
    ys = [tau(ref, X).rep(i) for i in range(bound)]
    distinct = all((ex.sim(X, xs[a], xs[b]) == IN) == (a == b) for a in range(bound) for b in range(bound))
    report.add("renaming-bijective", {"interp": label}, distinct)
    wrong, undecided = None, []
    for sym, k in ref.target_signature.items():
        for t in itertools.product(range(bound), repeat=k):
            verdict = ex.relation(X, sym, [xs[a] for a in t])[0]
            if verdict == UNDECIDED:
                undecided.append((sym, t))
                continue
            rhs = bool(ref.rels[sym](X, tuple(ys[a] for a in t)))
            if (verdict == IN) != rhs and wrong is None:
                wrong = {"symbol": sym, "classes": t, "extracted": verdict, "reference": rhs}
    ok = False if wrong else (None if undecided else True)
    report.add("renaming-relations", {"interp": label}, ok, wrong or ({"undecided": undecided[:3]} if undecided
                                                                      else None), negative)


def constant_pair(B: Structure, A: Structure):
    """Negative control: constant functors both ways with identity transformations."""
    F = ConstantFunctor(A, B.signature)
    G = ConstantFunctor(B, A.signature)
    return F, G, identity_transformation(), identity_transformation()
