"""Interpretations, their quotient fragments, the canonical enumeration of classes and F_I, G_I."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (RejectedInput, Signature, Structure, matched_pairs, pair_classes, pure_set, q_field,
                   q_index, z_of, z_ring)
from .functors import FunctorOperator, Morphism, oracle_key
from .logic import ComplexityTag
from .report import Report

HEIGHT_CAP = 4096


# ---------------------------------------------------------------- canonical order

def height(t: tuple) -> int:
    return 1 + max(t) if t else 0


def tuple_key(t: tuple) -> tuple:
    """Height first, then length, then lexicographic: extending the pool never reorders."""
    return (height(t), len(t), t)


def tuples_at_height(arities: Sequence[int], h: int) -> list:
    out = []
    for n in sorted(arities):
        if n == 0:
            if h == 0:
                out.append(())
            continue
        if h == 0:
            continue
        for t in itertools.product(range(h), repeat=n):
            if max(t) == h - 1:
                out.append(t)
    out.sort(key=tuple_key)
    return out


def entrywise(h: Callable[[int], int], t: tuple) -> tuple:
    return tuple(h(x) for x in t)


# ---------------------------------------------------------------- interpretations

@dataclass(eq=False)
class Interpretation:
    """Domain, equivalence and relations, each evaluated inside any copy of the source.

    Predicates receive an oracle exposing `rel`. `candidates(h)` lists the possible
    domain elements of height h in canonical order; `transport(h, x)` applies an
    isomorphism to a domain element.
    """

    name: str
    source_signature: Signature
    target_signature: Signature
    dom: Callable
    sim: Callable
    rels: dict
    arities: tuple = (1,)
    tag: ComplexityTag = ComplexityTag(0, "Delta")
    candidates: Optional[Callable[[int], list]] = None
    transport: Optional[Callable] = None
    target: Optional[Structure] = None
    witness: Optional[Callable[[tuple], int]] = None
    source: Optional[Structure] = None

    def __post_init__(self):
        if self.candidates is None:
            ar = tuple(self.arities)
            self.candidates = lambda h: tuples_at_height(ar, h)
        if self.transport is None:
            self.transport = entrywise
        for sym in self.rels:
            self.target_signature.arity(sym)


@dataclass(eq=False)
class InterpretationWitness:
    """The map from domain elements of the canonical source to elements of the target."""

    map: Callable[[tuple], int]

    def __call__(self, t):
        return self.map(t)


# ---------------------------------------------------------------- the canonical class enumeration

class TauBijection:
    """omega <-> classes of Dom/sim in one copy, by least member in canonical order."""

    def __init__(self, I: Interpretation, X, cap: int = HEIGHT_CAP):
        self.I, self.X, self.cap = I, X, cap
        self.reps: list = []
        self.members: list = []
        self.next_height = 0
        self._index: dict = {}

    def _grow(self):
        h = self.next_height
        if h > self.cap:
            raise RejectedInput(f"class enumeration exceeded height {self.cap}")
        reps, members, index = list(self.reps), [list(m) for m in self.members], dict(self._index)
        for t in self.I.candidates(h):
            if not self.I.dom(self.X, t):
                continue
            for k, r in enumerate(reps):
                if self.I.sim(self.X, t, r):
                    members[k].append(t)
                    index[t] = k
                    break
            else:
                index[t] = len(reps)
                reps.append(t)
                members.append([t])
        # commit only a fully scanned level, so an oracle failure leaves no partial state
        self.reps, self.members, self._index = reps, members, index
        self.next_height = h + 1

    def grow_to(self, h: int):
        while self.next_height <= h:
            self._grow()

    def rep(self, n: int):
        while len(self.reps) <= n:
            self._grow()
        return self.reps[n]

    def index_of(self, t) -> int:
        if t in self._index:
            return self._index[t]
        if not self.I.dom(self.X, t):
            raise RejectedInput(f"{t!r} is not in the domain")
        for k in itertools.count():
            if self.I.sim(self.X, t, self.rep(k)):
                self._index[t] = k
                return k


_TAUS: dict = {}


def tau(I: Interpretation, X) -> TauBijection:
    """The class enumeration of I in X, memoized per (interpretation, copy)."""
    key = oracle_key(X)
    if key is None:
        return TauBijection(I, X)
    full = (id(I), key)
    got = _TAUS.get(full)
    if got is None:
        got = (I, getattr(X, "s", X), TauBijection(I, X))
        _TAUS[full] = got
    return got[2]


# ---------------------------------------------------------------- quotient fragments

@dataclass
class QuotientFragment:
    elements: list
    classes: list
    relations: dict
    provisional: bool
    report: Report = field(default_factory=Report)

    @property
    def size(self) -> int:
        return len(self.classes)

    def as_structure_facts(self) -> set:
        return {(r, t) for r, ts in self.relations.items() for t in ts}


def interpret(I: Interpretation, X, length: int = 2, pool: int = 6, certified: Optional[bool] = None,
              closure_check: bool = True) -> QuotientFragment:
    """Enumerate the domain fragment, partition it by sim and evaluate relations on classes."""
    report = Report("interpret", bounds={"len": length, "pool": pool})
    elements = []
    for h in range(pool + 1):
        for t in I.candidates(h):
            if _size(t) <= length and I.dom(X, t):
                elements.append(t)
    n = len(elements)
    mat = [[I.sim(X, elements[a], elements[b]) for b in range(n)] for a in range(n)]
    refl = [elements[a] for a in range(n) if not mat[a][a]]
    report.add("reflexive", I.name, not refl, refl[:3] or None)
    asym = [(elements[a], elements[b]) for a in range(n) for b in range(n) if mat[a][b] != mat[b][a]]
    report.add("symmetric", I.name, not asym, asym[:3] or None)
    rows = [frozenset(b for b in range(n) if mat[a][b]) for a in range(n)]
    trans = [(elements[a], elements[b]) for a in range(n) for b in rows[a] if rows[a] != rows[b]]
    report.add("transitive", I.name, not trans, trans[:3] or None)
    classes, seen = [], set()
    for a in range(n):
        if a in seen:
            continue
        cls = sorted(rows[a] | {a})
        seen.update(cls)
        classes.append([elements[b] for b in cls])
    relations = {}
    for sym, pred in I.rels.items():
        k = I.target_signature.arity(sym)
        holds = set()
        bad = None
        for combo in itertools.product(range(len(classes)), repeat=k):
            args = tuple(classes[c][0] for c in combo)
            v = pred(X, args)
            if v:
                holds.add(combo)
            if closure_check and bad is None:
                alt = tuple(classes[c][-1] for c in combo)
                if bool(pred(X, alt)) != bool(v):
                    bad = {"reps": args, "alternates": alt}
        relations[sym] = holds
        if closure_check:
            report.add("sim-closed", {"interp": I.name, "symbol": sym}, bad is None, bad)
    hint = getattr(getattr(X, "s", X), "universe_hint", None)
    if certified is None:
        certified = hint is not None and pool >= hint
    return QuotientFragment(elements, classes, relations, not certified, report)


def _size(x) -> int:
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], tuple) and isinstance(x[1], int):
        return len(x[0])
    return len(x)


def check_witness(I: Interpretation, frag: QuotientFragment, w: Callable, A: Structure,
                  report: Optional[Report] = None) -> Report:
    """w is constant on classes, injective across classes, and preserves and reflects relations."""
    report = report or Report("interpret")
    bad = [c for c in frag.classes if len({w(t) for t in c}) != 1]
    report.add("witness-constant", I.name, not bad, bad[:2] or None)
    images = [w(c[0]) for c in frag.classes]
    report.add("witness-injective", I.name, len(set(images)) == len(images), images)
    for sym in I.rels:
        k = I.target_signature.arity(sym)
        wrong = None
        for combo in itertools.product(range(len(frag.classes)), repeat=k):
            lhs = combo in frag.relations[sym]
            rhs = A.holds(sym, tuple(images[c] for c in combo))
            if lhs != rhs:
                wrong = {"classes": combo, "interpreted": lhs, "target": rhs}
                break
        report.add("witness-relations", {"interp": I.name, "symbol": sym}, wrong is None, wrong)
    return report


# ---------------------------------------------------------------- F_I and G_I

class InducedFunctor(FunctorOperator):
    """F_I(X) is the quotient pulled back through tau; F_I(h) = tau_Y^-1 h~ tau_X."""

    def __init__(self, I: Interpretation, hint: Optional[int] = None):
        self.I = I
        self.name = f"F[{I.name}]"
        self.source_signature = I.source_signature
        self.target_signature = I.target_signature
        self.target_hint = hint if hint is not None else (I.target.universe_hint if I.target else None)

    def on_structure(self, src, symbol, args):
        t = tau(self.I, src)
        return bool(self.I.rels[symbol](src, tuple(t.rep(a) for a in args)))

    def on_morphism(self, src, iso, tgt, i):
        x = tau(self.I, src).rep(i)
        return tau(self.I, tgt).index_of(self.I.transport(iso, x))


def induced_functor(I: Interpretation) -> InducedFunctor:
    return InducedFunctor(I)


def induced_functor_apply(I: Interpretation, X, h: Optional[Morphism] = None):
    """The structure F_I(X), or the morphism F_I(h) when h is given."""
    F = InducedFunctor(I)
    return F.structure(X) if h is None else F.morphism(h)


def induced_homomorphism(I: Interpretation, w: Callable, f: Callable[[int], int], B,
                         cap: int = 64) -> Callable[[int], int]:
    """G_I(f) = w f~ w^-1, with w^-1 found by canonical search of the domain."""
    pre: dict = {}

    def preimage(a):
        if a in pre:
            return pre[a]
        for h in range(cap):
            for t in I.candidates(h):
                if I.dom(B, t):
                    pre.setdefault(w(t), t)
            if a in pre:
                return pre[a]
        raise RejectedInput(f"no domain element maps to {a} below height {cap}")

    return lambda a: w(I.transport(f, preimage(a)))


# ---------------------------------------------------------------- registry

def _search(pred, cap: int = 100_000) -> int:
    for z in range(cap):
        if pred(z):
            return z
    raise RejectedInput("search cap exceeded")


def identity_interpretation(B: Structure) -> Interpretation:
    rels = {sym: (lambda X, args, _s=sym: X.rel(_s, tuple(t[0] for t in args)))
            for sym, _ in B.signature.items()}
    return Interpretation("identity", B.signature, B.signature, lambda X, t: True,
                          lambda X, t, u: t == u, rels, (1,), target=B, witness=lambda t: t[0], source=B)


def pair_class_interpretation() -> Interpretation:
    """The pure set of pairs inside the matched-pairs graph."""
    return Interpretation("pairs-classes", Signature.of(Edge=2), Signature(), lambda X, t: True,
                          lambda X, t, u: t == u or X.rel("Edge", (t[0], u[0])), {}, (1,),
                          target=pure_set(), witness=lambda t: t[0] // 2, source=matched_pairs())


def _mul(X, x, y):
    return _search(lambda z: X.rel("Mul", (x, y, z)))


def _add(X, x, y):
    return _search(lambda z: X.rel("Add", (x, y, z)))


def fraction_interpretation() -> Interpretation:
    """The rational field inside the integer ring, on pairs with nonzero second entry."""

    def dom(X, t):
        return not X.rel("Add", (t[1], t[1], t[1]))

    def sim(X, t, u):
        (a, b), (c, d) = t, u
        return _mul(X, a, d) == _mul(X, c, b)

    def add(X, args):
        (a, b), (c, d), (e, f) = args
        return _mul(X, _add(X, _mul(X, a, d), _mul(X, c, b)), f) == _mul(X, e, _mul(X, b, d))

    def mul(X, args):
        (a, b), (c, d), (e, f) = args
        return _mul(X, _mul(X, a, c), f) == _mul(X, e, _mul(X, b, d))

    return Interpretation("fraction", Signature.of(Add=3, Mul=3), Signature.of(Add=3, Mul=3), dom, sim,
                          {"Add": add, "Mul": mul}, (2,), ComplexityTag(1, "Sigma"), target=q_field(),
                          witness=lambda t: q_index(Fraction(z_of(t[0]), z_of(t[1]))), source=z_ring())


def pairclasses_in_pairs() -> Interpretation:
    """Members as single elements, pairs as ordered edges."""

    def dom(X, t):
        return len(t) == 1 or (t[0] != t[1] and X.rel("Edge", t))

    def sim(X, t, u):
        return len(t) == len(u) and set(t) == set(u)

    def cls(X, args):
        return len(args[0]) == 2

    def inn(X, args):
        x, p = args
        return len(x) == 1 and len(p) == 2 and x[0] in p

    def witness(t):
        if len(t) == 1:
            return 3 * (t[0] // 2) + 1 + t[0] % 2
        return 3 * (t[0] // 2)

    return Interpretation("pairclasses-in-pairs", Signature.of(Edge=2), Signature.of(Cls=1, In=2), dom, sim,
                          {"Cls": cls, "In": inn}, (1, 2), target=pair_classes(), witness=witness,
                          source=matched_pairs())


def pairs_in_pairclasses() -> Interpretation:
    """Members form the graph; two members are adjacent when they lie in the same pair."""

    def dom(X, t):
        return not X.rel("Cls", t)

    def owner(X, x):
        return _search(lambda p: X.rel("In", (x, p)))

    def edge(X, args):
        (x,), (y,) = args
        return x != y and X.rel("In", (y, owner(X, x)))

    return Interpretation("pairs-in-pairclasses", Signature.of(Cls=1, In=2), Signature.of(Edge=2), dom,
                          lambda X, t, u: t == u, {"Edge": edge}, (1,), target=matched_pairs(),
                          witness=lambda t: 2 * (t[0] // 3) + (t[0] % 3 - 1), source=pair_classes())


INTERPRETATIONS = {
    "identity": None,
    "pairs-classes": pair_class_interpretation,
    "fraction": fraction_interpretation,
    "pairclasses-in-pairs": pairclasses_in_pairs,
    "pairs-in-pairclasses": pairs_in_pairclasses,
}


def interpretation_by_name(name: str, source: Optional[Structure] = None) -> Interpretation:
    if name == "identity":
        if source is None:
            raise RejectedInput("the identity interpretation needs a source structure")
        return identity_interpretation(source)
    if name not in INTERPRETATIONS:
        raise RejectedInput(f"unknown interpretation {name!r}")
    return INTERPRETATIONS[name]()
