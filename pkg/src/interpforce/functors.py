"""Functors between categories of copies as use-bounded oracle programs, and their laws."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .core import (BUILTINS, BackAndForthFailure, FinitePerm, InsufficientOracle, RejectedInput,
                   Signature, Structure, pullback)
from .report import Report
from .statements import DEFAULT_STEP_BOUND, OperatorDivergence

SEARCH_CAP = 100_000


# ---------------------------------------------------------------- morphisms and copies

@dataclass(eq=False)
class Morphism:
    """An isomorphism src -> tgt given pointwise; values are memoized."""

    src: Structure
    fn: Callable[[int], int]
    tgt: Structure
    inv: Optional[Callable[[int], int]] = None
    name: str = "h"
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, x: int) -> int:
        got = self._memo.get(x)
        if got is None:
            got = self.fn(x)
            self._memo[x] = got
        return got

    def inverse(self, cap: int = 4096) -> "Morphism":
        if self.inv is not None:
            return Morphism(self.tgt, self.inv, self.src, self.fn, f"{self.name}^-1")
        return Morphism(self.tgt, lambda y: invert_by_search(self, y, cap), self.src, self.fn, f"{self.name}^-1")

    def then(self, other: "Morphism") -> "Morphism":
        """other after self."""
        inv = None
        if self.inv is not None and other.inv is not None:
            inv = lambda y: self.inv(other.inv(y))  # noqa: E731
        return Morphism(self.src, lambda x: other(self(x)), other.tgt, inv, f"{other.name}.{self.name}")


def invert_by_search(fn: Callable[[int], int], y: int, cap: int = 4096) -> int:
    for x in range(cap):
        if fn(x) == y:
            return x
    raise InsufficientOracle(y)


def identity_morphism(s: Structure) -> Morphism:
    return Morphism(s, lambda x: x, s, lambda x: x, "id")


@dataclass(eq=False)
class Copy:
    """The copy of `base` pulled back along a finite-support permutation."""

    base: Structure
    perm: FinitePerm
    structure: Structure

    @property
    def name(self) -> str:
        return self.structure.name


def make_copy(base: Structure, perm: FinitePerm, name: Optional[str] = None) -> Copy:
    tag = name or f"{base.name}[{','.join(f'{a}>{b}' for a, b in perm.moves)}]"
    return Copy(base, perm, pullback(base, perm, tag))


def copy_iso(a: Copy, b: Copy) -> Morphism:
    """The isomorphism a -> b, x |-> b.perm^-1(a.perm(x))."""
    return Morphism(a.structure, lambda x: b.perm.inv(a.perm(x)), b.structure,
                    lambda y: a.perm.inv(b.perm(y)), f"{a.name}->{b.name}")


def random_perm(rng: random.Random, size: int) -> FinitePerm:
    pts = list(range(size))
    img = pts[:]
    rng.shuffle(img)
    return FinitePerm(tuple(zip(pts, img)))


def sample_copies(base: Structure, n: int, seed: int = 0, support: int = 8) -> list:
    rng = random.Random(seed)
    return [make_copy(base, random_perm(rng, support), f"{base.name}#{k}") for k in range(n)]


def composable_samples(base: Structure, n: int, seed: int = 0, support: int = 8) -> list:
    """n composable pairs (f: X -> Y, g: Y -> Z) between seeded random copies."""
    rng = random.Random(seed)
    out = []
    for k in range(n):
        x, y, z = (make_copy(base, random_perm(rng, support), f"{base.name}#{k}{t}") for t in "xyz")
        out.append((copy_iso(x, y), copy_iso(y, z)))
    return out


def automorphism(base: Structure, perm: FinitePerm, name: str = "alpha") -> Morphism:
    """A finite-support permutation assumed (or certified elsewhere) to be an automorphism."""
    return Morphism(base, perm, base, perm.inv, name)


# ---------------------------------------------------------------- use-bounded oracles

class _Budget:
    def __init__(self, bound: int):
        self.bound, self.steps, self.use = bound, 0, []

    def tick(self, q):
        self.steps += 1
        if self.steps > self.bound:
            raise OperatorDivergence(f"use bound {self.bound} exceeded at query {q!r}")
        self.use.append(q)


class _CountedRel:
    def __init__(self, s, budget: _Budget, tag: str):
        self.s, self.budget, self.tag = s, budget, tag
        self.cache_key = oracle_key(s)

    def rel(self, symbol, args):
        self.budget.tick((self.tag, symbol, tuple(args)))
        return self.s.rel(symbol, args)


class _CountedIso:
    def __init__(self, h, budget: _Budget):
        self.h, self.budget = h, budget

    def __call__(self, m):
        self.budget.tick(("iso", m))
        return self.h(m)


def oracle_key(o):
    """A stable identity for an oracle, used by operators to memoize their own searches."""
    if isinstance(o, Structure):
        return ("struct", id(o))
    return getattr(o, "cache_key", None)


# ---------------------------------------------------------------- functor operators

class FunctorOperator:
    """A functor Iso(B) -> Iso(A) given by two oracle programs.

    on_structure(src, symbol, args) answers atomic queries about F(src);
    on_morphism(src, iso, tgt, i) answers F(iso)(i). Oracles expose `rel`.
    """

    name = "functor"
    source_signature: Optional[Signature] = None
    target_signature: Signature = Signature()
    use_bound: int = DEFAULT_STEP_BOUND
    target_hint: Optional[int] = None

    def on_structure(self, src, symbol: str, args: tuple) -> bool:
        raise NotImplementedError

    def on_morphism(self, src, iso, tgt, i: int) -> int:
        raise NotImplementedError

    # evaluation with memoization of whole structures
    def structure(self, s: Structure) -> Structure:
        cache = self.__dict__.setdefault("_structures", {})
        got = cache.get(id(s))
        if got is not None and got[0] is s:
            return got[1]
        memo: dict = {}

        def diagram(r, t, _s=s):
            key = (r, t)
            if key not in memo:
                memo[key] = bool(self.on_structure(_Bounded(_s, self.use_bound), r, t))
            return memo[key]
        out = Structure(f"{self.name}({s.name})", self.target_signature, diagram, self.target_hint)
        cache[id(s)] = (s, out)
        return out

    def morphism(self, h: Morphism) -> Morphism:
        src, tgt = h.src, h.tgt

        def fn(i):
            return self.on_morphism(_Bounded(src, self.use_bound), h, _Bounded(tgt, self.use_bound), i)
        return Morphism(self.structure(src), fn, self.structure(tgt), None, f"{self.name}({h.name})")

    def traced(self, h: Morphism, i: int) -> tuple:
        """(F(h)(i), recorded oracle use)."""
        budget = _Budget(self.use_bound)
        val = self.on_morphism(_CountedRel(h.src, budget, "src"), _CountedIso(h, budget),
                               _CountedRel(h.tgt, budget, "tgt"), i)
        return val, tuple(budget.use)

    def __repr__(self):
        return f"Functor({self.name})"


class _Bounded:
    """Pass-through oracle that keeps a structure's cache identity."""

    def __init__(self, s: Structure, bound: int):
        self.s = s
        self.cache_key = oracle_key(s)

    def rel(self, symbol, args):
        return self.s.rel(symbol, args)


class IdentityFunctor(FunctorOperator):
    def __init__(self, signature: Signature, hint: Optional[int] = None):
        self.name = "identity"
        self.source_signature = self.target_signature = signature
        self.target_hint = hint

    def on_structure(self, src, symbol, args):
        return src.rel(symbol, args)

    def on_morphism(self, src, iso, tgt, i):
        return iso(i)


class ConstantFunctor(FunctorOperator):
    """Every copy goes to the fixed structure A, every isomorphism to the identity."""

    def __init__(self, target: Structure, source_signature: Optional[Signature] = None):
        self.name = f"constant:{target.name}"
        self.target = target
        self.source_signature = source_signature
        self.target_signature = target.signature
        self.target_hint = target.universe_hint

    def on_structure(self, src, symbol, args):
        return self.target.holds(symbol, args)

    def on_morphism(self, src, iso, tgt, i):
        return i


class ReindexFunctor(FunctorOperator):
    """F(X) = X pulled back along a fixed permutation rho; F(h) = rho^-1 h rho."""

    def __init__(self, rho: FinitePerm, signature: Signature, hint: Optional[int] = None):
        self.rho = rho
        self.name = "reindex:" + ",".join(f"{a}>{b}" for a, b in rho.moves)
        self.source_signature = self.target_signature = signature
        self.target_hint = hint

    def on_structure(self, src, symbol, args):
        return src.rel(symbol, tuple(self.rho(a) for a in args))

    def on_morphism(self, src, iso, tgt, i):
        return self.rho.inv(iso(self.rho(i)))


class ComposedFunctor(FunctorOperator):
    """second after first."""

    def __init__(self, first: FunctorOperator, second: FunctorOperator):
        self.first, self.second = first, second
        self.name = f"{second.name}.{first.name}"
        self.source_signature = first.source_signature
        self.target_signature = second.target_signature
        self.target_hint = second.target_hint
        self.use_bound = first.use_bound + second.use_bound

    def on_structure(self, src, symbol, args):
        return self.second.on_structure(_ImageOracle(self.first, src), symbol, args)

    def on_morphism(self, src, iso, tgt, i):
        first = self.first
        return self.second.on_morphism(_ImageOracle(first, src),
                                       lambda m: first.on_morphism(src, iso, tgt, m),
                                       _ImageOracle(first, tgt), i)


class _ImageOracle:
    def __init__(self, F: FunctorOperator, src):
        self.F, self.src = F, src
        k = oracle_key(src)
        self.cache_key = None if k is None else ("image", F.name, k)

    def rel(self, symbol, args):
        return self.F.on_structure(self.src, symbol, tuple(args))


# ---------------------------------------------------------------- built-in operators

def _search(pred, cap: int = SEARCH_CAP) -> int:
    for z in range(cap):
        if pred(z):
            return z
    raise OperatorDivergence("search cap exceeded")


class _MemoStore:
    """Per-oracle memo tables; only oracles with a stable cache key are memoized."""

    def __init__(self, factory):
        self.factory = factory
        self.tables: dict = {}

    def get(self, o):
        key = oracle_key(o)
        if key is None:
            return self.factory()
        st = self.tables.get(key)
        if st is None:
            st = self.factory()
            self.tables[key] = st
            st.anchor = getattr(o, "s", o)
        return st


class _FracState:
    def __init__(self):
        self.zero = None
        self.ops: dict = {}
        self.reps: list = []
        self.height = 0
        self.pos = 0
        self.anchor = None


def _pairs_at(h: int) -> list:
    return [(a, b) for a in range(h + 1) for b in range(h + 1) if max(a, b) == h]


class FracFieldFunctor(FunctorOperator):
    """Copies of the integer ring to copies of the rational field.

    The n-th element of F(X) is the n-th class of pairs (a, b), b nonzero, under
    cross-multiplication, pairs listed by height then lexicographically.
    """

    name = "fracfield"
    source_signature = Signature.of(Add=3, Mul=3)
    target_signature = Signature.of(Add=3, Mul=3)
    target_hint = None

    def __init__(self):
        self._store = _MemoStore(_FracState)

    def _zero(self, o, st):
        if st.zero is None:
            st.zero = _search(lambda z: o.rel("Add", (z, z, z)))
        return st.zero

    def _op(self, o, st, sym, x, y):
        key = (sym, x, y)
        got = st.ops.get(key)
        if got is None:
            got = _search(lambda z: o.rel(sym, (x, y, z)))
            st.ops[key] = got
        return got

    def _same(self, o, st, p, q):
        (a, b), (c, d) = p, q
        return self._op(o, st, "Mul", a, d) == self._op(o, st, "Mul", c, b)

    def _rep(self, o, st, i):
        zero = self._zero(o, st)
        while len(st.reps) <= i:
            level = _pairs_at(st.height)
            if st.pos >= len(level):
                st.height += 1
                st.pos = 0
                continue
            pair = level[st.pos]
            if pair[1] != zero and not any(self._same(o, st, pair, r) for r in st.reps):
                st.reps.append(pair)
            st.pos += 1
        return st.reps[i]

    def _class_of(self, o, st, pair):
        for k in itertools.count():
            if self._same(o, st, pair, self._rep(o, st, k)):
                return k

    def on_structure(self, src, symbol, args):
        st = self._store.get(src)
        (a, b), (c, d), (e, f) = (self._rep(src, st, i) for i in args)
        mul = lambda x, y: self._op(src, st, "Mul", x, y)  # noqa: E731
        add = lambda x, y: self._op(src, st, "Add", x, y)  # noqa: E731
        if symbol == "Add":
            return mul(add(mul(a, d), mul(c, b)), f) == mul(e, mul(b, d))
        if symbol == "Mul":
            return mul(mul(a, c), f) == mul(e, mul(b, d))
        raise RejectedInput(f"unknown symbol {symbol!r}")

    def on_morphism(self, src, iso, tgt, i):
        a, b = self._rep(src, self._store.get(src), i)
        return self._class_of(tgt, self._store.get(tgt), (iso(a), iso(b)))


class _PairState:
    def __init__(self):
        self.partner: dict = {}
        self.mins: list = []
        self.scanned = 0
        self.anchor = None


class ClassesFunctor(FunctorOperator):
    """Copies of the matched-pairs graph to the pure set of its pairs.

    Pairs are numbered by their least element.
    """

    name = "classes"
    source_signature = Signature.of(Edge=2)
    target_signature = Signature()
    target_hint = 3

    def __init__(self):
        self._store = _MemoStore(_PairState)

    def _partner(self, o, st, x):
        got = st.partner.get(x)
        if got is None:
            got = _search(lambda y: y != x and o.rel("Edge", (x, y)))
            st.partner[x] = got
        return got

    def _scan_to(self, o, st, x):
        while st.scanned <= x:
            y = st.scanned
            if self._partner(o, st, y) > y:
                st.mins.append(y)
            st.scanned += 1

    def _rep(self, o, st, k):
        while len(st.mins) <= k:
            self._scan_to(o, st, st.scanned)
        return st.mins[k]

    def _class_of(self, o, st, y):
        m = min(y, self._partner(o, st, y))
        self._scan_to(o, st, m)
        return st.mins.index(m)

    def on_structure(self, src, symbol, args):
        raise RejectedInput("the pure set has no relations")

    def on_morphism(self, src, iso, tgt, i):
        x = self._rep(src, self._store.get(src), i)
        return self._class_of(tgt, self._store.get(tgt), iso(x))


def functor_by_name(name: str, source: Optional[Structure] = None) -> FunctorOperator:
    """Registry: identity, constant:<structure>, fracfield, classes, reindex:a>b,..."""
    if name == "identity":
        if source is None:
            raise RejectedInput("the identity functor needs a source structure")
        return IdentityFunctor(source.signature, source.universe_hint)
    if name.startswith("constant:"):
        target = name.split(":", 1)[1]
        if target not in BUILTINS:
            raise RejectedInput(f"unknown structure {target!r}")
        return ConstantFunctor(BUILTINS[target](), source.signature if source else None)
    if name == "fracfield":
        return FracFieldFunctor()
    if name == "classes":
        return ClassesFunctor()
    if name.startswith("reindex:"):
        if source is None:
            raise RejectedInput("reindexing needs a source structure")
        moves = []
        for part in name.split(":", 1)[1].split(","):
            a, b = part.split(">")
            moves.append((int(a), int(b)))
        return ReindexFunctor(FinitePerm(tuple(moves)), source.signature, source.universe_hint)
    raise RejectedInput(f"unknown functor {name!r}")


FUNCTOR_NAMES = ("identity", "constant:<structure>", "fracfield", "classes", "reindex:<a>b,...>")


# ---------------------------------------------------------------- natural transformations

@dataclass(eq=False)
class NaturalTransformation:
    """component(X) is an isomorphism F(X) -> G(X), given pointwise."""

    name: str
    component: Callable[[Structure], Callable[[int], int]]
    inverse_component: Optional[Callable[[Structure], Callable[[int], int]]] = None
    _memo: dict = field(default_factory=dict, repr=False)

    def at(self, X: Structure, src: Optional[Structure] = None, tgt: Optional[Structure] = None) -> Morphism:
        got = self._memo.get(id(X))
        if got is not None and got[0] is X:
            return got[1]
        inv = self.inverse_component(X) if self.inverse_component else None
        m = Morphism(src or X, self.component(X), tgt or X, inv, f"{self.name}[{X.name}]")
        self._memo[id(X)] = (X, m)
        return m

    def inverse(self) -> "NaturalTransformation":
        def comp(X):
            if self.inverse_component is not None:
                return self.inverse_component(X)
            fwd = self.component(X)
            return lambda y: invert_by_search(fwd, y)
        return NaturalTransformation(f"{self.name}^-1", comp, self.component)


def identity_transformation() -> NaturalTransformation:
    return NaturalTransformation("id", lambda X: (lambda i: i), lambda X: (lambda i: i))


# ---------------------------------------------------------------- law checks

def _pointwise(report: Report, check: str, instance, lhs, rhs, bound: int, negative: bool = False):
    bad = None
    try:
        for i in range(bound):
            a, b = lhs(i), rhs(i)
            if a != b:
                bad = {"index": i, "lhs": a, "rhs": b}
                break
    except OperatorDivergence as exc:
        report.add(check, instance, False, {"divergence": str(exc)}, negative)
        return False
    except InsufficientOracle as exc:
        report.add(check, instance, None, {"insufficient": exc.args[0] if exc.args else None}, negative)
        return None
    report.add(check, instance, bad is None, bad, negative)
    return bad is None


def check_functor_laws(F: FunctorOperator, samples: Sequence, bound: int = 8,
                       report: Optional[Report] = None) -> Report:
    """Identity (N1) on every sampled copy and composition (N2) on composable pairs."""
    report = report or Report("laws")
    for k, (f, g) in enumerate(samples):
        for X in (f.src, f.tgt):
            idm = F.morphism(identity_morphism(X))
            _pointwise(report, "N1", {"functor": F.name, "copy": X.name}, idm, lambda i: i, bound)
        gf = F.morphism(f.then(g))
        Ff, Fg = F.morphism(f), F.morphism(g)
        _pointwise(report, "N2", {"functor": F.name, "sample": k}, gf, lambda i: Fg(Ff(i)), bound)
    return report


def check_natural_iso(F: FunctorOperator, G: FunctorOperator, eta: NaturalTransformation,
                      morphisms: Sequence[Morphism], bound: int = 8, report: Optional[Report] = None,
                      negative: bool = False) -> Report:
    """eta_X: F(X) -> G(X) injective on queried points, and G(h) eta_X = eta_Y F(h)."""
    report = report or Report("laws")
    for k, h in enumerate(morphisms):
        ex = eta.at(h.src, F.structure(h.src), G.structure(h.src))
        ey = eta.at(h.tgt, F.structure(h.tgt), G.structure(h.tgt))
        vals = [ex(i) for i in range(bound)]
        report.add("component-injective", {"eta": eta.name, "copy": h.src.name},
                   len(set(vals)) == len(vals), None if len(set(vals)) == len(vals) else vals, negative)
        Gh, Fh = G.morphism(h), F.morphism(h)
        _pointwise(report, "naturality", {"eta": eta.name, "sample": k},
                   lambda i: Gh(ex(i)), lambda i: ey(Fh(i)), bound, negative)
    return report


class _IdFunctor(FunctorOperator):
    name = "id"

    def structure(self, s):
        return s

    def morphism(self, h):
        return h


class _Chain(FunctorOperator):
    """second after first, reusing each functor's own memoized structures."""

    def __init__(self, first: FunctorOperator, second: FunctorOperator):
        self.first, self.second = first, second
        self.name = f"{second.name}.{first.name}"

    def structure(self, s):
        return self.second.structure(self.first.structure(s))

    def morphism(self, h):
        return self.second.morphism(self.first.morphism(h))


def check_adjoint_equivalence(F: FunctorOperator, G: FunctorOperator, eta: NaturalTransformation,
                              eps: NaturalTransformation, b_morphisms: Sequence[Morphism],
                              a_morphisms: Sequence[Morphism], bound: int = 8,
                              report: Optional[Report] = None, negative: bool = False) -> Report:
    """eta: id -> GF, eps: id -> FG; naturality squares and both triangle identities."""
    report = report or Report("biequiv")
    ident = _IdFunctor()
    GF, FG = _Chain(F, G), _Chain(G, F)
    check_natural_iso(ident, GF, eta, b_morphisms, bound, report, negative)
    check_natural_iso(ident, FG, eps, a_morphisms, bound, report, negative)
    for X in _distinct([h.src for h in b_morphisms]):
        FX = F.structure(X)
        eta_x = eta.at(X, X, G.structure(FX))
        F_eta = F.morphism(eta_x)
        eps_fx = eps.at(FX, FX, F.structure(G.structure(FX)))
        _pointwise(report, "triangle-F", {"copy": X.name}, F_eta, eps_fx, bound, negative)
    for Y in _distinct([h.src for h in a_morphisms]):
        GY = G.structure(Y)
        eps_y = eps.at(Y, Y, F.structure(GY))
        G_eps = G.morphism(eps_y)
        eta_gy = eta.at(GY, GY, G.structure(F.structure(GY)))
        _pointwise(report, "triangle-G", {"copy": Y.name}, G_eps, eta_gy, bound, negative)
    return report


def _distinct(xs):
    seen, out = set(), []
    for x in xs:
        if id(x) not in seen:
            seen.add(id(x))
            out.append(x)
    return out


# ---------------------------------------------------------------- automorphism-group homomorphisms

@dataclass(eq=False)
class GroupHomomorphismOperator:
    """Maps an automorphism oracle to an automorphism, queried pointwise with recorded use."""

    name: str
    fn: Callable[[Callable[[int], int], int], int]

    def apply(self, alpha: Callable[[int], int]) -> Callable[[int], int]:
        return lambda i: self.fn(alpha, i)

    def traced(self, alpha: Callable[[int], int], i: int) -> tuple:
        use = []

        def rec(x):
            y = alpha(x)
            use.append((x, y))
            return y
        return self.fn(rec, i), tuple(use)


def identity_homomorphism() -> GroupHomomorphismOperator:
    return GroupHomomorphismOperator("identity", lambda alpha, i: alpha(i))


def class_collapse_homomorphism() -> GroupHomomorphismOperator:
    """Aut(matched pairs) -> Sym(pairs): an automorphism induces a permutation of the pairs."""
    return GroupHomomorphismOperator("class-collapse", lambda alpha, k: alpha(2 * k) // 2)


class CopyStandardizer:
    """Assigns to each copy X an isomorphism X -> B by alternating greedy back-and-forth.

    Forth on the least unmapped element of X, back on the least unmapped element of B,
    always choosing the least consistent partner. On B itself this yields the identity.
    """

    def __init__(self, canonical: Structure, cap: int = 4096):
        self.B = canonical
        self.cap = cap
        self._state: dict = {}

    def _consistent(self, X, fwd, a, b) -> bool:
        if a in fwd or b in self._inv_of(fwd):
            return False
        dom = list(fwd)
        for r, k in self.B.signature.items():
            for mask in range(1, 1 << k):
                slots = [[a] if mask >> pos & 1 else dom for pos in range(k)]
                for t in itertools.product(*slots):
                    img = tuple(b if x == a else fwd[x] for x in t)
                    if X.rel(r, t) != self.B.holds(r, img):
                        return False
        return True

    @staticmethod
    def _inv_of(fwd):
        return set(fwd.values())

    def _grow(self, X, st):
        fwd, inv = st["fwd"], st["inv"]
        if st["phase"] == "forth":
            a = next(i for i in itertools.count() if i not in fwd)
            for b in range(self.cap):
                if b not in inv and self._consistent(X, fwd, a, b):
                    break
            else:
                raise BackAndForthFailure(a, f"no partner for {a} within {self.cap}")
            st["phase"] = "back"
        else:
            b = next(i for i in itertools.count() if i not in inv)
            for a in range(self.cap):
                if a not in fwd and self._consistent(X, fwd, a, b):
                    break
            else:
                raise BackAndForthFailure(b, f"no preimage for {b} within {self.cap}")
            st["phase"] = "forth"
        fwd[a] = b
        inv[b] = a

    def _st(self, X):
        got = self._state.get(id(X))
        if got is None or got[0] is not X:
            got = (X, {"fwd": {}, "inv": {}, "phase": "forth"})
            self._state[id(X)] = got
        return got[1]

    def forward(self, X) -> Callable[[int], int]:
        def f(x):
            st = self._st(X)
            while x not in st["fwd"]:
                self._grow(X, st)
            return st["fwd"][x]
        return f

    def backward(self, X) -> Callable[[int], int]:
        def g(y):
            st = self._st(X)
            while y not in st["inv"]:
                self._grow(X, st)
            return st["inv"][y]
        return g

    def iso(self, X: Structure) -> Morphism:
        return Morphism(X, self.forward(X), self.B, self.backward(X), f"Gamma[{X.name}]")


class HomomorphismFunctor(FunctorOperator):
    """G(X) = A and G(f) = H(Gamma^Y f (Gamma^X)^-1) for f: X -> Y."""

    def __init__(self, H: GroupHomomorphismOperator, gamma: CopyStandardizer, A: Structure):
        self.H, self.gamma, self.A = H, gamma, A
        self.name = f"hom[{H.name}]"
        self.source_signature = gamma.B.signature
        self.target_signature = A.signature
        self.target_hint = A.universe_hint

    def on_structure(self, src, symbol, args):
        return self.A.holds(symbol, args)

    def on_morphism(self, src, iso, tgt, i):
        X = getattr(src, "s", src)
        Y = getattr(tgt, "s", tgt)
        back = self.gamma.backward(X)
        fwd = self.gamma.forward(Y)
        return self.H.fn(lambda b: fwd(iso(back(b))), i)


def functor_from_homomorphism(H: GroupHomomorphismOperator, gamma: CopyStandardizer,
                              A: Structure) -> HomomorphismFunctor:
    return HomomorphismFunctor(H, gamma, A)


def check_restriction(G: FunctorOperator, H: GroupHomomorphismOperator, autos: Sequence[Morphism],
                      bound: int = 8, report: Optional[Report] = None) -> Report:
    """G restricted to automorphisms of the canonical structure equals H pointwise."""
    report = report or Report("laws")
    for k, alpha in enumerate(autos):
        Ga = G.morphism(alpha)
        Ha = H.apply(alpha)
        _pointwise(report, "restriction", {"homomorphism": H.name, "sample": k}, Ga, Ha, bound)
    return report


def iso_from_equivalence(F: FunctorOperator, G: FunctorOperator, eta: NaturalTransformation,
                         eps: NaturalTransformation, B: Structure, b_autos: Sequence[Morphism],
                         a_autos: Sequence[Morphism], bound: int = 8,
                         report: Optional[Report] = None, negative: bool = False):
    """H1(h) = F(h) and H2(g) = eta_B^-1 G(g) eta_B; checks that they are mutually inverse."""
    report = report or Report("biequiv")
    A = F.structure(B)
    eta_b = eta.at(B, B, G.structure(A))
    eta_b_inv = eta_b.inverse()

    def h1(alpha, i):
        return F.morphism(_as_morphism(alpha, B))(i)

    def h2(alpha, i):
        Gg = G.morphism(_as_morphism(alpha, A))
        return eta_b_inv(Gg(eta_b(i)))
    H1 = GroupHomomorphismOperator("H1", h1)
    H2 = GroupHomomorphismOperator("H2", h2)
    for k, g in enumerate(a_autos):
        g_m = _as_morphism(g, A)
        inner = _as_morphism(H2.apply(g_m), B)
        _pointwise(report, "H1.H2=id", {"sample": k}, H1.apply(inner), g_m, bound, negative)
    for k, h in enumerate(b_autos):
        h_m = _as_morphism(h, B)
        inner = _as_morphism(H1.apply(h_m), A)
        _pointwise(report, "H2.H1=id", {"sample": k}, H2.apply(inner), h_m, bound, negative)
    return H1, H2, report


def _as_morphism(alpha, S: Structure) -> Morphism:
    if isinstance(alpha, Morphism) and alpha.src is S and alpha.tgt is S:
        return alpha
    inv = alpha.inv if isinstance(alpha, Morphism) else None
    return Morphism(S, alpha, S, inv, getattr(alpha, "name", "alpha"))
