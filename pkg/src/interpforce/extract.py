"""Extracting an interpretation from a functor by forcing, and verifying the extraction."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .core import RejectedInput, Signature, Structure, pullback
from .forcing import Bounds, ForcingEngine
from .functors import FunctorOperator, Morphism
from .interp import InducedFunctor, Interpretation, tau
from .logic import ComplexityTag, TupleView
from .report import Report
from .statements import hat_morphism_value, morphism_value, structure_fact

IN, OUT, UNDECIDED = "in", "out", "undecided"


class BudgetInsufficient(RejectedInput):
    """A least-witness search ran out of bounds."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


# ---------------------------------------------------------------- forcing-backed predicates

class Extraction:
    """Dom, sim and the relations of the interpretation built from a functor F over copies of B."""

    def __init__(self, F: FunctorOperator, bounds: Bounds = Bounds(), reading: str = "inverse",
                 index_bound: Optional[int] = None):
        self.F, self.bounds, self.reading = F, bounds, reading
        self.index_bound = index_bound if index_bound is not None else max(bounds.depth, 8)
        self._engines: dict = {}
        self._frak_memo: dict = {}

    def engine(self, base: Structure) -> ForcingEngine:
        got = self._engines.get(id(base))
        if got is None or got[0] is not base:
            got = (base, ForcingEngine(base, self.bounds, 3))
            self._engines[id(base)] = got
        return got[1]

    def _membership(self, base, parts, f) -> str:
        v, exact = self.engine(base).forced(tuple(tuple(p) for p in parts), f)
        if v and exact:
            return IN
        return OUT if exact else UNDECIDED

    # Dom and sim
    def domain(self, base, cbar: tuple, i: int) -> str:
        return self._membership(base, (cbar, cbar), morphism_value(self.F, i, i, 1, 2, self.reading))

    def sim(self, base, x: tuple, y: tuple) -> str:
        (b, i), (c, j) = x, y
        return self._membership(base, (b, c), morphism_value(self.F, i, j, 1, 2, self.reading))

    def linked_index(self, base, b: tuple, i: int, c: tuple) -> Optional[int]:
        """The j with (b, c) forcing F(B_b, g2^-1 g1, B_c)(i) = j, if the data suffice."""
        fam = morphism_value(self.F, i, 0, 1, 2, self.reading).source
        j = fam.simulate(TupleView((b, c)), base)
        if j is None:
            return None
        return j if self.sim(base, (b, i), (c, j)) == IN else None

    def relation(self, base, symbol: str, args: Sequence[tuple], hints: Sequence[tuple] = ()):
        """(verdict, witness) for symbol holding of the Dom elements args."""
        merged = tuple(dict.fromkeys(a for b, _ in args for a in b))
        for cbar in itertools.chain(hints, (merged,), self._candidate_tuples()):
            js = []
            for (b, i) in args:
                j = self.linked_index(base, b, i, cbar)
                if j is None:
                    break
                js.append(j)
            else:
                pos = structure_fact(self.F, symbol, tuple(js), True)
                if self._membership(base, (cbar,), pos) == IN:
                    return IN, {"c": cbar, "j": tuple(js)}
                neg = structure_fact(self.F, symbol, tuple(js), False)
                if self._membership(base, (cbar,), neg) == IN:
                    return OUT, {"c": cbar, "j": tuple(js)}
        return UNDECIDED, None

    def _candidate_tuples(self):
        M, L = self.bounds.pool, self.bounds.length
        for h in range(M + 1):
            for t in injective_tuples_at_height(h, L):
                yield t

    # least witnesses
    def frak_generic(self, base, g: Sequence[int], i: int) -> tuple:
        """Least prefix c of g with (c, i) in Dom (membership is monotone in the prefix)."""
        g = tuple(g)
        if self.domain(base, g, i) != IN:
            raise BudgetInsufficient(f"index {i} is not in Dom along a prefix of length {len(g)}",
                                     [(len(g), self.domain(base, g, i))])
        lo, hi = 0, len(g)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.domain(base, g[:mid], i) == IN:
                hi = mid
            else:
                lo = mid + 1
        return (g[:lo], i)

    def frak_copy(self, X: Structure, i: int, max_height: Optional[int] = None) -> tuple:
        """Least (c, j) in canonical order with c forcing F(X, g^-1, X_g)(i) = j and (c, j) in Dom^X."""
        cap = max_height if max_height is not None else self.bounds.pool + self.bounds.length + 8
        key = (id(X), i)
        memo = self._frak_memo.setdefault(key, (X, {}))[1]
        if i in memo:
            return memo[i]
        fam = hat_morphism_value(self.F, X, i, 0).source
        best, trace = None, []
        for h in range(cap + 1):
            if best is not None and h > element_key(best)[0]:
                break
            for c in injective_tuples_at_height_any(h, self.bounds.length):
                j = fam.simulate(TupleView((c,)), X)
                if j is None:
                    continue
                if best is not None and element_key((c, j)) >= element_key(best):
                    continue
                if self._membership(X, (c,), hat_morphism_value(self.F, X, i, j)) != IN:
                    continue
                if self.domain(X, c, j) == IN:
                    best = (c, j)
                else:
                    trace.append((c, j))
        if best is None:
            raise BudgetInsufficient(f"no witness for index {i} below height {cap}", trace[:10])
        memo[i] = best
        return best

    # the interpretation
    def interpretation(self, target_signature: Optional[Signature] = None) -> Interpretation:
        sig = target_signature if target_signature is not None else self.F.target_signature
        L = self.bounds.length

        def dom(X, x):
            return self.domain(_unwrap(X), x[0], x[1]) == IN

        def sim(X, x, y):
            return self.sim(_unwrap(X), x, y) == IN

        rels = {sym: (lambda X, args, _s=sym: self.relation(_unwrap(X), _s, args)[0] == IN)
                for sym, _ in sig.items()}
        return Interpretation(f"extracted[{self.F.name}]", self.F.source_signature or Signature(), sig,
                              dom, sim, rels, tag=ComplexityTag(1, "Delta"),
                              candidates=lambda h: element_candidates(h, L),
                              transport=lambda f, x: (tuple(f(a) for a in x[0]), x[1]))


def _unwrap(X):
    return X if isinstance(X, Structure) else getattr(X, "s", X)


def _height(t: tuple) -> int:
    return 1 + max(t) if t else 0


def element_key(x: tuple) -> tuple:
    c, i = x
    return (max(len(c), _height(c), i + 1), len(c), c, i)


def injective_tuples_at_height(h: int, max_len: int) -> list:
    """Injective tuples with largest entry h - 1 (the empty tuple at height 0)."""
    if h == 0:
        return [()]
    out = []
    for n in range(1, min(max_len, h) + 1):
        for t in itertools.permutations(range(h), n):
            if max(t) == h - 1:
                out.append(t)
    return out


def injective_tuples_at_height_any(h: int, max_len: int) -> list:
    """Tuples whose canonical height max(len, 1 + max) equals h."""
    out = []
    for n in range(0, min(max_len, h) + 1):
        for t in itertools.permutations(range(h), n):
            if max(len(t), _height(t)) == h:
                out.append(t)
    out.sort(key=lambda t: (len(t), t))
    return out


def element_candidates(h: int, max_len: int) -> list:
    out = []
    for n in range(0, min(max_len, h) + 1):
        for c in itertools.permutations(range(h), n):
            for i in range(h):
                if max(len(c), _height(c), i + 1) == h:
                    out.append((c, i))
    out.sort(key=element_key)
    return out


# ---------------------------------------------------------------- module-level operations

def extract_domain(F, B, bbar, i, bounds: Bounds = Bounds(), reading: str = "inverse") -> str:
    return Extraction(F, bounds, reading).domain(B, tuple(bbar), i)


def extract_sim(F, B, x, y, bounds: Bounds = Bounds(), reading: str = "inverse") -> str:
    return Extraction(F, bounds, reading).sim(B, (tuple(x[0]), x[1]), (tuple(y[0]), y[1]))


def extract_relation(F, B, symbol, args, bounds: Bounds = Bounds(), hints=()) -> str:
    return Extraction(F, bounds).relation(B, symbol, [(tuple(c), i) for c, i in args], hints)[0]


def frak_F(g_or_copy, i: int, F, bounds: Bounds = Bounds(), base: Optional[Structure] = None) -> tuple:
    """The g-form (g a finite approximation, base given) or the copy form (a structure)."""
    ex = Extraction(F, bounds)
    if isinstance(g_or_copy, Structure):
        return ex.frak_copy(g_or_copy, i)
    if base is None:
        raise RejectedInput("the generic form needs the base structure")
    g = g_or_copy
    if hasattr(g, "pairs"):
        g = tuple(g(k) for k in range(len(g)))
    return ex.frak_generic(base, tuple(g), i)


# ---------------------------------------------------------------- fragments and brute-force isomorphism

@dataclass
class ExtractedFragment:
    elements: list
    reps: list
    class_of: dict
    relations: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.reps)


def partition(ex: Extraction, base, elements: Sequence[tuple]) -> ExtractedFragment:
    reps, class_of = [], {}
    for x in elements:
        for k, r in enumerate(reps):
            if ex.sim(base, x, r) == IN:
                class_of[x] = k
                break
        else:
            class_of[x] = len(reps)
            reps.append(x)
    return ExtractedFragment(list(elements), reps, class_of)


def dom_fragment(ex: Extraction, base, length: int, pool: int, index_bound: int) -> list:
    out = []
    for n in range(length + 1):
        for c in itertools.permutations(range(pool), n):
            for i in range(index_bound):
                if ex.domain(base, c, i) == IN:
                    out.append((c, i))
    out.sort(key=element_key)
    return out


def find_isomorphism(n: int, rels_a: dict, rels_b: dict, arities: dict,
                     targets: Optional[Sequence[int]] = None) -> Optional[dict]:
    """Brute-force backtracking search for a bijection of range(n) onto targets preserving relations."""
    targets = list(range(n)) if targets is None else list(targets)
    if len(targets) != n:
        return None

    def ok(m):
        dom = list(m)
        for sym, k in arities.items():
            for t in itertools.product(dom, repeat=k):
                if (t in rels_a[sym]) != (tuple(m[x] for x in t) in rels_b[sym]):
                    return False
        return True

    def go(m, used):
        if len(m) == n:
            return dict(m)
        a = len(m)
        for b in targets:
            if b in used:
                continue
            m[a] = b
            if ok(m):
                res = go(m, used | {b})
                if res is not None:
                    return res
            del m[a]
        return None

    return go({}, frozenset())


def structure_facts(S: Structure, elems: Sequence[int]) -> dict:
    out = {}
    for sym, k in S.signature.items():
        out[sym] = {t for t in itertools.product(elems, repeat=k) if S.holds(sym, t)}
    return out


# ---------------------------------------------------------------- the verification ladder

@dataclass
class ExtractionResult:
    report: Report
    fragment: Optional[ExtractedFragment] = None
    frak: list = field(default_factory=list)
    isomorphism: Optional[dict] = None


def verify_extraction(F: FunctorOperator, B: Structure, bounds: Bounds, g: Sequence[int],
                      morphisms: Sequence[Morphism] = (), index_bound: int = 8, sample: int = 120,
                      seed: int = 0, compare_with: Optional[Structure] = None,
                      fragment_length: Optional[int] = None, report: Optional[Report] = None) -> ExtractionResult:
    """Equivalence, onto, uniqueness, isomorphism with F(B_g), and naturality on sampled morphisms."""
    report = report or Report("extraction", bounds=bounds.as_dict())
    ex = Extraction(F, bounds, index_bound=index_bound)
    rng = random.Random(seed)
    L = fragment_length if fragment_length is not None else bounds.length
    elements = dom_fragment(ex, B, L, bounds.pool, index_bound)
    report.add("dom-nonempty", {"functor": F.name}, bool(elements), {"size": len(elements)})
    frag = partition(ex, B, elements)

    # equivalence relation on the fragment
    refl = [x for x in elements if ex.sim(B, x, x) != IN]
    report.add("sim-reflexive", {"functor": F.name, "elements": len(elements)}, not refl, refl[:3] or None)
    pick = elements if len(elements) <= sample else sorted(rng.sample(elements, sample), key=element_key)
    mat = {(x, y): ex.sim(B, x, y) for x in pick for y in pick}
    undecided = [k for k, v in mat.items() if v == UNDECIDED]
    asym = [(x, y) for x in pick for y in pick if mat[(x, y)] != mat[(y, x)]]
    report.add("sim-symmetric", {"functor": F.name, "sample": len(pick)}, (not asym) and not undecided or
               (None if undecided and not asym else False), asym[:3] or None)
    rows = {x: frozenset(y for y in pick if mat[(x, y)] == IN) for x in pick}
    trans = [(x, y) for x in pick for y in rows[x] if rows[x] != rows[y]]
    report.add("sim-transitive", {"functor": F.name, "sample": len(pick)}, not trans, trans[:3] or None)
    agree = [(x, y) for x in pick for y in pick if (mat[(x, y)] == IN) != (frag.class_of[x] == frag.class_of[y])]
    report.add("partition-consistent", {"functor": F.name}, not agree, agree[:3] or None)

    # uniqueness for prefix-compatible elements
    bad = []
    for x in pick:
        for y in pick:
            if len(x[0]) <= len(y[0]) and y[0][:len(x[0])] == x[0]:
                if (mat[(x, y)] == IN) != (x[1] == y[1]):
                    bad.append((x, y))
    report.add("unique", {"functor": F.name}, not bad, bad[:3] or None)

    # the generic map, onto, and isomorphism with F(B_g)
    frak, ext_rels, iso = extract_quotient(ex, B, g, index_bound, report, compare_with)
    frak_classes = {}
    for k, x in enumerate(frak):
        for r_idx, r in enumerate(frag.reps):
            if ex.sim(B, x, r) == IN:
                frak_classes[k] = r_idx
                break
    missing = [frag.reps[c] for c in range(frag.size) if c not in frak_classes.values()]
    report.add("onto", {"functor": F.name, "classes": frag.size}, not missing, missing[:3] or None)
    distinct = len(set(frak_classes.values())) == len(frak_classes)
    report.add("frak-injective", {"functor": F.name}, distinct, frak_classes)
    frag.relations = ext_rels

    # naturality on sampled morphisms
    I = ex.interpretation()
    FI = InducedFunctor(I)
    for k, h in enumerate(morphisms):
        _naturality(ex, F, FI, I, h, index_bound, report, k)
    return ExtractionResult(report, frag, frak, iso)


def complete_enumeration(g: Sequence[int]) -> Callable[[int], int]:
    """Extend a finite injective prefix to a bijection of omega, listing the missing values in order."""
    g = tuple(g)
    used = set(g)
    tail: list = []

    def fn(k):
        if k < len(g):
            return g[k]
        nxt = tail[-1] + 1 if tail else 0
        while len(tail) <= k - len(g):
            while nxt in used:
                nxt += 1
            tail.append(nxt)
            nxt += 1
        return tail[k - len(g)]
    return fn


def extract_quotient(ex: Extraction, B: Structure, g: Sequence[int], n: int, report: Report,
                     compare_with: Optional[Structure] = None):
    """frak_g on indices < n, the extracted relations among them, and the comparison with F(B_g)."""
    F, g = ex.F, tuple(g)
    frak = []
    for i in range(n):
        try:
            frak.append(ex.frak_generic(B, g, i))
        except BudgetInsufficient:
            break
    report.add("frak-defined", {"functor": F.name, "indices": len(frak)}, len(frak) == n, {"frak": frak})
    n = len(frak)
    FBg = F.structure(pullback(B, complete_enumeration(g), f"{B.name}_g"))
    sig = F.target_signature
    mism, undec = [], []
    ext_rels = {sym: set() for sym, _ in sig.items()}
    for sym, k in sig.items():
        for t in itertools.product(range(n), repeat=k):
            v, _ = ex.relation(B, sym, [frak[a] for a in t], hints=(g,))
            if v == UNDECIDED:
                undec.append((sym, t))
                continue
            if v == IN:
                ext_rels[sym].add(t)
            if (v == IN) != FBg.holds(sym, t):
                mism.append((sym, t))
    report.add("iso", {"functor": F.name, "indices": n}, (not mism) if not undec else None,
               {"mismatch": mism[:3], "undecided": undec[:3]} if (mism or undec) else None)
    iso = None
    if compare_with is not None:
        facts = structure_facts(compare_with, range(n))
        iso = find_isomorphism(n, ext_rels, facts, dict(sig.items()))
        report.add("brute-force-iso", {"functor": F.name, "target": compare_with.name, "size": n},
                   iso is not None, iso)
    return frak, ext_rels, iso


def eta_component(ex: Extraction, I: Interpretation, X: Structure) -> Callable[[int], int]:
    """eta_X = tau_X^-1 frak^X : F(X) -> F_I(X)."""
    t = tau(I, X)
    return lambda i: t.index_of(ex.frak_copy(X, i))


def _naturality(ex, F, FI, I, h: Morphism, bound: int, report: Report, k: int):
    try:
        _naturality_checked(ex, F, FI, I, h, bound, report, k)
    except BudgetInsufficient as exc:
        for check in ("naturality", "frak-commutes"):
            report.add(check, {"functor": F.name, "sample": k}, None, {"budget": str(exc), "trace": exc.trace})


def _naturality_checked(ex, F, FI, I, h: Morphism, bound: int, report: Report, k: int):
    X, Y = h.src, h.tgt
    eta_x, eta_y = eta_component(ex, I, X), eta_component(ex, I, Y)
    Fh, FIh = F.morphism(h), FI.morphism(h)
    bad, comm = None, None
    for i in range(bound):
        lhs, rhs = FIh(eta_x(i)), eta_y(Fh(i))
        if lhs != rhs and bad is None:
            bad = {"index": i, "lhs": lhs, "rhs": rhs}
        moved = I.transport(h, ex.frak_copy(X, i))
        if ex.sim(Y, ex.frak_copy(Y, Fh(i)), moved) != IN and comm is None:
            comm = {"index": i, "moved": moved}
    report.add("naturality", {"functor": F.name, "sample": k}, bad is None, bad)
    report.add("frak-commutes", {"functor": F.name, "sample": k}, comm is None, comm)
