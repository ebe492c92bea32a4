"""Forcing conditions, the forcing relation, decision search and generic construction."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import PartialInjection, RejectedInput, Structure
from .logic import (ATOMS, CompAtom, CountAnd, CountOr, Family, FinAnd, FinOr, RelAtom, TupleView,
                    ValAtom, classify, holds, located_polarity, negat, scan)


# ---------------------------------------------------------------- conditions and bounds

@dataclass(frozen=True)
class Bounds:
    pool: int = 5      # entries < pool
    length: int = 3    # coordinate lengths <= length
    depth: int = 4     # countable members probed: n < depth

    def as_dict(self) -> dict:
        return {"pool": self.pool, "len": self.length, "depth": self.depth}


@dataclass(frozen=True)
class Condition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(tuple(int(x) for x in p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise RejectedInput("a condition has at least one coordinate")
        for p in parts:
            if len(set(p)) != len(p):
                raise RejectedInput(f"coordinate {p} is not injective")
            if any(x < 0 for x in p):
                raise RejectedInput(f"coordinate {p} has a negative entry")

    @classmethod
    def of(cls, *parts) -> "Condition":
        return cls(tuple(parts))

    @classmethod
    def empty(cls, ell: int) -> "Condition":
        return cls(tuple(() for _ in range(ell)))

    @classmethod
    def parse(cls, text: str) -> "Condition":
        """Parse "(5,3);(3)" or "();(7)"."""
        parts = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise RejectedInput(f"bad condition coordinate {chunk!r}")
            body = chunk[1:-1].strip()
            try:
                parts.append(tuple(int(x) for x in body.split(",") if x.strip()))
            except ValueError as exc:
                raise RejectedInput(f"bad condition coordinate {chunk!r}") from exc
        return cls(tuple(parts))

    @property
    def ell(self) -> int:
        return len(self.parts)

    def extends(self, other: "Condition") -> bool:
        """self is an extension of other (coordinatewise prefix)."""
        return self.ell == other.ell and all(a[:len(b)] == b for a, b in zip(self.parts, other.parts))

    def drop(self, i: int) -> "Condition":
        return Condition(self.parts[:i - 1] + self.parts[i:])

    def view(self) -> TupleView:
        return TupleView(self.parts)

    def maps(self) -> list:
        return [PartialInjection.from_tuple(p) for p in self.parts]

    def __str__(self):
        return ";".join("(" + ",".join(map(str, p)) + ")" for p in self.parts)


def as_condition(p) -> Condition:
    return p if isinstance(p, Condition) else Condition(tuple(p))


FORCES, FORCES_NEGATION, UNDECIDED = "forces", "forces_negation", "undecided"


@dataclass(frozen=True)
class ForcingVerdict:
    kind: str
    certified: bool = True
    bounds: Optional[Bounds] = None

    @property
    def decided(self) -> bool:
        return self.kind != UNDECIDED

    def collapse(self) -> str:
        """in / out / undecided."""
        return {FORCES: "in", FORCES_NEGATION: "out", UNDECIDED: "undecided"}[self.kind]

    def __str__(self):
        return {FORCES: "Forces", FORCES_NEGATION: "ForcesNegation", UNDECIDED: "Undecided"}[self.kind]


# ---------------------------------------------------------------- the forcing relation

def _atom_forced(f, parts, base: Optional[Structure]) -> bool:
    # parts are injective, so a value seen at some position is not at any other
    if type(f) is CompAtom:
        bi, bj = parts[f.i - 1], parts[f.j - 1]
        x = bi[f.n] if f.n < len(bi) else None
        y = bj[f.m] if f.m < len(bj) else None
        if f.pos:
            return x is not None and x == y
        if x is not None and y is not None:
            return x != y
        if x is not None:
            return x in bj
        return y is not None and y in bi
    if type(f) is ValAtom:
        b = parts[f.i - 1]
        if f.m < len(b):
            return (b[f.m] == f.n) == f.pos
        return not f.pos and f.n in b
    b = parts[f.i - 1]
    if any(a >= len(b) for a in f.args):
        return False
    if base is None:
        raise RejectedInput("relation atoms need a base structure")
    t = base.holds(f.symbol, [b[a] for a in f.args])
    return t if f.pos else not t


def _check_arity(f, base: Optional[Structure], ell: int, depth: int):
    info = scan(f, depth)
    if info["generic"] > ell:
        raise RejectedInput(f"formula mentions generic {info['generic']} but the condition has {ell}")
    if base is not None:
        _check_rel_arity(f, base, depth)


def _check_rel_arity(f, base, depth):
    if isinstance(f, RelAtom):
        ar = base.signature.arity(f.symbol)
        if ar != len(f.args):
            raise RejectedInput(f"{f.symbol} has arity {ar}, got {len(f.args)} arguments")
    elif isinstance(f, (FinAnd, FinOr)):
        for x in f.items:
            _check_rel_arity(x, base, depth)
    elif isinstance(f, (CountOr, CountAnd)) and not hasattr(f.source, "scan_info"):
        for n in range(depth):
            m = f.member(n)
            if m is None:
                break
            _check_rel_arity(m, base, depth)


class ForcingEngine:
    """Memoized forcing over one base structure and one set of effective bounds."""

    def __init__(self, base: Optional[Structure], bounds: Bounds, ell: int, formulas: Sequence = ()):
        self.base = base
        self.ell = ell
        L, M = bounds.length, bounds.pool
        for f in formulas:
            info = scan(f, bounds.depth)
            L = max(L, info["index"] + 1)
            M = max(M, info["value"] + 1)
        M = max(M, L)
        self.bounds = Bounds(M, L, bounds.depth)
        hint = base.universe_hint if base is not None else None
        self.certified_pool = hint is not None and M >= hint
        self._memo: dict = {}
        self._maximal: dict = {}
        self._negations: dict = {}

    @classmethod
    def for_formula(cls, base, bounds: Bounds, p: Condition, f) -> "ForcingEngine":
        eng = cls(base, bounds, p.ell, [f])
        top = max((x for part in p.parts for x in part), default=-1)
        longest = max((len(part) for part in p.parts), default=0)
        if top >= eng.bounds.pool or longest > eng.bounds.length:
            b = eng.bounds
            eng = cls(base, Bounds(max(b.pool, top + 1, longest), max(b.length, longest), b.depth), p.ell, [f])
        return eng

    def maximal_extensions(self, parts: tuple) -> list:
        got = self._maximal.get(parts)
        if got is not None:
            return got
        M, L = self.bounds.pool, self.bounds.length
        per = []
        for c in parts:
            need = max(0, min(L, M) - len(c))
            free = [x for x in range(M) if x not in c]
            per.append([c + ext for ext in itertools.permutations(free, need)])
        got = [tuple(q) for q in itertools.product(*per)]
        self._maximal[parts] = got
        return got

    def forced(self, parts: tuple, f) -> tuple:
        """(value, exact): whether parts forces f inside the pool, and whether that answer is exact."""
        if isinstance(f, ATOMS):
            return _atom_forced(f, parts, self.base), True
        key = (parts, f)
        got = self._memo.get(key)
        if got is not None:
            return got
        got = self._forced(parts, f)
        self._memo[key] = got
        return got

    def _forced(self, parts, f):
        if isinstance(f, FinAnd):
            exact = True
            for x in f.items:
                v, e = self.forced(parts, x)
                exact = exact and e
                if not v:
                    return False, exact
            return True, exact
        if isinstance(f, FinOr):
            exact = True
            for x in f.items:
                v, e = self.forced(parts, x)
                if v and e:
                    return True, True
                exact = exact and e
                if v:
                    return True, False
            return False, exact
        D = self.bounds.depth
        pol = located_polarity(f)
        if isinstance(f, CountOr):
            if pol is True:
                return f.source.locate(TupleView(parts), self.base) is True, True
            exact = True
            n = 0
            while n < D:
                m = f.member(n)
                if m is None:
                    break
                v, e = self.forced(parts, m)
                if v and e:
                    return True, True
                exact = exact and e
                if v:
                    return True, False
                n += 1
            else:
                exact = exact and f.source.size is not None and f.source.size <= D
            return False, exact
        # CountAnd: every maximal pool extension must force every probed member.
        exact = self.certified_pool
        if pol is False:
            for q in self.maximal_extensions(parts):
                if f.source.locate(TupleView(q), self.base) is not False:
                    return False, exact
            return True, exact
        limit = D
        if f.source.size is not None and f.source.size <= D:
            limit = f.source.size
        else:
            exact = False
        ms = [f.member(n) for n in range(limit)]
        ms = [m for m in ms if m is not None]
        for q in self.maximal_extensions(parts):
            for m in ms:
                v, e = self.forced(q, m)
                exact = exact and e
                if not v:
                    return False, exact and self.certified_pool
        return True, exact

    def negation(self, f):
        got = self._negations.get(f)
        if got is None:
            got = self._negations[f] = negat(f)
        return got

    def kind(self, parts: tuple, f) -> str:
        """The verdict kind alone, without building a verdict object."""
        v, e = self.forced(parts, f)
        if v and e:
            return FORCES
        w, e2 = self.forced(parts, self.negation(f))
        return FORCES_NEGATION if w and e2 else UNDECIDED

    def verdict(self, parts: tuple, f) -> ForcingVerdict:
        v, e = self.forced(parts, f)
        if v and e:
            return ForcingVerdict(FORCES, True, self.bounds)
        w, e2 = self.forced(parts, self.negation(f))
        if w and e2:
            return ForcingVerdict(FORCES_NEGATION, True, self.bounds)
        return ForcingVerdict(UNDECIDED, e and e2 and not v and not w, self.bounds)


def forces(p, f, bounds: Bounds = Bounds(), base: Optional[Structure] = None,
           engine: Optional[ForcingEngine] = None) -> ForcingVerdict:
    """Forces, ForcesNegation or Undecided for condition p and formula f."""
    p = as_condition(p)
    _check_arity(f, base, p.ell, bounds.depth)
    eng = engine or ForcingEngine.for_formula(base, bounds, p, f)
    return eng.verdict(p.parts, f)


def forces_positive(p, f, bounds: Bounds = Bounds(), base: Optional[Structure] = None) -> bool:
    """Exact positive forcing only (no verdict about the negation)."""
    p = as_condition(p)
    eng = ForcingEngine.for_formula(base, bounds, p, f)
    v, e = eng.forced(p.parts, f)
    return v and e


# ---------------------------------------------------------------- decision search

def extensions_by_added_length(p: Condition, added: int, pool: int, length: int):
    """All q extending p by exactly `added` new entries in total, in lexicographic order."""
    ell = p.ell
    out = []
    for split in itertools.product(range(added + 1), repeat=ell):
        if sum(split) != added:
            continue
        per = []
        ok = True
        for c, k in zip(p.parts, split):
            if len(c) + k > length:
                ok = False
                break
            free = [x for x in range(pool) if x not in c]
            per.append([c + e for e in itertools.permutations(free, k)])
        if ok:
            out.extend(tuple(q) for q in itertools.product(*per))
    out.sort()
    return out


def decide(p, f, bounds: Bounds = Bounds(), base: Optional[Structure] = None,
           engine: Optional[ForcingEngine] = None):
    """Least extension q of p (by added length, then lexicographically) deciding f."""
    p = as_condition(p)
    _check_arity(f, base, p.ell, bounds.depth)
    eng = engine or ForcingEngine.for_formula(base, bounds, p, f)
    M, L = eng.bounds.pool, eng.bounds.length
    last = ForcingVerdict(UNDECIDED, False, eng.bounds)
    for added in itertools.count():
        level = extensions_by_added_length(p, added, M, L)
        if not level:
            break
        for q in level:
            v = eng.verdict(q, f)
            if v.decided:
                return Condition(q), v
            last = v if added == 0 else last
    return p, ForcingVerdict(UNDECIDED, False, eng.bounds)


# ---------------------------------------------------------------- restriction

class _ShiftedView:
    def __init__(self, view, mapping: dict):
        self.view, self.mapping = view, mapping

    def val(self, i, m):
        return self.view.val(self.mapping[i], m)

    def pre(self, i, x):
        return self.view.pre(self.mapping[i], x)

    @property
    def parts(self):
        parts = self.view.parts
        top = max(self.mapping, default=0)
        return tuple(parts[self.mapping[k] - 1] if k in self.mapping else () for k in range(1, top + 1))


class ReindexedFamily(Family):
    """A family whose generic indices are renamed through `mapping` (old -> new)."""

    def __init__(self, source: Family, mapping: dict):
        self.source, self.mapping = source, dict(mapping)
        self.size = source.size
        self.located = source.located
        self.finitary_members = getattr(source, "finitary_members", False)
        self.label = f"{source.label}{sorted(self.mapping.items())}"

    def item(self, n):
        m = self.source.item(n)
        return None if m is None else reindex(m, self.mapping)

    def locate(self, view, base):
        return self.source.locate(_ShiftedView(view, self.mapping), base)

    def scan_info(self):
        if hasattr(self.source, "scan_info"):
            info = dict(self.source.scan_info())
            gens = {self.mapping.get(g, g) for g in info.get("generics", ())}
            info["generics"] = gens
            info["generic"] = max(gens, default=0)
            return info
        return {}

    def __eq__(self, other):
        return isinstance(other, ReindexedFamily) and other.source is self.source and other.mapping == self.mapping

    def __hash__(self):
        return hash((id(self.source), tuple(sorted(self.mapping.items()))))


def reindex(f, mapping: dict):
    """Rename generic indices of f through mapping (old index -> new index)."""
    if isinstance(f, CompAtom):
        return CompAtom(mapping[f.i], mapping[f.j], f.m, f.n, f.pos)
    if isinstance(f, RelAtom):
        return RelAtom(mapping[f.i], f.symbol, f.args, f.pos)
    if isinstance(f, ValAtom):
        return ValAtom(mapping[f.i], f.m, f.n, f.pos)
    if isinstance(f, FinAnd):
        return FinAnd(tuple(reindex(x, mapping) for x in f.items))
    if isinstance(f, FinOr):
        return FinOr(tuple(reindex(x, mapping) for x in f.items))
    return type(f)(ReindexedFamily(f.source, mapping), f.flip)


def restrict_check(p, f, i: int, bounds: Bounds = Bounds(), base: Optional[Structure] = None) -> bool:
    """Dropping an unmentioned coordinate i leaves the verdict unchanged."""
    p = as_condition(p)
    info = scan(f, bounds.depth)
    if i in info["generics"]:
        raise RejectedInput(f"formula mentions generic {i}")
    if p.ell < 2:
        raise RejectedInput("cannot drop the only coordinate")
    mapping = {k: (k if k < i else k - 1) for k in range(1, p.ell + 1) if k != i}
    full = forces(p, f, bounds, base)
    small = forces(p.drop(i), reindex(f, mapping), bounds, base)
    return full.kind == small.kind


# ---------------------------------------------------------------- generics

@dataclass
class GenericBudget:
    formulas: list
    pool: int = 4
    length: int = 4
    seed: int = 0
    depth: int = 4

    def __post_init__(self):
        if self.pool < 1 or self.length < 1 or self.depth < 1:
            raise RejectedInput("budget bounds must be positive")


@dataclass
class GenericResult:
    gs: list
    condition: Condition
    deficiencies: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.gs)

    def __len__(self):
        return len(self.gs)

    def __getitem__(self, k):
        return self.gs[k]


def build_generic(ell: int, budget: GenericBudget, base: Optional[Structure] = None,
                  onto: bool = True) -> GenericResult:
    """Chain decide over the budget formulas, with seeded random steps, then fill onto [0, pool)."""
    if ell < 1:
        raise RejectedInput("need at least one generic")
    rng = random.Random(budget.seed)
    length = max(budget.length, budget.pool)
    bounds = Bounds(budget.pool, length, budget.depth)
    p = Condition.empty(ell)
    trace, deficiencies = [], []
    for f in budget.formulas:
        _check_arity(f, base, ell, budget.depth)
    eng = ForcingEngine(base, bounds, ell, budget.formulas)
    M, L = eng.bounds.pool, eng.bounds.length
    for k, f in enumerate(budget.formulas):
        c = rng.randrange(ell)
        free = [x for x in range(M) if x not in p.parts[c]]
        if free and len(p.parts[c]) < L:
            parts = list(p.parts)
            parts[c] = parts[c] + (rng.choice(free),)
            p = Condition(tuple(parts))
        q, v = decide(p, f, bounds, base, engine=eng)
        trace.append((k, str(q), str(v)))
        if v.decided:
            p = q
        else:
            deficiencies.append(k)
    parts = list(p.parts)
    if onto:
        for c in range(ell):
            rest = [x for x in range(M) if x not in parts[c]]
            rng.shuffle(rest)
            parts[c] = parts[c] + tuple(rest)
    p = Condition(tuple(parts))
    gs = [PartialInjection.from_tuple(c) for c in p.parts]
    return GenericResult(gs, p, deficiencies, trace)


def truth_lemma_check(f, gen: GenericResult, base: Optional[Structure], bounds: Bounds,
                      truth_budget: int = 8) -> tuple:
    """(truth value, some prefix forces f, some prefix forces not f) along the generic."""
    t = holds(f, gen.gs, truth_budget, base)
    eng = ForcingEngine(base, bounds, gen.condition.ell, [f])
    lens = [len(c) for c in gen.condition.parts]
    pos = neg = False
    for cut in itertools.product(*(range(n + 1) for n in lens)):
        parts = tuple(c[:k] for c, k in zip(gen.condition.parts, cut))
        v = eng.verdict(parts, f)
        pos = pos or v.kind == FORCES
        neg = neg or v.kind == FORCES_NEGATION
        if pos and neg:
            break
    return t, pos, neg


# ---------------------------------------------------------------- definability of forcing

@dataclass(frozen=True)
class BTrue:
    pass


@dataclass(frozen=True)
class BFalse:
    pass


@dataclass(frozen=True)
class BEq:
    left: tuple   # (coordinate, position)
    right: tuple
    pos: bool = True


@dataclass(frozen=True)
class BRel:
    symbol: str
    args: tuple   # tuple of (coordinate, position)
    pos: bool = True


@dataclass(frozen=True)
class BAnd:
    items: tuple


@dataclass(frozen=True)
class BOr:
    items: tuple


@dataclass(frozen=True)
class BNot:
    body: object


@dataclass(frozen=True)
class BForallExt:
    """For all injective extensions from shape `old` to shape `new`, body holds."""
    old: tuple
    new: tuple
    body: object


def _shapes_above(shape: tuple, length: int):
    return [s for s in itertools.product(*(range(k, length + 1) for k in shape))]


class DefinableRelation:
    """The set of conditions forcing f, presented as one first-order formula per condition shape."""

    def __init__(self, f, ell: int, bounds: Bounds, base: Structure):
        info = scan(f, bounds.depth)
        if info["val_atoms"]:
            raise RejectedInput("only restricted formulas (no value atoms) are definable")
        self.f, self.ell, self.base = f, ell, base
        eng = ForcingEngine(base, bounds, ell, [f])
        self.bounds = eng.bounds
        self.tag = classify(f)
        self._cache: dict = {}

    def formula_for(self, shape: tuple, f=None):
        f = self.f if f is None else f
        key = (shape, f)
        if key not in self._cache:
            self._cache[key] = self._compile(f, tuple(shape))
        return self._cache[key]

    def _compile(self, f, shape):
        if isinstance(f, CompAtom):
            if f.pos:
                if f.n < shape[f.i - 1] and f.m < shape[f.j - 1]:
                    return BEq((f.i, f.n), (f.j, f.m))
                return BFalse()
            alts = []
            if f.n < shape[f.i - 1] and f.m < shape[f.j - 1]:
                alts.append(BEq((f.i, f.n), (f.j, f.m), False))
            if f.n < shape[f.i - 1]:
                alts += [BEq((f.i, f.n), (f.j, k)) for k in range(shape[f.j - 1]) if k != f.m]
            if f.m < shape[f.j - 1]:
                alts += [BEq((f.j, f.m), (f.i, k)) for k in range(shape[f.i - 1]) if k != f.n]
            return BOr(tuple(alts))
        if isinstance(f, RelAtom):
            if all(a < shape[f.i - 1] for a in f.args):
                return BRel(f.symbol, tuple((f.i, a) for a in f.args), f.pos)
            return BFalse()
        if isinstance(f, FinAnd):
            return BAnd(tuple(self.formula_for(shape, x) for x in f.items))
        if isinstance(f, FinOr):
            return BOr(tuple(self.formula_for(shape, x) for x in f.items))
        D = self.bounds.depth
        ms = [m for m in (f.member(n) for n in range(D)) if m is not None]
        if isinstance(f, CountOr):
            return BOr(tuple(self.formula_for(shape, m) for m in ms))
        parts = []
        for m in ms:
            neg = negat(m)
            for s in _shapes_above(shape, self.bounds.length):
                parts.append(BForallExt(shape, s, BNot(self.formula_for(s, neg))))
        return BAnd(tuple(parts))

    def evaluate(self, p) -> bool:
        p = as_condition(p)
        shape = tuple(len(c) for c in p.parts)
        env = {(i + 1, k): x for i, c in enumerate(p.parts) for k, x in enumerate(c)}
        return _beval(self.formula_for(shape), env, self.base, self.bounds.pool)


def _beval(phi, env: dict, base: Structure, pool: int) -> bool:
    if isinstance(phi, BTrue):
        return True
    if isinstance(phi, BFalse):
        return False
    if isinstance(phi, BEq):
        return (env[phi.left] == env[phi.right]) == phi.pos
    if isinstance(phi, BRel):
        return base.holds(phi.symbol, [env[a] for a in phi.args]) == phi.pos
    if isinstance(phi, BAnd):
        return all(_beval(x, env, base, pool) for x in phi.items)
    if isinstance(phi, BOr):
        return any(_beval(x, env, base, pool) for x in phi.items)
    if isinstance(phi, BNot):
        return not _beval(phi.body, env, base, pool)
    per = []
    for c, (a, b) in enumerate(zip(phi.old, phi.new), start=1):
        used = [env[(c, k)] for k in range(a)]
        free = [x for x in range(pool) if x not in used]
        per.append([(c, a, ext) for ext in itertools.permutations(free, b - a)])
    for combo in itertools.product(*per):
        local = dict(env)
        for c, a, ext in combo:
            for k, x in enumerate(ext):
                local[(c, a + k)] = x
        if not _beval(phi.body, local, base, pool):
            return False
    return True


def definability_compile(f, ell: int, bounds: Bounds = Bounds(), base: Optional[Structure] = None
                         ) -> DefinableRelation:
    return DefinableRelation(f, ell, bounds, base)
