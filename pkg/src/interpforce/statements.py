"""Compiling statements about a functor operator into the forcing language.

The operator is replayed against scripted oracles. Every halting run records the
queries it made and the answers it received; a run that commits to the wanted
output becomes one disjunct (a finite conjunction of leaf atoms).
"""
from __future__ import annotations

import itertools
from typing import Optional

from .core import RejectedInput, Structure
from .logic import (CompAtom, CountAnd, CountOr, Family, FinAnd, FinOr, IndexedFamily, RelAtom,
                    TupleView, ValAtom, negat)

DEFAULT_STEP_BOUND = 200_000


class OperatorDivergence(Exception):
    """An operator exceeded its use bound."""


class _Need(Exception):
    def __init__(self, query):
        self.query = query


class _Incomplete(Exception):
    pass


class _Tape:
    def __init__(self, answers: dict, bound: int):
        self.answers = answers
        self.bound = bound
        self.steps = 0
        self.log: list = []
        self.seen: set = set()

    def ask(self, q):
        self.steps += 1
        if self.steps > self.bound:
            raise OperatorDivergence(f"use bound {self.bound} exceeded at query {q!r}")
        if q not in self.answers:
            raise _Need(q)
        a = self.answers[q]
        if q not in self.seen:
            self.seen.add(q)
            self.log.append((q, a))
        return a


class _TapeRel:
    def __init__(self, tape: _Tape, tag: str):
        self.tape, self.tag = tape, tag

    def rel(self, symbol, args):
        return self.tape.ask((self.tag, symbol, tuple(args)))


class _TapeIso:
    def __init__(self, tape: _Tape):
        self.tape = tape

    def __call__(self, m):
        a = self.tape.ask(("iso", m))
        return a[1] if isinstance(a, tuple) else a


class _FixedRel:
    """Queries to a known copy are answered directly and leave no atom."""

    def __init__(self, s: Structure, tape: Optional[_Tape] = None):
        self.s, self.tape = s, tape

    def rel(self, symbol, args):
        if self.tape is not None:
            self.tape.steps += 1
            if self.tape.steps > self.tape.bound:
                raise OperatorDivergence(f"use bound {self.tape.bound} exceeded")
        return self.s.holds(symbol, tuple(args))


class _ViewRel:
    def __init__(self, view, i: int, base: Structure):
        self.view, self.i, self.base = view, i, base
        parts = getattr(view, "parts", None)
        self.cache_key = None if parts is None else ("view", id(base), parts[i - 1])

    def rel(self, symbol, args):
        vals = []
        for a in args:
            x = self.view.val(self.i, a)
            if x is None:
                raise _Incomplete
            vals.append(x)
        return self.base.holds(symbol, vals)


class _ViewIso:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, m):
        n = self.fn(m)
        if n is None:
            raise _Incomplete
        return n


class StatementFamily(Family):
    """Disjuncts of a single functor statement, one per committing oracle string.

    kind is "morphism" (F(B_ga, g_b^-1 g_a, B_gb)(i) = j), "structure"
    (F(B_ga) satisfies symbol(args) with the given truth value) or "hat"
    (F(copy, g_a^-1, copy_ga)(i) = j, using value atoms).
    """

    located = True
    finitary_members = True

    def __init__(self, F, kind: str, a: int, b: int, i=None, j=None, symbol=None, args=None,
                 truth: bool = True, copy: Optional[Structure] = None, reading: str = "inverse",
                 value_cap: int = 24):
        if kind not in ("morphism", "structure", "hat"):
            raise RejectedInput(f"unknown statement kind {kind!r}")
        if reading not in ("inverse", "literal"):
            raise RejectedInput("reading is 'inverse' or 'literal'")
        self.F, self.kind, self.a, self.b = F, kind, a, b
        self.i, self.j, self.symbol, self.args, self.truth = i, j, symbol, args, truth
        self.copy, self.reading, self.value_cap = copy, reading, value_cap
        self.size = None
        self.bound = getattr(F, "use_bound", DEFAULT_STEP_BOUND)
        self._items: list = []
        self._level = 0
        self._exhausted = False
        self._loc_cache: dict = {}
        if kind == "morphism":
            self.label = f"{F.name}(B_g{a}, g{b}^-1 g{a}, B_g{b})({i})={j}"
        elif kind == "structure":
            self.label = f"{F.name}(B_g{a}) {'|=' if truth else '|/='} {symbol}{tuple(args)}"
        else:
            self.label = f"{F.name}({copy.name}, g{a}^-1, {copy.name}_g{a})({i})={j}"

    def scan_info(self):
        gens = {self.a} if self.b is None else {self.a, self.b}
        return {"generic": max(gens), "generics": gens,
                "val_atoms": self.kind == "hat" or self.reading == "literal"}

    # -- running the operator on a tape
    def _run(self, tape: _Tape):
        F = self.F
        if self.kind == "structure":
            return F.on_structure(_TapeRel(tape, "src"), self.symbol, tuple(self.args))
        if self.kind == "morphism":
            return F.on_morphism(_TapeRel(tape, "src"), _TapeIso(tape), _TapeRel(tape, "tgt"), self.i)
        return F.on_morphism(_FixedRel(self.copy, tape), _TapeIso(tape), _TapeRel(tape, "tgt"), self.i)

    def _commits(self, out) -> bool:
        if self.kind == "structure":
            return bool(out) == self.truth
        return out == self.j

    def _atoms(self, q, ans):
        tag = q[0]
        if tag == "src":
            return [RelAtom(self.a, q[1], q[2], ans)]
        if tag == "tgt":
            return [RelAtom(self.b if self.kind == "morphism" else self.a, q[1], q[2], ans)]
        m = q[1]
        if self.kind == "hat":
            return [ValAtom(self.a, ans, m, True)]
        if self.reading == "literal":
            k, n = ans
            return [ValAtom(self.a, m, k, True), ValAtom(self.b, k, n, True)]
        return [CompAtom(self.b, self.a, m, ans, True)]

    def _runs_at_level(self, k: int):
        """All complete runs whose value answers are < k, with some answer = k-1 (k >= 1)."""
        out = []

        def explore(answers: dict):
            tape = _Tape(answers, self.bound)
            try:
                res = self._run(tape)
            except _Need as need:
                q = need.query
                if q[0] == "iso":
                    if self.reading == "literal" and self.kind == "morphism":
                        opts = list(itertools.product(range(k), repeat=2))
                    else:
                        opts = list(range(k))
                else:
                    opts = [True, False]
                for o in opts:
                    nxt = dict(answers)
                    nxt[q] = o
                    explore(nxt)
                return
            vals = []
            for q, a in tape.log:
                if q[0] == "iso":
                    vals.extend(a if isinstance(a, tuple) else (a,))
            top = max(vals, default=-1)
            if top == k - 1 or (k == 1 and top < 0):
                out.append((tuple(tape.log), res))

        explore({})
        out.sort(key=lambda r: (len(r[0]), repr(r[0])))
        return out

    def item(self, n: int):
        while len(self._items) <= n and not self._exhausted:
            self._level += 1
            if self._level > self.value_cap:
                self._exhausted = True
                break
            for log, res in self._runs_at_level(self._level):
                if self._commits(res):
                    atoms = []
                    for q, a in log:
                        atoms.extend(self._atoms(q, a))
                    self._items.append(FinAnd(tuple(atoms)))
        return self._items[n] if n < len(self._items) else None

    # -- exact location on finite data
    def simulate(self, view, base: Structure):
        """The operator's answer under the finite data in view, or None if it needs more."""
        key = (id(base), view.parts) if isinstance(view, TupleView) else None
        if key is not None and key in self._loc_cache:
            return self._loc_cache[key]
        try:
            res = self._simulate(view, base)
        except _Incomplete:
            res = None
        if key is not None:
            self._loc_cache[key] = res
        return res

    def _simulate(self, view, base):
        F, a, b = self.F, self.a, self.b
        if self.kind == "structure":
            return bool(F.on_structure(_ViewRel(view, a, base), self.symbol, tuple(self.args)))
        if self.kind == "hat":
            copy = self.copy
            iso = _ViewIso(lambda m: view.pre(a, m))
            return F.on_morphism(_FixedRel(copy), iso, _ViewRel(view, a, copy), self.i)
        if self.reading == "literal":
            def h(m):
                k = view.val(a, m)
                return None if k is None else view.val(b, k)
        else:
            def h(m):
                x = view.val(a, m)
                return None if x is None else view.pre(b, x)
        return F.on_morphism(_ViewRel(view, a, base), _ViewIso(h), _ViewRel(view, b, base), self.i)

    def locate(self, view, base):
        res = self.simulate(view, base)
        if res is None:
            return None
        return self._commits(res)


_FAMILY_CACHE: dict = {}


def statement(F, kind: str, **kw) -> CountOr:
    """The located disjunction expressing one functor statement; cached per parameters."""
    key = (F, kind) + tuple(sorted((k, v if not isinstance(v, list) else tuple(v)) for k, v in kw.items()))
    fam = _FAMILY_CACHE.get(key)
    if fam is None:
        fam = StatementFamily(F, kind, **kw)
        _FAMILY_CACHE[key] = fam
    return CountOr(fam)


def morphism_value(F, i: int, j: int, a: int = 1, b: int = 2, reading: str = "inverse") -> CountOr:
    return statement(F, "morphism", a=a, b=b, i=i, j=j, reading=reading)


def structure_fact(F, symbol: str, args, truth: bool = True, a: int = 1) -> CountOr:
    return statement(F, "structure", a=a, b=None, symbol=symbol, args=tuple(args), truth=truth)


def hat_morphism_value(F, copy: Structure, i: int, j: int, a: int = 1) -> CountOr:
    return statement(F, "hat", a=a, b=None, i=i, j=j, copy=copy)


def _tuples(arity: int):
    """All arity-tuples over omega ordered by maximum entry, then lexicographically."""
    for top in itertools.count():
        for t in itertools.product(range(top + 1), repeat=arity):
            if max(t) == top:
                yield t


def _tuple_at(arity: int):
    cache: list = []
    gen = _tuples(arity)

    def at(n):
        while len(cache) <= n:
            cache.append(next(gen))
        return cache[n]
    return at


def inverse_law(F, reading: str = "inverse") -> CountAnd:
    at = _tuple_at(2)

    def conj(n):
        i, j = at(n)
        s12 = morphism_value(F, i, j, 1, 2, reading)
        s21 = morphism_value(F, j, i, 2, 1, reading)
        return FinAnd((FinOr((negat(s12), s21)), FinOr((negat(s21), s12))))
    return CountAnd(IndexedFamily(conj, None, f"inverse-law[{F.name}]"))


def composition_law(F, reading: str = "inverse") -> CountAnd:
    at = _tuple_at(3)

    def conj(n):
        i, j, k = at(n)
        return FinOr((negat(morphism_value(F, i, j, 1, 2, reading)),
                      negat(morphism_value(F, j, k, 2, 3, reading)),
                      morphism_value(F, i, k, 1, 3, reading)))
    return CountAnd(IndexedFamily(conj, None, f"composition-law[{F.name}]"))


def compile_functor_statement(F, kind: str, **args):
    """Dispatch on the statement kinds accepted by the command line and the suites."""
    if kind == "morphism-value":
        return morphism_value(F, args["i"], args["j"], args.get("a", 1), args.get("b", 2),
                              args.get("reading", "inverse"))
    if kind == "structure-fact":
        return structure_fact(F, args["symbol"], args["args"], args.get("truth", True), args.get("a", 1))
    if kind == "inverse-law":
        return inverse_law(F, args.get("reading", "inverse"))
    if kind == "composition-law":
        return composition_law(F, args.get("reading", "inverse"))
    if kind == "hat-morphism-value":
        return hat_morphism_value(F, args["copy"], args["i"], args["j"], args.get("a", 1))
    raise RejectedInput(f"unknown statement kind {kind!r}")
