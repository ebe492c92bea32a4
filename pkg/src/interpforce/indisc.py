"""Definable classes of indiscernibles, and checking that class permutations extend to automorphisms."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core import (BackAndForthFailure, PartialAutomorphism, PartialInjection, RejectedInput, Signature,
                   Structure, UndecidedAtDepth, extend_partial_automorphism)
from .forcing import Bounds
from .interp import Interpretation, _size
from .report import Report


@dataclass(eq=False)
class IndiscernibleWitness:
    """Classes of E on the arity-n part of D, enumerated at the bounds."""

    arity: int
    D: Callable
    E: Callable
    classes: list
    structure: Structure
    interpretation: str
    order: Optional[Callable] = None
    bounds: Optional[dict] = None

    @property
    def class_count_bound(self) -> int:
        return len(self.classes)


def trivial_reduct(I: Interpretation) -> Interpretation:
    """The same domain and equivalence, with the target relations forgotten."""
    return Interpretation(f"{I.name}-reduct", I.source_signature, Signature(), I.dom, I.sim, {}, I.arities,
                          I.tag, I.candidates, I.transport, None, None, I.source)


def extract_indiscernibles(I: Interpretation, A: Structure, bounds: Bounds = Bounds(pool=10), k: int = 5,
                           order: Optional[Callable] = None, report: Optional[Report] = None) -> IndiscernibleWitness:
    """D = Dom, E = sim; the least arity whose fragment has at least k classes."""
    if list(I.target_signature.items()):
        raise RejectedInput(f"{I.name} does not interpret the trivial structure")
    report = report if report is not None else Report("indiscernibles", bounds=bounds.as_dict())
    arities = sorted({_size(t) for h in range(bounds.pool + 1) for t in I.candidates(h)})
    for n in arities:
        elements = [t for h in range(bounds.pool + 1) for t in I.candidates(h)
                    if _size(t) == n and I.dom(A, t)]
        classes: list = []
        for t in elements:
            for cls in classes:
                if I.sim(A, t, cls[0]):
                    cls.append(t)
                    break
            else:
                classes.append([t])
        if len(classes) >= k:
            _equivalence_checks(I, A, elements, report)
            return IndiscernibleWitness(n, I.dom, I.sim, classes, A, I.name, order, bounds.as_dict())
    raise RejectedInput(f"threshold {k} not reached at bounds {bounds.as_dict()}")


def _equivalence_checks(I: Interpretation, A: Structure, elements: Sequence, report: Report):
    mat = {(x, y): bool(I.sim(A, x, y)) for x in elements for y in elements}
    refl = [x for x in elements if not mat[(x, x)]]
    report.add("E-reflexive", I.name, not refl, refl[:3] or None)
    asym = [(x, y) for (x, y), v in mat.items() if v != mat[(y, x)]]
    report.add("E-symmetric", I.name, not asym, asym[:3] or None)
    rows = {x: frozenset(y for y in elements if mat[(x, y)]) for x in elements}
    trans = [(x, y) for x in elements for y in rows[x] if rows[x] != rows[y]]
    report.add("E-transitive", I.name, not trans, trans[:3] or None)


def class_permutations(n: int, count: int, seed: int = 0) -> list:
    """All permutations of range(n) when count reaches n!, else a seeded sample including the identity."""
    if count >= math.factorial(n):
        return list(itertools.permutations(range(n)))
    rng = random.Random(seed)
    out = {tuple(range(n))}
    while len(out) < count:
        p = list(range(n))
        rng.shuffle(p)
        out.add(tuple(p))
    return sorted(out)


def order_preserving_maps(w: IndiscernibleWitness, size: int, count: int, seed: int = 0) -> list:
    """Order-preserving injections between size-element sets of classes, as partial permutations."""
    n = w.class_count_bound
    ranked = sorted(range(n), key=lambda c: sum(1 for d in range(n) if w.order(w.classes[d][0], w.classes[c][0])))
    subsets = list(itertools.combinations(ranked, size))
    pairs = [(a, b) for a in subsets for b in subsets]
    rng = random.Random(seed)
    if count < len(pairs):
        pairs = sorted(rng.sample(pairs, count))
    return [dict(zip(a, b)) for a, b in pairs]


def _member_map(w: IndiscernibleWitness, perm: dict) -> dict:
    """Send the t-th member of class c to the t-th member of class perm(c), entrywise."""
    m: dict = {}
    for c, d in perm.items():
        for src, tgt in zip(w.classes[c], w.classes[d]):
            for a, b in zip(_entries(src), _entries(tgt)):
                if m.get(a, b) != b:
                    raise BackAndForthFailure(a, f"member map is not a function at {a}")
                m[a] = b
    if len(set(m.values())) != len(m):
        raise BackAndForthFailure(next(iter(m)), "member map is not injective")
    return m


def _entries(t) -> tuple:
    return tuple(t) if isinstance(t, tuple) else (t,)


def check_absolute_indiscernibility(A: Structure, w: IndiscernibleWitness, perm_samples=120, depth: int = 6,
                                    seed: int = 0, order: bool = False, negative: bool = False,
                                    report: Optional[Report] = None, pool_tries: int = 3) -> Report:
    """Each sampled class permutation, applied to members, extends by back-and-forth to `depth`."""
    report = report if report is not None else Report("indiscernibles")
    if isinstance(perm_samples, int):
        if order:
            if w.order is None:
                raise RejectedInput("the order variant needs an order on the classes")
            perms = order_preserving_maps(w, min(2, w.class_count_bound), perm_samples, seed)
        else:
            perms = [dict(enumerate(p)) for p in class_permutations(w.class_count_bound, perm_samples, seed)]
    else:
        perms = [dict(enumerate(p)) if not isinstance(p, dict) else p for p in perm_samples]
    for perm in perms:
        instance = {"structure": A.name, "interp": w.interpretation, "perm": sorted(perm.items())}
        try:
            m = _member_map(w, perm)
        except BackAndForthFailure as exc:
            report.add("extends", instance, False, {"blocking": exc.blocking}, negative)
            continue
        ok, witness = _extends(A, m, depth, pool_tries)
        report.add("extends", instance, ok, witness, negative)
    return report


def _extends(A: Structure, m: dict, depth: int, tries: int):
    """(verdict, witness): a violation of the initial map is final; a search block is retried on larger pools."""
    p = PartialAutomorphism(A, PartialInjection.from_map(m))
    bad = p.violations()
    if bad:
        return False, {"blocking": bad[0][1][0], "violation": bad[0]}
    mentioned = list(m) + list(m.values())
    pool = (max(mentioned) + 1 if mentioned else 0) + 2 * depth + 4
    blocked = None
    for _ in range(tries):
        try:
            extend_partial_automorphism(A, p, (), depth, pool)
            return True, None
        except BackAndForthFailure as exc:
            blocked = {"blocking": exc.blocking, "pool": pool}
        except UndecidedAtDepth as exc:
            return None, {"undecided": str(exc), "pool": pool}
        pool *= 2
    return False, blocked
