"""The forcing language: atoms, finite and countable connectives, negation, rank, truth."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .core import PartialInjection, RejectedInput, Structure


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class CompAtom:
    """g_i^{-1}(g_j(m)) = n, or its negation when pos is False."""
    i: int
    j: int
    m: int
    n: int
    pos: bool = True


@dataclass(frozen=True)
class RelAtom:
    """R holds (or fails, when pos is False) of args in the pullback along g_i."""
    i: int
    symbol: str
    args: tuple
    pos: bool = True


@dataclass(frozen=True)
class ValAtom:
    """g_i(m) = n, or its negation."""
    i: int
    m: int
    n: int
    pos: bool = True


@dataclass(frozen=True)
class FinAnd:
    items: tuple = ()


@dataclass(frozen=True)
class FinOr:
    items: tuple = ()


class Family:
    """A program enumerating the members of a countable connective.

    `size` is None for an infinite family. A family may also provide `locate`,
    an exact decision procedure for its disjunction on finite data.
    """

    size: Optional[int] = None
    located: bool = False
    label: str = "family"

    def item(self, n: int):
        raise NotImplementedError

    def locate(self, view, base):
        return None

    def __repr__(self):
        return self.label


class IndexedFamily(Family):
    def __init__(self, fn: Callable[[int], object], size: Optional[int] = None, label: str = "family"):
        self.fn = fn
        self.size = size
        self.label = label
        self._cache: dict[int, object] = {}

    def item(self, n):
        if self.size is not None and n >= self.size:
            return None
        if n not in self._cache:
            self._cache[n] = self.fn(n)
        return self._cache[n]


class ListFamily(Family):
    def __init__(self, items: Sequence, label: str = "list"):
        self.items = tuple(items)
        self.size = len(self.items)
        self.label = label

    def item(self, n):
        return self.items[n] if n < self.size else None


class ValueProgression(Family):
    """The atoms g_i(m) = step*n + offset for n in omega, located by reading g_i(m)."""

    located = True

    def __init__(self, i: int, m: int, step: int, offset: int, label: Optional[str] = None):
        if step < 1:
            raise RejectedInput("a value progression needs a positive step")
        self.i, self.m, self.step, self.offset = i, m, step, offset
        self.label = label or f"g{i}({m}) in {step}n+{offset}"

    def item(self, n):
        return ValAtom(self.i, self.m, self.step * n + self.offset)

    def locate(self, view, base):
        x = view.val(self.i, self.m)
        if x is None:
            return None
        return x >= self.offset and (x - self.offset) % self.step == 0


@dataclass(frozen=True)
class CountOr:
    source: Family
    flip: bool = False

    def member(self, n):
        f = self.source.item(n)
        if f is None:
            return None
        return negat(f) if self.flip else f


@dataclass(frozen=True)
class CountAnd:
    source: Family
    flip: bool = False

    def member(self, n):
        f = self.source.item(n)
        if f is None:
            return None
        return negat(f) if self.flip else f


Formula = Union[CompAtom, RelAtom, ValAtom, FinAnd, FinOr, CountOr, CountAnd]
ATOMS = (CompAtom, RelAtom, ValAtom)
TOP = FinAnd(())
BOTTOM = FinOr(())


def is_countable(f) -> bool:
    return isinstance(f, (CountOr, CountAnd))


def members(f, limit: int):
    """The first `limit` members of a countable node (fewer if the family is finite)."""
    out = []
    for n in range(limit):
        m = f.member(n)
        if m is None:
            break
        out.append(m)
    return out


def located_polarity(f) -> Optional[bool]:
    """True if f is the located disjunction, False if its negation, None otherwise."""
    if not f.source.located:
        return None
    if isinstance(f, CountOr) and not f.flip:
        return True
    if isinstance(f, CountAnd) and f.flip:
        return False
    return None


# ---------------------------------------------------------------- negation

def negat(f):
    if isinstance(f, CompAtom):
        return CompAtom(f.i, f.j, f.m, f.n, not f.pos)
    if isinstance(f, RelAtom):
        return RelAtom(f.i, f.symbol, f.args, not f.pos)
    if isinstance(f, ValAtom):
        return ValAtom(f.i, f.m, f.n, not f.pos)
    if isinstance(f, FinAnd):
        return FinOr(tuple(negat(x) for x in f.items))
    if isinstance(f, FinOr):
        return FinAnd(tuple(negat(x) for x in f.items))
    if isinstance(f, CountOr):
        return CountAnd(f.source, not f.flip)
    if isinstance(f, CountAnd):
        return CountOr(f.source, not f.flip)
    raise RejectedInput(f"not a formula: {f!r}")


# ---------------------------------------------------------------- classification

@dataclass(frozen=True)
class ComplexityTag:
    rank: int
    side: str  # "Sigma" | "Pi" | "Delta"

    def dual(self) -> "ComplexityTag":
        return ComplexityTag(self.rank, {"Sigma": "Pi", "Pi": "Sigma", "Delta": "Delta"}[self.side])

    def __str__(self):
        return f"{self.side}{self.rank}"


def classify(f, probe: int = 3) -> ComplexityTag:
    """Rank counts alternations of countable connectives; side is the outermost one."""
    if isinstance(f, ATOMS):
        return ComplexityTag(0, "Delta")
    if isinstance(f, (FinAnd, FinOr)):
        tags = [classify(x, probe) for x in f.items]
        top = max((t.rank for t in tags), default=0)
        if top == 0:
            return ComplexityTag(0, "Delta")
        sides = {t.side for t in tags if t.rank == top}
        if len(sides) == 1:
            return ComplexityTag(top, sides.pop())
        return ComplexityTag(top + 1, "Pi" if isinstance(f, FinAnd) else "Sigma")
    side = "Sigma" if isinstance(f, CountOr) else "Pi"
    rank = 1
    if getattr(f.source, "finitary_members", False):
        return ComplexityTag(1, side)
    for m in members(f, probe):
        t = classify(m, probe)
        if t.rank == 0:
            continue
        rank = max(rank, t.rank + (0 if t.side == side else 1))
    return ComplexityTag(rank, side)


# ---------------------------------------------------------------- syntactic scans

def scan(f, depth: int, _acc=None) -> dict:
    """Largest index, value and generic mentioned in f, probing countable members up to depth."""
    acc = _acc if _acc is not None else {"index": -1, "value": -1, "generic": 0, "val_atoms": False,
                                         "generics": set()}
    if isinstance(f, CompAtom):
        acc["index"] = max(acc["index"], f.m, f.n)
        acc["generic"] = max(acc["generic"], f.i, f.j)
        acc["generics"].update((f.i, f.j))
    elif isinstance(f, RelAtom):
        acc["index"] = max(acc["index"], *f.args) if f.args else acc["index"]
        acc["generic"] = max(acc["generic"], f.i)
        acc["generics"].add(f.i)
    elif isinstance(f, ValAtom):
        acc["index"] = max(acc["index"], f.m)
        acc["value"] = max(acc["value"], f.n)
        acc["generic"] = max(acc["generic"], f.i)
        acc["generics"].add(f.i)
        acc["val_atoms"] = True
    elif isinstance(f, (FinAnd, FinOr)):
        for x in f.items:
            scan(x, depth, acc)
    else:
        src = f.source
        if hasattr(src, "scan_info"):
            info = src.scan_info()
            for k in ("index", "value", "generic"):
                acc[k] = max(acc[k], info.get(k, -1))
            acc["val_atoms"] = acc["val_atoms"] or info.get("val_atoms", False)
            acc["generics"].update(info.get("generics", ()))
        else:
            for m in members(f, depth):
                scan(m, depth, acc)
    return acc


def generic_count(f, depth: int = 4) -> int:
    return scan(f, depth)["generic"]


def is_restricted(f, depth: int = 4) -> bool:
    return not scan(f, depth)["val_atoms"]


# ---------------------------------------------------------------- finite views of generics

class TupleView:
    """Finite approximations g_1..g_l given as injective tuples (prefixes)."""

    def __init__(self, parts: Sequence[Sequence[int]]):
        self.parts = tuple(tuple(p) for p in parts)
        self._index = [{x: k for k, x in enumerate(p)} for p in self.parts]

    def val(self, i: int, m: int):
        p = self.parts[i - 1]
        return p[m] if 0 <= m < len(p) else None

    def pre(self, i: int, x: int):
        return self._index[i - 1].get(x)


class MapView:
    """Finite approximations given as arbitrary partial injections."""

    def __init__(self, gs: Sequence[PartialInjection]):
        self.gs = tuple(gs)

    def val(self, i: int, m: int):
        return self.gs[i - 1].get(m)

    def pre(self, i: int, x: int):
        return self.gs[i - 1].preimage(x)


def as_view(gs):
    if isinstance(gs, (TupleView, MapView)):
        return gs
    gs = list(gs)
    if all(isinstance(g, PartialInjection) for g in gs):
        return MapView(gs)
    return TupleView(gs)


# ---------------------------------------------------------------- truth

def _atom_truth(f, v, base: Optional[Structure]):
    if isinstance(f, ValAtom):
        x = v.val(f.i, f.m)
        if x is not None:
            t = x == f.n
        elif v.pre(f.i, f.n) is not None:
            t = False
        else:
            return None
        return t if f.pos else not t
    if isinstance(f, CompAtom):
        x = v.val(f.j, f.m)
        y = v.val(f.i, f.n)
        if x is not None and y is not None:
            t = x == y
        elif y is not None and v.pre(f.j, y) is not None:
            t = False
        elif x is not None and v.pre(f.i, x) is not None:
            t = False
        else:
            return None
        return t if f.pos else not t
    vals = [v.val(f.i, a) for a in f.args]
    if any(x is None for x in vals):
        return None
    if base is None:
        raise RejectedInput("relation atoms need a base structure")
    t = base.holds(f.symbol, vals)
    return t if f.pos else not t


def holds(f, gs, budget: int = 8, base: Optional[Structure] = None):
    """Three-valued truth of f under finite approximations gs (True, False or None)."""
    return _holds(f, as_view(gs), budget, base)


def _holds(f, v, budget, base):
    if isinstance(f, ATOMS):
        return _atom_truth(f, v, base)
    if isinstance(f, (FinAnd, FinOr)):
        want = isinstance(f, FinOr)
        unknown = False
        for x in f.items:
            t = _holds(x, v, budget, base)
            if t is want:
                return want
            if t is None:
                unknown = True
        return None if unknown else (not want)
    pol = located_polarity(f)
    if pol is not None:
        t = f.source.locate(v, base)
        return None if t is None else (t if pol else not t)
    want = isinstance(f, CountOr)
    unknown = False
    n = 0
    while n < budget:
        m = f.member(n)
        if m is None:
            break
        t = _holds(m, v, budget, base)
        if t is want:
            return want
        if t is None:
            unknown = True
        n += 1
    else:
        if f.source.size is None or f.source.size > budget:
            unknown = True
    return None if unknown else (not want)
