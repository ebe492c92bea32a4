"""Relational signatures, structures over omega, injections and back-and-forth."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

Tuple = tuple  # alias used in annotations for element tuples


class InsufficientOracle(Exception):
    """A query needed a value outside the finite part of a map."""

    def __init__(self, point):
        super().__init__(f"insufficient oracle at {point!r}")
        self.point = point


class RejectedInput(ValueError):
    pass


class BackAndForthFailure(Exception):
    def __init__(self, blocking, message: str = ""):
        super().__init__(message or f"no extension: blocked at element {blocking}")
        self.blocking = blocking


class UndecidedAtDepth(Exception):
    pass


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class Signature:
    symbols: tuple[str, ...] = ()
    arities: tuple[int, ...] = ()

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise RejectedInput("duplicate relation symbol")
        if len(self.symbols) != len(self.arities):
            raise RejectedInput("every symbol needs an arity")
        if any(a < 1 for a in self.arities):
            raise RejectedInput("arities must be positive")

    @classmethod
    def of(cls, **arity: int) -> "Signature":
        return cls(tuple(arity), tuple(arity.values()))

    def arity(self, symbol: str) -> int:
        try:
            return self.arities[self.symbols.index(symbol)]
        except ValueError:
            raise RejectedInput(f"unknown relation symbol {symbol!r}") from None

    def items(self):
        return zip(self.symbols, self.arities)


@dataclass(eq=False)
class Structure:
    """A countable relational structure with domain omega, given by its atomic diagram."""

    name: str
    signature: Signature
    diagram: Callable[[str, tuple], bool]
    universe_hint: Optional[int] = None

    def holds(self, symbol: str, args: Sequence[int]) -> bool:
        return eval_atomic(self, symbol, tuple(args))

    # oracle protocol used by functor programs
    def rel(self, symbol: str, args: Sequence[int]) -> bool:
        return eval_atomic(self, symbol, tuple(args))

    def __repr__(self):
        return f"Structure({self.name})"


def eval_atomic(s: Structure, r: str, t: tuple) -> bool:
    if len(t) != s.signature.arity(r):
        raise RejectedInput(f"{r} expects {s.signature.arity(r)} arguments, got {len(t)}")
    return bool(s.diagram(r, t))


# ---------------------------------------------------------------- enumerations

def z_of(n: int) -> int:
    """Integer with index n in the enumeration 0, 1, -1, 2, -2, ..."""
    return (n + 1) // 2 if n % 2 else -(n // 2)


def z_index(z: int) -> int:
    return 2 * z - 1 if z > 0 else -2 * z


def _cw_of(n: int) -> Fraction:
    # n >= 1; Calkin-Wilf tree in breadth-first order
    a, b = 1, 1
    for bit in bin(n)[3:]:
        if bit == "0":
            a, b = a, a + b
        else:
            a, b = a + b, b
    return Fraction(a, b)


def _cw_index(q: Fraction) -> int:
    a, b = q.numerator, q.denominator
    bits = []
    while (a, b) != (1, 1):
        if a < b:
            bits.append("0")
            b -= a
        else:
            bits.append("1")
            a -= b
    return int("1" + "".join(reversed(bits)), 2)


def q_of(n: int) -> Fraction:
    """Rational with index n: 0, then each positive Calkin-Wilf rational followed by its negative."""
    if n == 0:
        return Fraction(0)
    k = (n + 1) // 2
    r = _cw_of(k)
    return r if n % 2 else -r


def q_index(q) -> int:
    q = Fraction(q)
    if q == 0:
        return 0
    k = _cw_index(abs(q))
    return 2 * k - 1 if q > 0 else 2 * k


# ---------------------------------------------------------------- built-ins

def pure_set() -> Structure:
    def diagram(r, t):
        raise RejectedInput("the pure set has no relations")
    return Structure("pureset", Signature(), diagram, universe_hint=3)


def dense_order() -> Structure:
    sig = Signature.of(Lt=2)
    return Structure("dense", sig, lambda r, t: q_of(t[0]) < q_of(t[1]), universe_hint=4)


def omega_order() -> Structure:
    sig = Signature.of(Lt=2)
    return Structure("omega", sig, lambda r, t: t[0] < t[1], universe_hint=None)


def z_ring() -> Structure:
    sig = Signature.of(Add=3, Mul=3)

    def diagram(r, t):
        x, y, z = (z_of(v) for v in t)
        return x + y == z if r == "Add" else x * y == z
    return Structure("zring", sig, diagram, universe_hint=None)


def q_field() -> Structure:
    sig = Signature.of(Add=3, Mul=3)

    def diagram(r, t):
        x, y, z = (q_of(v) for v in t)
        return x + y == z if r == "Add" else x * y == z
    return Structure("qfield", sig, diagram, universe_hint=None)


def matched_pairs() -> Structure:
    sig = Signature.of(Edge=2)
    return Structure("pairs", sig, lambda r, t: t[0] != t[1] and t[0] // 2 == t[1] // 2,
                     universe_hint=4)


def pair_classes() -> Structure:
    """Two sorts coded on omega: 3k is the k-th pair, 3k+1 and 3k+2 are its members."""
    sig = Signature.of(Cls=1, In=2)

    def diagram(r, t):
        if r == "Cls":
            return t[0] % 3 == 0
        x, p = t
        return p % 3 == 0 and x % 3 != 0 and x // 3 == p // 3
    return Structure("pairclasses", sig, diagram, universe_hint=6)


def table_structure(name: str, signature: Signature, facts: Iterable[tuple[str, tuple]]) -> Structure:
    table = {(r, tuple(t)) for r, t in facts}
    for r, t in table:
        if len(t) != signature.arity(r):
            raise RejectedInput(f"fact {r}{t} has wrong arity")
    top = max((max(t) for _, t in table if t), default=-1)
    return Structure(name, signature, lambda r, t: (r, t) in table, universe_hint=top + 3)


BUILTINS: dict[str, Callable[[], Structure]] = {
    "pureset": pure_set,
    "dense": dense_order,
    "omega": omega_order,
    "zring": z_ring,
    "qfield": q_field,
    "pairs": matched_pairs,
    "pairclasses": pair_classes,
}


# ---------------------------------------------------------------- maps

@dataclass(frozen=True)
class PartialInjection:
    """A finite injective map from omega to omega."""

    pairs: tuple[tuple[int, int], ...] = ()
    _fwd: dict = field(default=None, compare=False, hash=False, repr=False)
    _inv: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        fwd = dict(pairs)
        if len(fwd) != len(pairs):
            raise RejectedInput("partial injection is not functional")
        inv = {b: a for a, b in pairs}
        if len(inv) != len(pairs):
            raise RejectedInput("partial injection is not injective")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_fwd", fwd)
        object.__setattr__(self, "_inv", inv)

    @classmethod
    def from_map(cls, m: Mapping[int, int]) -> "PartialInjection":
        return cls(tuple(m.items()))

    @classmethod
    def from_tuple(cls, t: Sequence[int]) -> "PartialInjection":
        return cls(tuple(enumerate(t)))

    @classmethod
    def identity(cls, n: int) -> "PartialInjection":
        return cls(tuple((i, i) for i in range(n)))

    def __call__(self, a: int) -> int:
        try:
            return self._fwd[a]
        except KeyError:
            raise InsufficientOracle(a) from None

    def get(self, a: int):
        return self._fwd.get(a)

    def preimage(self, b: int):
        return self._inv.get(b)

    def domain(self) -> tuple[int, ...]:
        return tuple(self._fwd)

    def range(self) -> tuple[int, ...]:
        return tuple(sorted(self._inv))

    def inverse(self) -> "PartialInjection":
        return PartialInjection(tuple((b, a) for a, b in self.pairs))

    def compose(self, other: "PartialInjection") -> "PartialInjection":
        """self after other, defined where both are."""
        return PartialInjection(tuple((a, self._fwd[b]) for a, b in other.pairs if b in self._fwd))

    def extend(self, a: int, b: int) -> "PartialInjection":
        return PartialInjection(self.pairs + ((a, b),))

    def as_dict(self) -> dict:
        return dict(self._fwd)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class FinitePerm:
    """A permutation of omega moving finitely many points; a total bijection."""

    moves: tuple[tuple[int, int], ...] = ()
    _fwd: dict = field(default=None, compare=False, hash=False, repr=False)
    _inv: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        fwd = {int(a): int(b) for a, b in self.moves if a != b}
        if sorted(fwd) != sorted(fwd.values()):
            raise RejectedInput("finite permutation must permute its support")
        object.__setattr__(self, "moves", tuple(sorted(fwd.items())))
        object.__setattr__(self, "_fwd", fwd)
        object.__setattr__(self, "_inv", {b: a for a, b in fwd.items()})

    @classmethod
    def from_map(cls, m: Mapping[int, int]) -> "FinitePerm":
        return cls(tuple(m.items()))

    @classmethod
    def swap(cls, a: int, b: int) -> "FinitePerm":
        return cls(((a, b), (b, a)))

    def __call__(self, a: int) -> int:
        return self._fwd.get(a, a)

    def inv(self, b: int) -> int:
        return self._inv.get(b, b)

    def inverse(self) -> "FinitePerm":
        return FinitePerm(tuple((b, a) for a, b in self.moves))

    def compose(self, other: "FinitePerm") -> "FinitePerm":
        """self after other."""
        pts = set(self._fwd) | set(other._fwd)
        return FinitePerm(tuple((a, self(other(a))) for a in pts))

    def support(self) -> tuple[int, ...]:
        return tuple(self._fwd)


def pullback(s: Structure, g: Callable[[int], int], name: Optional[str] = None) -> Structure:
    """The structure whose relations are read through g into s."""

    def diagram(r, t):
        return s.diagram(r, tuple(g(a) for a in t))
    return Structure(name or f"{s.name}_g", s.signature, diagram, s.universe_hint)


# ---------------------------------------------------------------- automorphisms

@dataclass(frozen=True)
class PartialAutomorphism:
    base: Structure
    map: PartialInjection

    def violations(self) -> list[tuple[str, tuple]]:
        return _violations(self.base, self.map.as_dict())

    def is_valid(self) -> bool:
        return not self.violations()


def _violations(s: Structure, m: dict) -> list[tuple[str, tuple]]:
    dom = sorted(m)
    bad = []
    for r, k in s.signature.items():
        for t in itertools.product(dom, repeat=k):
            if s.diagram(r, t) != s.diagram(r, tuple(m[a] for a in t)):
                bad.append((r, t))
    return bad


def _tuples_through(dom: list, a: int, k: int):
    """All k-tuples over dom + [a] that mention a."""
    for mask in range(1, 1 << k):
        slots = [[a] if mask >> pos & 1 else dom for pos in range(k)]
        yield from itertools.product(*slots)


def _consistent(s: Structure, m: dict, a: int, b: int) -> bool:
    if a in m or b in m.values():
        return False
    img = dict(m)
    img[a] = b
    for r, k in s.signature.items():
        for t in _tuples_through(list(m), a, k):
            if s.diagram(r, t) != s.diagram(r, tuple(img[x] for x in t)):
                return False
    return True


def extend_partial_automorphism(s: Structure, p: PartialAutomorphism, targets: Iterable[int] = (),
                                depth: int = 2, pool: Optional[int] = None,
                                node_budget: int = 200_000) -> PartialAutomorphism:
    """Extend p to cover targets, certifying `depth` further back-and-forth rounds.

    The returned map covers exactly dom(p) and the targets; the extra rounds only
    witness that the extension can be continued. Candidates are drawn from range(pool).
    """
    start = p.map.as_dict()
    bad = _violations(s, start)
    if bad:
        raise BackAndForthFailure(bad[0][1][0], f"not a partial automorphism at {bad[0]}")
    targets = sorted(set(targets) - set(start))
    mentioned = list(start) + list(start.values()) + targets
    if pool is None:
        pool = (max(mentioned) + 1 if mentioned else 0) + 2 * depth + 2 * len(targets) + 4
    nodes = 0
    first_block: list = []

    def steps_from(m):
        # dynamic step list: targets first, then alternating forth/back rounds
        for a in targets:
            if a not in m:
                return ("forth", a)
        return None

    def search(m: dict, rounds_left: int, phase: str):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise UndecidedAtDepth(f"search budget exhausted after {node_budget} nodes")
        st = steps_from(m)
        if st is None:
            if rounds_left == 0:
                return m
            if phase == "forth":
                x = next(i for i in itertools.count() if i not in m)
                st = ("forth", x)
            else:
                used = set(m.values())
                x = next(i for i in itertools.count() if i not in used)
                st = ("back", x)
            nxt_rounds, nxt_phase = (rounds_left, "back") if phase == "forth" else (rounds_left - 1, "forth")
        else:
            nxt_rounds, nxt_phase = rounds_left, phase
        kind, x = st
        found_any = False
        for c in range(pool):
            a, b = (x, c) if kind == "forth" else (c, x)
            if _consistent(s, m, a, b):
                found_any = True
                m2 = dict(m)
                m2[a] = b
                res = search(m2, nxt_rounds, nxt_phase)
                if res is not None:
                    return res
        if not found_any and not first_block:
            first_block.append(x)
        return None

    res = search(dict(start), depth, "forth")
    if res is None:
        raise BackAndForthFailure(first_block[0] if first_block else None)
    keep = set(start) | set(targets)
    return PartialAutomorphism(s, PartialInjection.from_map({a: res[a] for a in keep}))
