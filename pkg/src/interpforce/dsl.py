"""Textual front ends: declarations of signatures, structures, interpretations and forcing formulas.

Declarations, one per statement:

    rel Edge 2
    structure G table { Edge(0,1) Edge(1,0) }
    structure Q builtin dense
    formula f = (or* k (val 1 0 k =))
    interp Pairs on G { dom[1] = (true); sim = (or (= x0 y0) (Edge x0 y0)); }

Forcing formulas are prefix s-expressions:
    (comp i j m n =)  (comp i j m n !=)  (val i m n =)  (rel i Sym t..)  (not-rel i Sym t..)
    (and f..)  (or f..)  (neg f)  (true)  (false)  (or* k f)  (and* k f)  (or* k N f)
    (stmt functor kind arg..)   with terms: integers, bound names, (+ t..), (* t..), (- t t)

Interpretation formulas speak about the source structure. The entries of the
argument tuples are x0 x1 .. (first), y0 .. (second), z0 .. (third), u0, v0, w0;
(= s t), (!= s t), (Sym s ..), (not f), (and f..), (or f..), (exists e f), (forall e f).
Quantifiers range over an initial segment of the domain of size QUANTIFIER_CAP.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Optional

from .core import BUILTINS, RejectedInput, Signature, Structure, table_structure
from .interp import Interpretation
from .logic import (BOTTOM, TOP, CompAtom, ComplexityTag, CountAnd, CountOr, FinAnd, FinOr, IndexedFamily, RelAtom,
                    ValAtom, ValueProgression, negat)

REGISTRY_ENV = "INTERPFORCE_REGISTRY"
QUANTIFIER_CAP = 64
ARG_LETTERS = "xyzuvw"


class DSLError(RejectedInput):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col, self.detail = line, col, message


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int

    @property
    def is_int(self) -> bool:
        return re.fullmatch(r"-?\d+", self.text) is not None


_PUNCT = "(){}[];,"


def tokenize(text: str) -> list:
    out = []
    for ln, line in enumerate(text.splitlines(), start=1):
        k = 0
        while k < len(line):
            ch = line[k]
            if ch == "#":
                break
            if ch.isspace():
                k += 1
                continue
            if ch in _PUNCT:
                out.append(Token(ch, ln, k + 1))
                k += 1
                continue
            start = k
            while k < len(line) and not line[k].isspace() and line[k] not in _PUNCT and line[k] != "#":
                k += 1
            out.append(Token(line[start:k], ln, start + 1))
    return out


# ---------------------------------------------------------------- s-expressions

def _parse_sexpr(toks: list, pos: int):
    if pos >= len(toks):
        last = toks[-1] if toks else Token("", 1, 1)
        raise DSLError("unexpected end of input", last.line, last.col + len(last.text))
    t = toks[pos]
    if t.text == "(":
        items, pos = [], pos + 1
        while True:
            if pos >= len(toks):
                raise DSLError("unclosed parenthesis", t.line, t.col)
            if toks[pos].text == ")":
                return _Node(items, t), pos + 1
            item, pos = _parse_sexpr(toks, pos)
            items.append(item)
    if t.text == ")":
        raise DSLError("unexpected ')'", t.line, t.col)
    return t, pos + 1


@dataclass
class _Node:
    items: list
    at: Token


def parse_sexpr(text: str):
    toks = tokenize(text)
    node, pos = _parse_sexpr(toks, 0)
    if pos != len(toks):
        raise DSLError("trailing input", toks[pos].line, toks[pos].col)
    return node


def _where(x) -> Token:
    return x.at if isinstance(x, _Node) else x


def _head(node) -> str:
    if not isinstance(node, _Node) or not node.items or isinstance(node.items[0], _Node):
        t = _where(node)
        raise DSLError("expected a form (head ...)", t.line, t.col)
    return node.items[0].text


# ---------------------------------------------------------------- forcing formulas

def _term(x, env: dict) -> int:
    if isinstance(x, Token):
        if x.is_int:
            return int(x.text)
        if x.text in env:
            return env[x.text]
        raise DSLError(f"unbound name {x.text!r}", x.line, x.col)
    op = _head(x)
    vals = [_term(a, env) for a in x.items[1:]]
    if op == "+":
        return sum(vals)
    if op == "*":
        out = 1
        for v in vals:
            out *= v
        return out
    if op == "-" and len(vals) == 2:
        return vals[0] - vals[1]
    raise DSLError(f"unknown arithmetic form {op!r}", x.at.line, x.at.col)


def _polarity(tok) -> bool:
    if isinstance(tok, Token) and tok.text in ("=", "!="):
        return tok.text == "="
    t = _where(tok)
    raise DSLError("expected '=' or '!='", t.line, t.col)


def _arity_check(node, n: int, what: str):
    if len(node.items) - 1 != n:
        raise DSLError(f"{what} takes {n} arguments, got {len(node.items) - 1}", node.at.line, node.at.col)


@dataclass
class FormulaContext:
    """What a formula may refer to: a source structure (for `stmt`) and the signature (for `rel`)."""
    signature: Optional[Signature] = None
    structure: Optional[Structure] = None


def compile_formula(node, env: Optional[dict] = None, ctx: Optional[FormulaContext] = None):
    env = env or {}
    ctx = ctx or FormulaContext()
    if isinstance(node, Token):
        raise DSLError(f"expected a formula, got {node.text!r}", node.line, node.col)
    op, args = _head(node), node.items[1:]
    if op == "true":
        return TOP
    if op == "false":
        return BOTTOM
    if op == "comp":
        _arity_check(node, 5, "comp")
        i, j, m, n = (_term(a, env) for a in args[:4])
        return CompAtom(i, j, m, n, _polarity(args[4]))
    if op == "val":
        _arity_check(node, 4, "val")
        i, m, n = (_term(a, env) for a in args[:3])
        return ValAtom(i, m, n, _polarity(args[3]))
    if op in ("rel", "not-rel"):
        if len(args) < 2 or not isinstance(args[1], Token):
            raise DSLError(f"{op} needs a generic index and a symbol", node.at.line, node.at.col)
        sym = args[1].text
        if ctx.signature is not None:
            try:
                k = ctx.signature.arity(sym)
            except RejectedInput:
                raise DSLError(f"unknown relation symbol {sym!r}", args[1].line, args[1].col) from None
            if len(args) - 2 != k:
                raise DSLError(f"{sym} has arity {k}", node.at.line, node.at.col)
        return RelAtom(_term(args[0], env), sym, tuple(_term(a, env) for a in args[2:]), op == "rel")
    if op in ("and", "or"):
        items = tuple(compile_formula(a, env, ctx) for a in args)
        return FinAnd(items) if op == "and" else FinOr(items)
    if op == "neg":
        _arity_check(node, 1, "neg")
        return negat(compile_formula(args[0], env, ctx))
    if op in ("or*", "and*"):
        if len(args) not in (2, 3) or not isinstance(args[0], Token) or args[0].is_int:
            raise DSLError(f"{op} takes a variable, an optional size and a body", node.at.line, node.at.col)
        var, body = args[0].text, args[-1]
        size = _term(args[1], env) if len(args) == 3 else None
        compile_formula(body, {**env, var: 0}, ctx)   # surface errors now, not on first use
        prog = _progression(body, env, var, op) if size is None else None
        if prog is not None:
            return CountOr(prog) if op == "or*" else CountAnd(prog, True)
        fam = IndexedFamily(lambda n, _b=body, _e=env, _v=var: compile_formula(_b, {**_e, _v: n}, ctx), size,
                            label=f"{op} {var}")
        return CountOr(fam) if op == "or*" else CountAnd(fam)
    if op == "stmt":
        return _statement(node, env, ctx)
    raise DSLError(f"unknown formula form {op!r}", node.at.line, node.at.col)


def _affine(x, env: dict, var: str):
    """(slope, offset) of an arithmetic term in var, or None if it is not affine."""
    if isinstance(x, Token):
        if x.is_int:
            return 0, int(x.text)
        if x.text == var:
            return 1, 0
        return 0, env[x.text]
    op = _head(x)
    parts = [_affine(a, env, var) for a in x.items[1:]]
    if any(p is None for p in parts):
        return None
    if op == "+":
        return sum(p[0] for p in parts), sum(p[1] for p in parts)
    if op == "-" and len(parts) == 2:
        return parts[0][0] - parts[1][0], parts[0][1] - parts[1][1]
    if op == "*":
        slope, offset = 0, 1
        for a, b in parts:
            if slope and a:
                return None
            slope, offset = slope * b + a * offset, offset * b
        return slope, offset
    return None


def _progression(body, env: dict, var: str, op: str):
    """A located family when the body is g_i(m) = step*var + offset with positive step."""
    if not isinstance(body, _Node) or _head(body) != "val" or len(body.items) != 5:
        return None
    want = "=" if op == "or*" else "!="
    if not isinstance(body.items[4], Token) or body.items[4].text != want:
        return None
    coords = [_affine(a, env, var) for a in body.items[1:4]]
    if any(c is None for c in coords) or coords[0][0] or coords[1][0] or coords[2][0] < 1:
        return None
    return ValueProgression(coords[0][1], coords[1][1], coords[2][0], coords[2][1], label=f"{op} {var}")


def _statement(node, env, ctx: FormulaContext):
    from .functors import functor_by_name
    from .statements import compile_functor_statement
    args = node.items[1:]
    if len(args) < 2 or not all(isinstance(a, Token) for a in args[:2]):
        raise DSLError("stmt takes a functor name, a kind and arguments", node.at.line, node.at.col)
    try:
        F = functor_by_name(args[0].text, ctx.structure)
    except RejectedInput as exc:
        raise DSLError(str(exc), args[0].line, args[0].col) from None
    kind, rest = args[1].text, args[2:]
    try:
        if kind == "morphism-value":
            i, j = (_term(a, env) for a in rest)
            return compile_functor_statement(F, kind, i=i, j=j)
        if kind == "structure-fact":
            sym, truth = rest[0].text, rest[1].text == "true"
            return compile_functor_statement(F, kind, symbol=sym, args=tuple(_term(a, env) for a in rest[2:]),
                                             truth=truth)
        if kind in ("inverse-law", "composition-law"):
            return compile_functor_statement(F, kind)
    except (ValueError, IndexError, AttributeError):
        raise DSLError(f"malformed arguments for {kind}", node.at.line, node.at.col) from None
    raise DSLError(f"unknown statement kind {kind!r}", args[1].line, args[1].col)


def parse_formula(text: str, ctx: Optional[FormulaContext] = None):
    return compile_formula(parse_sexpr(text), {}, ctx)


# ---------------------------------------------------------------- interpretation formulas

def _check_structure_formula(node, sig: Signature, bound: frozenset, nargs: int):
    """Static checks so that errors carry positions; evaluation is then total."""
    if isinstance(node, Token):
        raise DSLError(f"expected a formula, got {node.text!r}", node.line, node.col)
    op, args = _head(node), node.items[1:]
    if op in ("true", "false"):
        return
    if op in ("not",):
        _arity_check(node, 1, op)
        return _check_structure_formula(args[0], sig, bound, nargs)
    if op in ("and", "or"):
        for a in args:
            _check_structure_formula(a, sig, bound, nargs)
        return
    if op in ("exists", "forall"):
        if len(args) != 2 or not isinstance(args[0], Token):
            raise DSLError(f"{op} takes a variable and a body", node.at.line, node.at.col)
        return _check_structure_formula(args[1], sig, bound | {args[0].text}, nargs)
    if op in ("=", "!="):
        _arity_check(node, 2, op)
    else:
        try:
            k = sig.arity(op)
        except RejectedInput:
            raise DSLError(f"unknown relation symbol {op!r}", node.items[0].line, node.items[0].col) from None
        _arity_check(node, k, op)
    for a in args:
        if not isinstance(a, Token):
            raise DSLError("terms are variables", a.at.line, a.at.col)
        if a.text in bound:
            continue
        m = re.fullmatch(r"([a-z])(\d+)", a.text)
        if not m or m.group(1) not in ARG_LETTERS or ARG_LETTERS.index(m.group(1)) >= nargs:
            raise DSLError(f"unbound variable {a.text!r}", a.line, a.col)


class _Missing(Exception):
    pass


def _lookup(tok: Token, env: dict, args: tuple) -> int:
    if tok.text in env:
        return env[tok.text]
    letter, idx = tok.text[0], int(tok.text[1:])
    t = args[ARG_LETTERS.index(letter)]
    if idx >= len(t):
        raise _Missing(tok.text)
    return t[idx]


def _eval_structure_formula(node, X, env: dict, args: tuple) -> bool:
    op, rest = node.items[0].text, node.items[1:]
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "not":
        return not _eval_structure_formula(rest[0], X, env, args)
    if op == "and":
        return all(_eval_structure_formula(a, X, env, args) for a in rest)
    if op == "or":
        return any(_eval_structure_formula(a, X, env, args) for a in rest)
    if op in ("exists", "forall"):
        var = rest[0].text
        vals = (_eval_structure_formula(rest[1], X, {**env, var: e}, args) for e in range(QUANTIFIER_CAP))
        return any(vals) if op == "exists" else all(vals)
    try:
        vals = [_lookup(a, env, args) for a in rest]
    except _Missing:
        return False   # an entry the tuple does not have: the atom fails
    if op == "=":
        return vals[0] == vals[1]
    if op == "!=":
        return vals[0] != vals[1]
    return bool(X.rel(op, tuple(vals)))


def _rank(node) -> int:
    if isinstance(node, Token):
        return 0
    op = node.items[0].text
    inner = max((_rank(a) for a in node.items[1:] if isinstance(a, _Node)), default=0)
    return inner + 1 if op in ("exists", "forall") else inner


# ---------------------------------------------------------------- declarations

@dataclass
class Registry:
    relations: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    interpretations: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)

    @property
    def signature(self) -> Signature:
        return Signature.of(**self.relations)

    def structure(self, name: str) -> Structure:
        if name in self.structures:
            return self.structures[name]
        if name in BUILTINS:
            return BUILTINS[name]()
        raise RejectedInput(f"unknown structure {name!r}")


class _Cursor:
    def __init__(self, toks):
        self.toks, self.pos = toks, 0

    def peek(self) -> Optional[Token]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str = "a token") -> Token:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("", 1, 1)
            raise DSLError(f"expected {what}, reached end of input", last.line, last.col + len(last.text))
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next(repr(text))
        if t.text != text:
            raise DSLError(f"expected {text!r}, got {t.text!r}", t.line, t.col)
        return t

    def integer(self, what: str) -> int:
        t = self.next(what)
        if not t.is_int:
            raise DSLError(f"expected {what}, got {t.text!r}", t.line, t.col)
        return int(t.text)

    def sexpr(self):
        node, self.pos = _parse_sexpr(self.toks, self.pos)
        return node


def parse_program(text: str, registry: Optional[Registry] = None) -> Registry:
    reg = registry or Registry()
    cur = _Cursor(tokenize(text))
    while cur.peek() is not None:
        kw = cur.next()
        if kw.text == ";":
            continue
        if kw.text == "rel":
            name = cur.next("a relation name").text
            reg.relations[name] = cur.integer("an arity")
        elif kw.text == "structure":
            _structure_decl(cur, reg)
        elif kw.text == "formula":
            name = cur.next("a formula name").text
            cur.expect("=")
            node = cur.sexpr()
            reg.formulas[name] = compile_formula(node, {}, FormulaContext(reg.signature if reg.relations else None))
        elif kw.text == "interp":
            _interp_decl(cur, reg)
        else:
            raise DSLError(f"unknown declaration {kw.text!r}", kw.line, kw.col)
    return reg


def _structure_decl(cur: _Cursor, reg: Registry):
    name = cur.next("a structure name").text
    kind = cur.next("'builtin' or 'table'")
    if kind.text == "builtin":
        gen = cur.next("a generator name")
        if gen.text not in BUILTINS:
            raise DSLError(f"unknown generator {gen.text!r}", gen.line, gen.col)
        s = BUILTINS[gen.text]()
        reg.structures[name] = Structure(name, s.signature, s.diagram, s.universe_hint)
        return
    if kind.text != "table":
        raise DSLError(f"expected 'builtin' or 'table', got {kind.text!r}", kind.line, kind.col)
    cur.expect("{")
    facts = []
    while True:
        t = cur.next("a fact or '}'")
        if t.text == "}":
            break
        if t.text not in reg.relations:
            raise DSLError(f"undeclared relation {t.text!r}", t.line, t.col)
        cur.expect("(")
        args = []
        while True:
            args.append(cur.integer("an element"))
            sep = cur.next("',' or ')'")
            if sep.text == ")":
                break
            if sep.text != ",":
                raise DSLError(f"expected ',' or ')', got {sep.text!r}", sep.line, sep.col)
        if len(args) != reg.relations[t.text]:
            raise DSLError(f"{t.text} has arity {reg.relations[t.text]}", t.line, t.col)
        facts.append((t.text, tuple(args)))
    reg.structures[name] = table_structure(name, reg.signature, facts)


def _interp_decl(cur: _Cursor, reg: Registry):
    name_tok = cur.next("an interpretation name")
    source_sig = reg.signature
    source = None
    if cur.peek() is not None and cur.peek().text == "on":
        cur.next()
        st = cur.next("a structure name")
        try:
            source = reg.structure(st.text)
        except RejectedInput:
            raise DSLError(f"unknown structure {st.text!r}", st.line, st.col) from None
        source_sig = source.signature
    cur.expect("{")
    doms: dict = {}
    sim_node = None
    rel_nodes: dict = {}
    while True:
        t = cur.next("a clause or '}'")
        if t.text == "}":
            break
        if t.text == ";":
            continue
        if t.text == "dom":
            cur.expect("[")
            n = cur.integer("a tuple length")
            cur.expect("]")
            cur.expect("=")
            node = cur.sexpr()
            _check_structure_formula(node, source_sig, frozenset(), 1)
            doms[n] = node
        elif t.text == "sim":
            cur.expect("=")
            sim_node = cur.sexpr()
            _check_structure_formula(sim_node, source_sig, frozenset(), 2)
        elif t.text == "rel":
            sym = cur.next("a relation name")
            if sym.text not in reg.relations:
                raise DSLError(f"undeclared relation {sym.text!r}", sym.line, sym.col)
            cur.expect("=")
            node = cur.sexpr()
            _check_structure_formula(node, source_sig, frozenset(), reg.relations[sym.text])
            rel_nodes[sym.text] = node
        else:
            raise DSLError(f"unknown clause {t.text!r}", t.line, t.col)
        nxt = cur.peek()
        if nxt is not None and nxt.text == ";":
            cur.next()
    if not doms:
        raise DSLError("an interpretation needs at least one dom clause", name_tok.line, name_tok.col)
    if sim_node is None:
        raise DSLError("an interpretation needs a sim clause", name_tok.line, name_tok.col)
    reg.interpretations[name_tok.text] = build_interpretation(
        name_tok.text, source_sig, Signature.of(**{s: reg.relations[s] for s in rel_nodes}), doms, sim_node,
        rel_nodes, source)


def build_interpretation(name: str, source_sig: Signature, target_sig: Signature, doms: dict, sim_node,
                         rel_nodes: dict, source: Optional[Structure] = None) -> Interpretation:
    def dom(X, t):
        node = doms.get(len(t))
        return node is not None and _eval_structure_formula(node, X, {}, (t,))

    def sim(X, t, u):
        return _eval_structure_formula(sim_node, X, {}, (t, u))

    rels = {sym: (lambda X, args, _n=node: _eval_structure_formula(_n, X, {}, tuple(args)))
            for sym, node in rel_nodes.items()}
    rank = max([_rank(n) for n in [*doms.values(), sim_node, *rel_nodes.values()]])
    return Interpretation(name, source_sig, target_sig, dom, sim, rels, tuple(sorted(doms)),
                          ComplexityTag(rank, "Sigma" if rank else "Delta"), source=source)


# ---------------------------------------------------------------- files

def load_registry(path: Optional[str] = None) -> Registry:
    """Parse the declarations at path, or at the path in the registry environment variable, if any."""
    path = path or os.environ.get(REGISTRY_ENV)
    if not path:
        return Registry()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise RejectedInput(f"cannot read registry {path!r}: {exc.strerror}") from None
    return parse_program(text)


