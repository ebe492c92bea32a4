"""The verification suites run by the command line and the acceptance tests."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .core import BUILTINS, RejectedInput, Structure
from .forcing import (FORCES, FORCES_NEGATION, UNDECIDED, Bounds, DefinableRelation, ForcingEngine, GenericBudget,
                      build_generic, decide, truth_lemma_check)
from .logic import CompAtom, CountAnd, CountOr, IndexedFamily, RelAtom, ValAtom, classify, is_restricted, negat
from .report import Report

SUITES = ("forcing-lemmas", "truth-lemma", "extraction", "laws", "biequiv", "indiscernibles")


@dataclass
class SessionConfig:
    structure: str = "pureset"
    functor: str = "identity"
    interp: Optional[str] = None
    bounds: Bounds = field(default_factory=Bounds)
    seed: int = 0
    report: Optional[str] = None
    registry: object = None
    samples: Optional[int] = None

    def __post_init__(self):
        b = self.bounds
        if b.pool < 1 or b.length < 1 or b.depth < 1:
            raise RejectedInput("bounds must be positive")

    def resolve(self, name: Optional[str] = None) -> Structure:
        name = name or self.structure
        if self.registry is not None:
            return self.registry.structure(name)
        if name not in BUILTINS:
            raise RejectedInput(f"unknown structure {name!r}")
        return BUILTINS[name]()


# ---------------------------------------------------------------- the template family

class LocatedTemplate(IndexedFamily):
    """A countable family with an exact decision procedure for its disjunction on finite data."""

    located = True

    def __init__(self, fn, locate_fn, label: str):
        super().__init__(fn, None, label)
        self._locate = locate_fn

    def locate(self, view, base):
        return self._locate(view)


def defined_at(i: int, m: int) -> CountOr:
    """g_i(m) is defined: some value n."""
    return CountOr(LocatedTemplate(lambda n: ValAtom(i, m, n),
                                   lambda v: True if v.val(i, m) is not None else None, f"g{i}({m}) defined"))


def lands_in(i: int, j: int, m: int) -> CountOr:
    """g_j(m) lies in the range of g_i."""
    def locate(v):
        y = v.val(j, m)
        return True if y is not None and v.pre(i, y) is not None else None
    return CountOr(LocatedTemplate(lambda n: CompAtom(i, j, m, n), locate, f"g{j}({m}) in range g{i}"))


def template_family(structure: Structure, ell: int, params: int = 4) -> list:
    """Literals with parameters < params over ell generics, plus the defined-at and lands-in templates."""
    out = []
    gens = range(1, ell + 1)
    for pos in (True, False):
        for i in gens:
            for m, n in itertools.product(range(params), repeat=2):
                out.append(ValAtom(i, m, n, pos))
        for i, j in itertools.product(gens, repeat=2):
            for m, n in itertools.product(range(params), repeat=2):
                out.append(CompAtom(i, j, m, n, pos))
        for i in gens:
            for sym, k in structure.signature.items():
                for args in itertools.product(range(params), repeat=k):
                    out.append(RelAtom(i, sym, args, pos))
    for i in gens:
        for m in range(params):
            out += [defined_at(i, m), negat(defined_at(i, m))]
        for j in gens:
            if j != i:
                for m in range(params):
                    out += [lands_in(i, j, m), negat(lands_in(i, j, m))]
    return out


def all_conditions(ell: int, pool: int, length: int) -> list:
    singles = [t for n in range(length + 1) for t in itertools.permutations(range(pool), n)]
    return list(itertools.product(singles, repeat=ell))


def _one_step(parts: tuple, pool: int, length: int):
    for c, part in enumerate(parts):
        if len(part) >= length:
            continue
        for x in range(pool):
            if x not in part:
                yield parts[:c] + (part + (x,),) + parts[c + 1:]


# ---------------------------------------------------------------- suites

def forcing_lemmas(structures, bounds: Bounds, params: int = 4, max_ell: int = 2,
                   report: Optional[Report] = None) -> Report:
    """Monotonicity, consistency and decidability over the template family and all conditions."""
    report = report or Report("forcing-lemmas", bounds=bounds.as_dict())
    for S in structures:
        for ell in range(1, max_ell + 1):
            conds = all_conditions(ell, bounds.pool, bounds.length)
            for f in template_family(S, ell, params):
                _lemmas_for(S, ell, f, conds, bounds, report)
    return report


def _lemmas_for(S: Structure, ell: int, f, conds: list, bounds: Bounds, report: Report):
    eng = ForcingEngine(S, bounds, ell, [f])
    nf = eng.negation(f)
    verdict = {}
    cons, first = 0, {}
    for p in conds:
        v, e = eng.forced(p, f)
        w, e2 = eng.forced(p, nf)
        pos, neg = v and e, w and e2
        if pos and neg:
            cons += 1
            first.setdefault("neg", p)
        verdict[p] = FORCES if pos else (FORCES_NEGATION if neg else UNDECIDED)
    M, L = eng.bounds.pool, eng.bounds.length
    mono = dec = 0
    above: dict = {}
    for p in sorted(conds, key=lambda c: -sum(map(len, c))):
        v = verdict[p]
        if v != UNDECIDED:
            above[p] = True
            for q in _one_step(p, M, L):
                got = verdict.get(q)
                if got is None:
                    got = eng.kind(q, f)
                if got != v:
                    mono += 1
                    first.setdefault("ext", (p, q))
            continue
        ok = False
        for q in _one_step(p, M, L):
            got = above.get(q)
            if got is None:
                got = eng.kind(q, f) != UNDECIDED
            if got:
                ok = True
                break
        if not ok:
            ok = decide(p, f, bounds, eng.base, engine=eng)[1].decided
        above[p] = ok
        if not ok:
            dec += 1
            first.setdefault("decides", p)
    inst = {"structure": S.name, "ell": ell, "formula": _label(f)}
    report.add("lem-ext", inst, mono == 0, {"violations": mono, "first": first.get("ext")} if mono else None)
    report.add("lem-neg", inst, cons == 0, {"violations": cons, "first": first.get("neg")} if cons else None)
    report.add("lem-decides", inst, dec == 0, {"undecided": dec, "first": first.get("decides")} if dec else None)


def _label(f) -> str:
    if isinstance(f, (CountOr, CountAnd)):
        return ("not " if f.flip else "") + f.source.label
    return repr(f)


def budget_formulas(structure: Structure, ell: int = 1, params: int = 3) -> list:
    """Rank at most 2: literals, defined-at templates and their negations."""
    fs = []
    for m in range(params):
        fs += [defined_at(1, m), negat(defined_at(1, m))]
    for sym, k in structure.signature.items():
        for args in itertools.product(range(params), repeat=k):
            fs.append(RelAtom(1, sym, args))
    for m, n in itertools.product(range(params), repeat=2):
        fs.append(ValAtom(1, m, n))
    return [f for f in fs if classify(f).rank <= 2]


def truth_lemma(structure: Structure, bounds: Bounds, count: int = 100, seed: int = 0,
                report: Optional[Report] = None) -> Report:
    """Along each budget generic: a formula is true iff some prefix condition forces it."""
    report = report or Report("truth-lemma", bounds=bounds.as_dict())
    fs = budget_formulas(structure)
    for k in range(count):
        gen = build_generic(1, GenericBudget(fs, pool=bounds.pool, length=bounds.length, seed=seed + k,
                                             depth=bounds.depth), structure)
        bad = []
        for f in fs:
            truth, pos, neg = truth_lemma_check(f, gen, structure, Bounds(bounds.pool, max(bounds.pool,
                                                                                          bounds.length),
                                                                           bounds.depth))
            if truth is None or truth != pos or (truth and neg):
                bad.append({"formula": _label(f), "truth": truth, "forced": pos, "negation_forced": neg})
        report.add("forcing-lemma", {"structure": structure.name, "generic": k, "formulas": len(fs)},
                   not bad and not gen.deficiencies, bad[:2] or ({"deficiencies": gen.deficiencies}
                                                                 if gen.deficiencies else None))
    return report


def definability(structure: Structure, bounds: Bounds, samples: int = 200, seed: int = 0,
                 report: Optional[Report] = None) -> Report:
    """The compiled first-order predicate agrees with forcing on sampled (condition, formula) pairs."""
    report = report or Report("definability", bounds=bounds.as_dict())
    rng = random.Random(seed)
    fams = {}
    for ell in (1, 2):
        fams[ell] = [f for f in template_family(structure, ell, 4)
                     if is_restricted(f) and classify(f).rank <= 2]
    conds = {ell: all_conditions(ell, bounds.pool, bounds.length) for ell in (1, 2)}
    rels: dict = {}
    for k in range(samples):
        ell = rng.choice((1, 2))
        f = rng.choice(fams[ell])
        p = rng.choice(conds[ell])
        key = (ell, f)
        if key not in rels:
            rels[key] = (DefinableRelation(f, ell, bounds, structure), ForcingEngine(structure, bounds, ell, [f]))
        rel, eng = rels[key]
        v, exact = eng.forced(p, f)
        got = rel.evaluate(p)
        forces = bool(v and exact)
        report.add("definability", {"structure": structure.name, "sample": k, "condition": p, "formula": _label(f)},
                   got == forces, None if got == forces else {"defined": got, "forces": forces})
    return report


# ---------------------------------------------------------------- registry-driven suites

def _structures(cfg: SessionConfig) -> list:
    return [cfg.resolve(n.strip()) for n in cfg.structure.split(",") if n.strip()]


def _generic_prefix(pool: int, seed: int, length: int = 200) -> list:
    """A seeded shuffle of the first `pool` naturals followed by the identity."""
    head = list(range(pool))
    random.Random(seed).shuffle(head)
    return head + list(range(pool, max(pool, length)))


def _comparison_target(F, B: Structure) -> Optional[Structure]:
    if F.name == "identity" or F.name.startswith("reindex:"):
        return B
    if F.name.startswith("constant:"):
        return F.target
    if F.name == "classes":
        return BUILTINS["pureset"]()
    return None


def _interp(cfg: SessionConfig, source: Structure):
    from .interp import interpretation_by_name
    name = cfg.interp or "identity"
    if cfg.registry is not None and name in cfg.registry.interpretations:
        return cfg.registry.interpretations[name]
    return interpretation_by_name(name, source)


def run_forcing_lemmas(cfg: SessionConfig) -> Report:
    return forcing_lemmas(_structures(cfg), cfg.bounds, report=Report("forcing-lemmas", bounds=cfg.bounds.as_dict()))


def run_truth_lemma(cfg: SessionConfig) -> Report:
    report = Report("truth-lemma", bounds=cfg.bounds.as_dict())
    for S in _structures(cfg):
        truth_lemma(S, cfg.bounds, count=cfg.samples or 100, seed=cfg.seed, report=report)
        definability(S, cfg.bounds, samples=cfg.samples or 200, seed=cfg.seed, report=report)
    return report


def run_extraction(cfg: SessionConfig) -> Report:
    from .extract import Extraction, extract_quotient, verify_extraction
    from .functors import copy_iso, functor_by_name, sample_copies
    report = Report("extraction", bounds=cfg.bounds.as_dict())
    for B in _structures(cfg):
        F = functor_by_name(cfg.functor, B)
        g = _generic_prefix(cfg.bounds.pool, cfg.seed)
        if F.name == "fracfield":
            # sim on short tuples is not symmetric for this functor; only the generic quotient is checked
            extract_quotient(Extraction(F, cfg.bounds, index_bound=12), B, g, cfg.samples or 12, report)
            continue
        count = cfg.samples or 10
        copies = sample_copies(B, 2 * count, seed=cfg.seed)
        morphisms = [copy_iso(copies[2 * k], copies[2 * k + 1]) for k in range(count)]
        verify_extraction(F, B, cfg.bounds, g, morphisms, seed=cfg.seed, compare_with=_comparison_target(F, B),
                          report=report)
    return report


def run_laws(cfg: SessionConfig) -> Report:
    from .functors import check_functor_laws, composable_samples, functor_by_name
    from .interp import check_witness, induced_functor, interpret
    report = Report("laws", bounds=cfg.bounds.as_dict())
    count = cfg.samples or 50
    for B in _structures(cfg):
        pairs = composable_samples(B, count, seed=cfg.seed)
        check_functor_laws(functor_by_name(cfg.functor, B), pairs, cfg.bounds.pool, report)
        if cfg.interp:
            I = _interp(cfg, B)
            frag = interpret(I, B, cfg.bounds.length, cfg.bounds.pool)
            report.extend(frag.report)
            if I.witness is not None and I.target is not None:
                check_witness(I, frag, I.witness, I.target, report)
            check_functor_laws(induced_functor(I), pairs, cfg.bounds.pool, report)
    return report


def run_biequiv(cfg: SessionConfig) -> Report:
    from .biequiv import (BIINTERPRETATIONS, PreconditionFailed, adjoint_from_biinterp, biinterp_from_adjoint,
                          biinterpretation_by_name, constant_pair, corrupt)
    report = Report("biequiv", bounds=cfg.bounds.as_dict())
    names = [cfg.interp] if cfg.interp else sorted(BIINTERPRETATIONS)
    count = cfg.samples or 4
    for name in names:
        bi = biinterpretation_by_name(name)
        pair = adjoint_from_biinterp(bi, cfg.bounds, samples=count, seed=cfg.seed, report=report)
        biinterp_from_adjoint(pair.F, pair.G, pair.eta, pair.eps, bi.B, cfg.bounds, samples=min(count, 3),
                              seed=cfg.seed, reference=bi, report=report)
        scratch = Report("biequiv", bounds=cfg.bounds.as_dict())
        adjoint_from_biinterp(corrupt(bi), cfg.bounds, samples=count, seed=cfg.seed, report=scratch)
        _negative(report, "corrupted-adjoint", {"bi": f"{name}-corrupted"}, scratch)
        F, G, eta, eps = constant_pair(bi.B, bi.A)
        scratch = Report("biequiv", bounds=cfg.bounds.as_dict())
        try:
            biinterp_from_adjoint(F, G, eta, eps, bi.B, cfg.bounds, samples=min(count, 3), seed=cfg.seed,
                                  report=scratch)
        except PreconditionFailed as exc:
            scratch = exc.report
        _negative(report, "constant-precondition", {"pair": f"constant[{name}]"}, scratch)
    return report


def _negative(report: Report, check: str, instance, scratch: Report):
    """One negative-control record: it passes only if every check of the corrupted run passes."""
    caught = sorted({r.check for r in scratch.records if r.verdict != "pass"})
    report.add(check, instance, not caught, {"caught_by": caught} if caught else None, negative_control=True)


def run_indiscernibles(cfg: SessionConfig, k: int = 5, depth: int = 6, perms: int = 120) -> Report:
    from .indisc import check_absolute_indiscernibility, extract_indiscernibles, trivial_reduct
    from .interp import identity_interpretation
    report = Report("indiscernibles", bounds=cfg.bounds.as_dict())
    for A in _structures(cfg):
        I = _interp(cfg, A)
        if list(I.target_signature.items()):
            I = trivial_reduct(I)
        w = extract_indiscernibles(I, A, cfg.bounds, k, report=report)
        check_absolute_indiscernibility(A, w, perms, depth, seed=cfg.seed, report=report)
    omega = BUILTINS["omega"]()
    w = extract_indiscernibles(trivial_reduct(identity_interpretation(omega)), omega, Bounds(pool=k), k)
    swap = (1, 0) + tuple(range(2, w.class_count_bound))
    check_absolute_indiscernibility(omega, w, [swap], depth, negative=True, report=report)
    return report


RUNNERS = {
    "forcing-lemmas": run_forcing_lemmas,
    "truth-lemma": run_truth_lemma,
    "extraction": run_extraction,
    "laws": run_laws,
    "biequiv": run_biequiv,
    "indiscernibles": run_indiscernibles,
}


def run_suite(name: str, cfg: SessionConfig) -> tuple:
    """(exit status, report): status 1 iff a check that is not a negative control fails."""
    if name not in RUNNERS:
        raise RejectedInput(f"unknown suite {name!r}")
    report = RUNNERS[name](cfg)
    for r in report.records:
        r.suite = name
    if cfg.report:
        with open(cfg.report, "w") as fh:
            fh.write(report.jsonl())
    return (0 if report.gate else 1), report
