"""Command-line front end: forcing queries, interpretations, extraction, suites and reports."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .core import RejectedInput
from .dsl import FormulaContext, load_registry, parse_formula, parse_program
from .forcing import Bounds, Condition, decide, forces
from .report import Report
from .suites import SUITES, SessionConfig, run_suite


def _globals() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--pool", type=int, default=5, help="entries of conditions and tuples are below this")
    g.add_argument("--len", dest="length", type=int, default=3, help="maximum coordinate length")
    g.add_argument("--depth", type=int, default=4, help="countable members probed per family")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--report", help="write the JSONL report here instead of standard output")
    g.add_argument("--registry", help="declarations file (default: the registry environment variable)")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _globals()
    parser = argparse.ArgumentParser(prog="interpforce", description="Forcing, interpretations and functors "
                                     "between categories of copies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("force", parents=[common], help="decide a forcing query")
    p.add_argument("--structure", default="pureset")
    p.add_argument("--condition", required=True, help='coordinates such as "(5,3);(3)"')
    p.add_argument("--formula", required=True, help="file with an s-expression or formula declarations")
    p.add_argument("--name", help="which declared formula to use (default: the last one)")

    p = sub.add_parser("interpret", parents=[common], help="enumerate an interpretation's quotient fragment")
    p.add_argument("--structure", required=True)
    p.add_argument("--interp", required=True)

    p = sub.add_parser("extract", parents=[common], help="extract an interpretation from a functor")
    p.add_argument("--structure", required=True)
    p.add_argument("--functor", required=True)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--structure", default="pureset", help="one name or a comma-separated list")
    p.add_argument("--functor", default="identity")
    p.add_argument("--interp")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("biinterp", parents=[common], help="bi-interpretations and adjoint equivalences")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-adjoint", metavar="NAME")
    mode.add_argument("--from-adjoint", metavar="NAME")
    p.add_argument("--samples", type=int, default=4)

    p = sub.add_parser("indiscernibles", parents=[common], help="absolutely indiscernible classes")
    p.add_argument("--structure", required=True)
    p.add_argument("--interp", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--perms", type=int, default=120)
    p.add_argument("--order", action="store_true", help="order-preserving maps only")
    return parser


def _bounds(args) -> Bounds:
    return Bounds(args.pool, args.length, args.depth)


def _emit(report: Report, args, out) -> int:
    text = report.jsonl()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(report.summary(), file=out)
    else:
        out.write(text)
    return 0 if report.gate else 1


def _cmd_force(args, registry, out) -> int:
    S = registry.structure(args.structure)
    try:
        with open(args.formula, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise RejectedInput(f"cannot read formula file {args.formula!r}: {exc.strerror}") from None
    ctx = FormulaContext(signature=S.signature, structure=S)
    if text.lstrip().startswith("("):
        f, label = parse_formula(text, ctx), args.formula
    else:
        reg = parse_program(text, registry)
        if not reg.formulas:
            raise RejectedInput("the formula file declares no formula")
        label = args.name or list(reg.formulas)[-1]
        if label not in reg.formulas:
            raise RejectedInput(f"unknown formula {label!r}")
        f = reg.formulas[label]
    p = Condition.parse(args.condition)
    bounds = _bounds(args)
    verdict = forces(p, f, bounds, S)
    q, decided = decide(p, f, bounds, S)
    report = Report("force", bounds=bounds.as_dict())
    ok = {"forces": True, "forces_negation": False}.get(verdict.kind)
    report.add("forces", {"structure": S.name, "condition": str(p), "formula": label}, ok,
               {"verdict": str(verdict), "certified": verdict.certified,
                "decided_by": str(q), "decision": str(decided)})
    print(verdict, file=sys.stderr)
    _emit(report, args, out)
    return 0


def _cmd_interpret(args, registry, out) -> int:
    from .interp import check_witness, interpret, interpretation_by_name
    S = registry.structure(args.structure)
    I = registry.interpretations.get(args.interp) or interpretation_by_name(args.interp, S)
    frag = interpret(I, S, args.length, args.pool)
    report = frag.report
    report.suite = "interpret"
    report.add("fragment", {"interp": I.name, "structure": S.name},
               True, {"elements": len(frag.elements), "classes": frag.size,
                      "relations": {k: sorted(v) for k, v in frag.relations.items()}})
    if I.witness is not None and I.target is not None:
        check_witness(I, frag, I.witness, I.target, report)
    return _emit(report, args, out)


def _config(args, registry) -> SessionConfig:
    return SessionConfig(structure=args.structure, functor=args.functor, interp=getattr(args, "interp", None),
                         bounds=_bounds(args), seed=args.seed, samples=args.samples, registry=registry)


def _run(name: str, cfg: SessionConfig, args, out) -> int:
    _, report = run_suite(name, cfg)
    return _emit(report, args, out)


def _cmd_biinterp(args, registry, out) -> int:
    from .biequiv import adjoint_from_biinterp, biinterp_from_adjoint, biinterpretation_by_name
    bounds = _bounds(args)
    name = args.to_adjoint or args.from_adjoint
    bi = biinterpretation_by_name(name)
    report = Report("biequiv", bounds=bounds.as_dict())
    if args.to_adjoint:
        adjoint_from_biinterp(bi, bounds, samples=args.samples, seed=args.seed, report=report)
    else:
        pair = adjoint_from_biinterp(bi, bounds, samples=args.samples, seed=args.seed)
        biinterp_from_adjoint(pair.F, pair.G, pair.eta, pair.eps, bi.B, bounds, samples=min(args.samples, 3),
                              seed=args.seed, reference=bi, report=report)
    return _emit(report, args, out)


def _cmd_indiscernibles(args, registry, out) -> int:
    from .indisc import check_absolute_indiscernibility, extract_indiscernibles, trivial_reduct
    from .interp import interpretation_by_name
    A = registry.structure(args.structure)
    I = registry.interpretations.get(args.interp) or interpretation_by_name(args.interp, A)
    if list(I.target_signature.items()):
        I = trivial_reduct(I)
    bounds = _bounds(args)
    report = Report("indiscernibles", bounds=bounds.as_dict())
    order = None
    if args.order:
        if "Lt" not in dict(A.signature.items()):
            raise RejectedInput(f"{A.name} has no order relation Lt")
        order = lambda x, y: A.holds("Lt", (x[0], y[0]))  # noqa: E731
    w = extract_indiscernibles(I, A, bounds, args.k, order=order, report=report)
    check_absolute_indiscernibility(A, w, args.perms, args.depth, seed=args.seed, order=args.order, report=report)
    return _emit(report, args, out)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if min(args.pool, args.length, args.depth) < 1:
            raise RejectedInput("--pool, --len and --depth must be positive")
        registry = load_registry(args.registry)
        if args.command == "force":
            return _cmd_force(args, registry, out)
        if args.command == "interpret":
            return _cmd_interpret(args, registry, out)
        if args.command == "extract":
            return _run("extraction", _config(args, registry), args, out)
        if args.command == "verify":
            return _run(args.suite, _config(args, registry), args, out)
        if args.command == "biinterp":
            return _cmd_biinterp(args, registry, out)
        return _cmd_indiscernibles(args, registry, out)
    except RejectedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
