"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime and limit."""
import itertools
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES

from interpforce.core import BUILTINS, z_of
from interpforce.extract import Extraction, extract_quotient
from interpforce.forcing import Bounds
from interpforce.functors import FracFieldFunctor
from interpforce.report import Report
from interpforce.suites import SessionConfig, _generic_prefix, definability, run_suite, truth_lemma

FIRST_RUNS: dict = {}

CONFIGS = {
    "C1": ("forcing-lemmas", SessionConfig("pureset,pairs", bounds=Bounds(pool=5, length=3, depth=4))),
    "C4": ("extraction", SessionConfig("pairs", "identity", bounds=Bounds(pool=8, length=4, depth=4))),
    "C5": ("extraction", SessionConfig("pureset", "constant:omega", bounds=Bounds(pool=4, length=2, depth=4))),
    "C6-laws": ("laws", SessionConfig("zring", "fracfield", interp="fraction", bounds=Bounds(pool=6, length=2,
                                                                                             depth=4), samples=50)),
    "C6-extract": ("extraction", SessionConfig("zring", "fracfield", bounds=Bounds(pool=8, length=3, depth=4),
                                               samples=12)),
    "C7": ("biequiv", SessionConfig("pairs", bounds=Bounds(pool=10, length=3, depth=4))),
    "C8": ("indiscernibles", SessionConfig("pairs", interp="pairs-classes", bounds=Bounds(pool=10, length=3,
                                                                                           depth=4))),
}


def record(label: str, ok: bool, elapsed: float, limit, detail: str = ""):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    bound = f"< {limit} s" if limit is not None else "no limit"
    ACCEPTANCE_LINES.append(f"{label} {status} ({elapsed:.1f} s, {bound}) {detail}".rstrip())
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail
    assert within, f"{label} took {elapsed:.1f} s"


def suite(key: str):
    name, cfg = CONFIGS[key]
    status, report = run_suite(name, cfg)
    FIRST_RUNS[key] = report.jsonl()
    return status, report


def describe(report: Report) -> str:
    bad = report.failures()
    return report.summary() + ("; first failure " + str(bad[0].as_json()) if bad else "")


def test_c1_forcing_lemmas():
    t = time.perf_counter()
    status, report = suite("C1")
    ok = status == 0 and report.count("undecided") == 0 and report.count("fail") == 0
    record("C1 forcing lemmas", ok, time.perf_counter() - t, 60, describe(report))


def test_c2_truth_lemma():
    t = time.perf_counter()
    reports = [truth_lemma(BUILTINS[n](), Bounds(pool=5, length=3, depth=4), count=100, seed=0)
               for n in ("pureset", "pairs")]
    ok = all(r.gate and r.records for r in reports)
    record("C2 truth lemma", ok, time.perf_counter() - t, 60, "; ".join(r.summary() for r in reports))


def test_c3_definability():
    t = time.perf_counter()
    report = definability(BUILTINS["pureset"](), Bounds(pool=5, length=3, depth=4), samples=200, seed=0)
    ok = report.gate and len(report.records) == 200
    record("C3 definability", ok, time.perf_counter() - t, 60, describe(report))


def test_c4_identity_extraction():
    t = time.perf_counter()
    status, report = suite("C4")
    checks = {r.check for r in report.records}
    needed = {"sim-reflexive", "sim-symmetric", "sim-transitive", "onto", "unique", "iso", "brute-force-iso",
              "naturality"}
    natural = sum(1 for r in report.records if r.check == "naturality")
    ok = status == 0 and needed <= checks and natural == 10
    record("C4 identity extraction", ok, time.perf_counter() - t, 120, describe(report))


def test_c5_constant_extraction():
    t = time.perf_counter()
    status, report = suite("C5")
    iso = [r for r in report.records if r.check == "brute-force-iso"]
    ok = status == 0 and iso and iso[0].instance["size"] == 8 and iso[0].verdict == "pass"
    record("C5 constant extraction", ok, time.perf_counter() - t, 60, describe(report))


def rationals_along(g, count):
    """Independent oracle: distinct z(g a)/z(g b) over index pairs in height, then lexicographic, order."""
    out, h = [], 0
    while len(out) < count:
        for a, b in itertools.product(range(h + 1), repeat=2):
            if max(a, b) != h or z_of(g[b]) == 0:
                continue
            q = Fraction(z_of(g[a]), z_of(g[b]))
            if q not in out and len(out) < count:
                out.append(q)
        h += 1
    return out


def test_c6_fraction_field_pipeline():
    t = time.perf_counter()
    status_laws, laws = suite("C6-laws")
    status_ex, extraction = suite("C6-extract")
    _, cfg = CONFIGS["C6-extract"]
    g = _generic_prefix(cfg.bounds.pool, cfg.seed)
    scratch = Report("oracle")
    _, rels, _ = extract_quotient(Extraction(FracFieldFunctor(), cfg.bounds, index_bound=12), BUILTINS["zring"](),
                                  g, 12, scratch)
    vals = rationals_along(g, 12)
    agree = all(((i, j, k) in rels["Add"]) == (vals[i] + vals[j] == vals[k]) and
                ((i, j, k) in rels["Mul"]) == (vals[i] * vals[j] == vals[k])
                for i, j, k in itertools.product(range(12), repeat=3))
    induced = sum(1 for r in laws.records if r.check == "N2" and "F[fraction]" in str(r.instance))
    interp_checks = {r.check for r in laws.records} >= {"reflexive", "symmetric", "transitive", "sim-closed",
                                                        "witness-injective", "witness-relations"}
    ok = status_laws == 0 and status_ex == 0 and scratch.gate and agree and induced == 50 and interp_checks
    record("C6 fraction-field pipeline", ok, time.perf_counter() - t, 120,
           f"{describe(laws)}; {describe(extraction)}; oracle agreement {agree}")


def test_c7_biinterpretation_round_trip():
    t = time.perf_counter()
    status, report = suite("C7")
    checks = {r.check for r in report.records if not r.negative_control}
    names = {str(r.instance) for r in report.records}
    ok = status == 0 and {"triangle-F", "triangle-G", "renaming-bijective", "renaming-relations"} <= checks \
        and any("identity" in n for n in names) and any("pairs" in n for n in names)
    record("C7 bi-interpretation round trip", ok, time.perf_counter() - t, 120, describe(report))


def test_c8_indiscernibles():
    t = time.perf_counter()
    status, report = suite("C8")
    positive = [r for r in report.records if r.check == "extends" and not r.negative_control]
    negative = [r for r in report.records if r.negative_control]
    ok = status == 0 and len(positive) == 120 and all(r.verdict == "pass" for r in positive) \
        and negative and all(r.verdict == "fail" for r in negative)
    record("C8 indiscernibles", ok, time.perf_counter() - t, 60, describe(report))


def test_c9_determinism():
    t = time.perf_counter()
    missing = [k for k in CONFIGS if k not in FIRST_RUNS]
    for key in missing:
        suite(key)
    diffs = []
    for key, (name, cfg) in CONFIGS.items():
        if run_suite(name, cfg)[1].jsonl() != FIRST_RUNS[key]:
            diffs.append(key)
    record("C9 determinism", not diffs, time.perf_counter() - t, None,
           f"{len(CONFIGS)} suite configurations rerun; differing: {diffs or 'none'}")
