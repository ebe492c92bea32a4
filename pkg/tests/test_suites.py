import json

import pytest

from interpforce.core import BUILTINS, RejectedInput
from interpforce.forcing import Bounds
from interpforce.suites import (SessionConfig, definability, forcing_lemmas, run_suite, template_family,
                                truth_lemma)


def test_forcing_lemmas_small_pure_set():
    rep = forcing_lemmas([BUILTINS["pureset"]()], Bounds(pool=3, length=2, depth=3), params=2, max_ell=1)
    assert rep.gate and rep.count("undecided") == 0 and len(rep.records) > 0


def test_template_family_is_nonempty_for_both_arities():
    for ell in (1, 2):
        assert template_family(BUILTINS["pairs"](), ell, 2)


def test_truth_lemma_and_definability_small():
    b = Bounds(pool=4, length=3, depth=3)
    assert truth_lemma(BUILTINS["pairs"](), b, count=5, seed=1).gate
    assert definability(BUILTINS["pureset"](), b, samples=20, seed=1).gate


@pytest.mark.parametrize("name,cfg", [
    ("extraction", SessionConfig("pureset", "constant:omega", bounds=Bounds(3, 2, 4), samples=2)),
    ("laws", SessionConfig("pairs", "identity", bounds=Bounds(5, 2, 3), samples=5)),
    ("indiscernibles", SessionConfig("pairs", interp="pairs-classes", bounds=Bounds(10, 3, 4))),
])
def test_suites_pass_and_keep_negative_controls(name, cfg):
    status, rep = run_suite(name, cfg)
    assert status == 0, [r.as_json() for r in rep.failures()]
    assert all(r.suite == name for r in rep.records)


def test_indiscernibles_suite_contains_failing_negative_control():
    _, rep = run_suite("indiscernibles", SessionConfig("pairs", interp="pairs-classes", bounds=Bounds(10, 3, 4)))
    neg = [r for r in rep.records if r.negative_control]
    assert neg and all(r.verdict == "fail" for r in neg)


def test_report_file_written(tmp_path):
    path = tmp_path / "out.jsonl"
    cfg = SessionConfig("pureset", bounds=Bounds(3, 2, 3), report=str(path))
    _, rep = run_suite("forcing-lemmas", cfg)
    lines = path.read_text().splitlines()
    assert len(lines) == len(rep.records) and all(json.loads(x)["suite"] == "forcing-lemmas" for x in lines)


def test_unknown_suite_and_structure():
    with pytest.raises(RejectedInput):
        run_suite("nope", SessionConfig())
    with pytest.raises(RejectedInput):
        run_suite("forcing-lemmas", SessionConfig("no-such-structure"))


def test_same_seed_same_bytes():
    cfg = SessionConfig("pairs", bounds=Bounds(4, 3, 3), seed=7, samples=10)
    assert run_suite("truth-lemma", cfg)[1].jsonl() == run_suite("truth-lemma", cfg)[1].jsonl()
