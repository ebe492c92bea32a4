import json

from hypothesis import given
from hypothesis import strategies as st

from interpforce.report import Report


def test_negative_controls_do_not_gate():
    r = Report("s")
    r.add("a", 1, True)
    r.add("b", 2, False, {"why": 1}, negative_control=True)
    assert r.gate and r.ok and not r.failures()
    r.add("c", 3, None)
    assert not r.gate and [x.check for x in r.failures()] == ["c"]


def test_jsonl_fields_and_order():
    r = Report("s", bounds={"pool": 3})
    r.add("z", {"k": (1, 2)}, True)
    r.add("a", "x", False)
    lines = r.jsonl().splitlines()
    assert lines == sorted(lines)
    rec = json.loads(lines[0])
    assert set(rec) == {"suite", "check", "instance", "verdict", "witness", "bounds", "negative_control"}
    assert rec["bounds"] == {"pool": 3}


@given(st.lists(st.tuples(st.text(max_size=5), st.integers(), st.sampled_from([True, False, None]))))
def test_jsonl_is_insertion_order_independent(items):
    a, b = Report("s"), Report("s")
    for c, i, ok in items:
        a.add(c, i, ok)
    for c, i, ok in reversed(items):
        b.add(c, i, ok)
    assert a.jsonl() == b.jsonl()
