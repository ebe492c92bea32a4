"""Check records shared by all verification routines."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


@dataclass
class CheckRecord:
    check: str
    instance: Any
    verdict: str
    witness: Any = None
    bounds: Optional[dict] = None
    negative_control: bool = False
    suite: str = ""

    def as_json(self) -> dict:
        return {"suite": self.suite, "check": self.check, "instance": _plain(self.instance),
                "verdict": self.verdict, "witness": _plain(self.witness),
                "bounds": _plain(self.bounds or {}), "negative_control": self.negative_control}

    @property
    def expected(self) -> bool:
        """A negative control is expected to fail; everything else to pass."""
        return (self.verdict == FAIL) if self.negative_control else (self.verdict == PASS)


@dataclass
class Report:
    suite: str = ""
    records: list = field(default_factory=list)
    bounds: Optional[dict] = None

    def add(self, check: str, instance, ok, witness=None, negative_control: bool = False,
            bounds: Optional[dict] = None) -> CheckRecord:
        if ok is None:
            verdict = UNDECIDED
        else:
            verdict = PASS if ok else FAIL
        rec = CheckRecord(check, instance, verdict, witness, bounds or self.bounds, negative_control, self.suite)
        self.records.append(rec)
        return rec

    def extend(self, other: "Report") -> "Report":
        for r in other.records:
            if not r.suite:
                r.suite = self.suite
            self.records.append(r)
        return self

    @property
    def ok(self) -> bool:
        return all(r.expected for r in self.records if not r.negative_control) and \
            all(r.expected for r in self.records if r.negative_control)

    @property
    def gate(self) -> bool:
        """Pass status ignoring negative controls (those never affect exit status)."""
        return all(r.expected for r in self.records if not r.negative_control)

    def failures(self) -> list:
        return [r for r in self.records if not r.expected]

    def count(self, verdict: str) -> int:
        return sum(1 for r in self.records if r.verdict == verdict)

    def jsonl(self) -> str:
        lines = [json.dumps(r.as_json(), sort_keys=True, separators=(",", ":")) for r in self.records]
        return "".join(line + "\n" for line in sorted(lines))

    def summary(self) -> str:
        neg = sum(1 for r in self.records if r.negative_control)
        return (f"{self.suite or 'report'}: {len(self.records)} checks, {self.count(PASS)} pass, "
                f"{self.count(FAIL)} fail, {self.count(UNDECIDED)} undecided, {neg} negative controls")
