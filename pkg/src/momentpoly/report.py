"""Structured pass/fail records with witnesses, shared by all check suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    """One checked identity: what was compared, both sides, and the verdict.

    ``expected``/``actual`` are stored as strings so exact rationals print as
    'a/b' while numeric checks keep full float repr.
    """

    description: str
    expected: str
    actual: str
    ok: bool

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "expected": self.expected,
            "actual": self.actual,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one named check; passed iff every witness matched."""

    name: str
    passed: bool
    witnesses: tuple[Witness, ...]
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({len(self.witnesses)} witnesses)"


def make_report(name: str, witnesses: list[Witness], notes: tuple[str, ...] = ()) -> VerificationReport:
    return VerificationReport(
        name=name,
        passed=all(w.ok for w in witnesses),
        witnesses=tuple(witnesses),
        notes=notes,
    )
