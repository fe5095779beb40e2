"""Deterministic check reports.

Checkers never raise on a failed property; they return a report whose
rendering is byte-stable for identical inputs.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Finding:
    code: str
    message: str


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    findings: tuple[Finding, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def codes(self) -> frozenset[str]:
        return frozenset(f.code for f in self.findings)

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'pass' if self.passed else 'FAIL'}"]
        out.extend(f"note: {n}" for n in self.notes)
        out.extend(f"{f.code}: {f.message}" for f in self.findings)
        return out

    def render(self) -> str:
        return "\n".join(self.lines())


def report(name: str, findings, notes=()) -> CheckReport:
    """Build a report; sorted findings keep output order-independent."""
    fs = tuple(sorted(findings, key=lambda f: (f.code, f.message)))
    return CheckReport(name=name, passed=not fs, findings=fs, notes=tuple(notes))
