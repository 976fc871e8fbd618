"""Three-valued check reports and canonical JSON emission.

Every bounded check in this package is a semi-decision: it either verifies a
statement at an explicit scale, falsifies it with a concrete witness, or runs
out of budget.  Reports record which of the three happened together with every
parameter that influenced the run, so that reruns are byte-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

VERIFIED = "verified-at-scale"
FALSIFIED = "falsified"
INCONCLUSIVE = "inconclusive-within-bound"


def canonical_value(value):
    """Recursively convert a report value into canonical JSON-ready form.

    Fractions become [numerator, denominator]; tuples and sets become sorted
    or order-preserving lists; objects exposing ``report_form()`` delegate.
    """
    if isinstance(value, Fraction):
        return [value.numerator, value.denominator]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): canonical_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical_value(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(canonical_value(v) for v in value)
    if hasattr(value, "report_form"):
        return canonical_value(value.report_form())
    return str(value)


def dumps(tree) -> str:
    """Canonical JSON: sorted keys, compact separators, deterministic bytes."""
    return json.dumps(canonical_value(tree), sort_keys=True, separators=(",", ":"))


@dataclass
class CheckReport:
    name: str
    params: dict = field(default_factory=dict)
    verdict: str = INCONCLUSIVE
    witnesses: list = field(default_factory=list)
    compared_count: int | None = None
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.verdict != FALSIFIED

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "params": canonical_value(self.params),
            "verdict": self.verdict,
            "witnesses": canonical_value(self.witnesses),
            "compared_count": self.compared_count,
            "details": canonical_value(self.details),
        }
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out

    def report_form(self):
        return self.to_dict()


@dataclass
class SuiteReport:
    name: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        verdicts = [c.verdict for c in self.checks]
        if FALSIFIED in verdicts:
            return FALSIFIED
        if INCONCLUSIVE in verdicts:
            return INCONCLUSIVE
        return VERIFIED

    @property
    def ok(self) -> bool:
        return self.verdict != FALSIFIED

    def add(self, check: CheckReport) -> CheckReport:
        self.checks.append(check)
        return check

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "name": self.name,
            "params": canonical_value(self.params),
            "verdict": self.verdict,
            "checks": [c.to_dict(include_timing) for c in self.checks],
        }

    def report_form(self):
        return self.to_dict()
