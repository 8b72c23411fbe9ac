"""Structured pass/fail verification records with deterministic JSON output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["Check", "Report", "REPORT_SCHEMA"]

REPORT_SCHEMA = 1


@dataclass
class Check:
    name: str
    status: str                     # 'pass' | 'fail'
    residuals: list = field(default_factory=list)   # [{context, expression}]
    data: dict = field(default_factory=dict)        # e.g. selected_constant

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        d = {"name": self.name, "status": self.status}
        if self.residuals:
            d["residuals"] = self.residuals
        if self.data:
            d.update(self.data)
        return d


@dataclass
class Report:
    check: str
    checks: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)        # suite, variant, ...

    @property
    def status(self):
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def passed(self):
        return self.status == "pass"

    def add(self, name, status, residuals=None, **data):
        self.checks.append(Check(name, status, residuals or [], data))

    def add_zero_check(self, name, residual_poly, context="", order=None):
        """Pass iff the given polynomial is zero; record the residual otherwise."""
        from .parser import format_poly
        if residual_poly.is_zero():
            self.add(name, "pass")
        else:
            self.add(name, "fail", [{
                "context": context or name,
                "expression": format_poly(residual_poly, order),
            }])
        return residual_poly.is_zero()

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.residuals, c.data))

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        d = {"schema": REPORT_SCHEMA, "check": self.check, "status": self.status}
        d.update(self.meta)
        d["checks"] = [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)]
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def summary_lines(self):
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}")
            for r in c.residuals:
                lines.append(f"     residual [{r.get('context', '')}]: {r.get('expression', '')}")
            for k, v in sorted(c.data.items()):
                lines.append(f"     {k}: {v}")
        lines.append(f"{'PASS' if self.passed else 'FAIL'} {self.check} (overall)")
        return lines
