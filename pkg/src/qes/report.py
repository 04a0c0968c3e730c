"""Run reports: canonical JSON / CSV artifacts and a human summary.

The JSON document is byte-stable for identical inputs: keys are sorted,
floats go through repr round-tripping, and wall time is kept out of the
machine document (it lives only in the human rendering).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "CheckResult",
    "SectorRecord",
    "RunReport",
    "report_json",
    "report_csv",
    "render_text",
    "summarize_checks",
]


@dataclass(frozen=True)
class CheckResult:
    """One named verdict with a short free-form detail string."""

    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SectorRecord:
    gauge: str
    dim: int
    residual: float
    eigenvalues: tuple
    # per-eigenvalue reference partner and |error|; CSV only, not in JSON
    matched: tuple = ()
    errors: tuple = ()


@dataclass
class RunReport:
    system: str
    params: dict
    sectors: list = field(default_factory=list)
    reference_grid: int = 0
    reference: tuple = ()
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)


def _doc(report: RunReport) -> dict:
    return {
        "system": report.system,
        "params": report.params,
        "sectors": [
            {
                "gauge": s.gauge,
                "dim": int(s.dim),
                "residual": float(s.residual),
                "eigenvalues": [float(v) for v in s.eigenvalues],
            }
            for s in report.sectors
        ],
        "reference": {
            "grid": int(report.reference_grid),
            "eigenvalues": [float(v) for v in report.reference],
        },
        "checks": [
            # numpy scalars sneak in from comparisons; JSON needs built-ins
            {"name": c.name, "pass": bool(c.passed), "detail": c.detail}
            for c in report.checks
        ],
    }


def report_json(report: RunReport) -> str:
    """Canonical document; identical runs must agree byte for byte."""
    return json.dumps(_doc(report), sort_keys=True, indent=2) + "\n"


def report_csv(report: RunReport) -> str:
    lines = ["system,sector,index,eigenvalue,matched_reference,abs_error"]
    for s in report.sectors:
        for i, value in enumerate(s.eigenvalues):
            ref = repr(s.matched[i]) if i < len(s.matched) else ""
            err = repr(s.errors[i]) if i < len(s.errors) else ""
            lines.append(f"{report.system},{s.gauge},{i},{value!r},{ref},{err}")
    return "\n".join(lines) + "\n"


def render_text(report: RunReport) -> str:
    out = [f"{report.system}  params: " + ", ".join(
        f"{k}={report.params[k]}" for k in sorted(report.params))]
    for s in report.sectors:
        vals = ", ".join(f"{v:.8f}" for v in s.eigenvalues)
        out.append(f"  sector {s.gauge}: dim {s.dim}, residual {s.residual:.2e}")
        out.append(f"    eigenvalues [{vals}]")
    if report.reference_grid:
        out.append(f"  reference grid: {report.reference_grid} points")
    for c in report.checks:
        mark = "pass" if c.passed else "FAIL"
        detail = f"  ({c.detail})" if c.detail else ""
        out.append(f"  [{mark}] {c.name}{detail}")
    out.append(f"  wall time: {report.wall_time:.2f}s")
    return "\n".join(out) + "\n"


def summarize_checks(checks: Sequence[CheckResult]) -> str:
    """Pass/fail table for the verification suites."""
    width = max((len(c.name) for c in checks), default=4)
    rows = []
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        detail = f"  {c.detail}" if c.detail else ""
        rows.append(f"{c.name:<{width}}  {mark}{detail}")
    good = sum(1 for c in checks if c.passed)
    rows.append(f"{good}/{len(checks)} checks passed")
    return "\n".join(rows) + "\n"
