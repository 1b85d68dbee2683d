"""Check results and run reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any


def _clean(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int,)):
        return int(x)
    if isinstance(x, float) or hasattr(x, "dtype"):
        try:
            val = float(x)
        except TypeError:
            return _clean(x.tolist())
        return val if math.isfinite(val) else str(val)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return str(x)


@dataclass
class CheckResult:
    """Outcome of one verification check.

    ``residual`` is the worst value over everything the check measured and
    ``per_mode`` optionally breaks it down by Fourier mode (a string key such
    as ``"(0, 0, 0, 1)"``) or by sub-case.
    """

    name: str
    anchor: str
    residual: float
    threshold: float
    details: dict[str, Any] = field(default_factory=dict)
    per_mode: dict[str, float] = field(default_factory=dict)
    skipped: bool = False
    note: str = ""
    ok: bool | None = None

    @property
    def passed(self) -> bool:
        if self.skipped:
            return True
        if self.ok is not None:
            return self.ok and self.residual <= self.threshold
        return bool(self.residual <= self.threshold)

    def to_json(self) -> dict:
        return _clean(
            {
                "name": self.name,
                "anchor": self.anchor,
                "residual": self.residual,
                "threshold": self.threshold,
                "passed": self.passed,
                "skipped": self.skipped,
                "note": self.note,
                "details": self.details,
                "per_mode": self.per_mode,
            }
        )

    @classmethod
    def from_json(cls, data: dict) -> CheckResult:
        res = cls(
            name=data["name"],
            anchor=data["anchor"],
            residual=float(data["residual"]),
            threshold=float(data["threshold"]),
            details=data.get("details", {}),
            per_mode={k: float(v) for k, v in data.get("per_mode", {}).items()},
            skipped=bool(data.get("skipped", False)),
            note=data.get("note", ""),
        )
        if not data.get("skipped") and data.get("passed") is False and res.residual <= res.threshold:
            res.ok = False
        return res


@dataclass
class Report:
    scenario: str
    checks: list[CheckResult]
    environment: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "environment": _clean(self.environment),
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> Report:
        data = json.loads(text)
        return cls(
            scenario=data["scenario"],
            checks=[CheckResult.from_json(c) for c in data["checks"]],
            environment=data.get("environment", {}),
        )

    def to_csv(self) -> str:
        """One row per (check, mode); checks without a breakdown get mode 'all'."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "mode", "residual", "threshold", "passed"])
        for c in self.checks:
            rows = sorted(c.per_mode.items()) or [("all", c.residual)]
            for mode, r in rows:
                w.writerow([c.name, mode, repr(float(r)), repr(float(c.threshold)), c.passed])
        return buf.getvalue()

    def table(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"scenario: {self.scenario}"]
        for c in self.checks:
            status = "SKIP" if c.skipped else ("PASS" if c.passed else "FAIL")
            lines.append(
                f"  {c.name:<{width}}  {status}  residual={c.residual:.3e}  "
                f"threshold={c.threshold:.1e}"
            )
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)
