"""Check results and their deterministic rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction


def fmt_value(x) -> str:
    """Exact rationals as num/den, reals with 15 significant digits."""
    if x is None:
        return "-"
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return f"{float(x):.15g}"


def rel_dev(a: float, b: float) -> float:
    a, b = float(a), float(b)
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


@dataclass
class CheckResult:
    name: str
    passed: bool
    left: str = "-"
    right: str = "-"
    deviation: float = 0.0
    tol: float = 0.0
    detail: str = ""
    runtime: float | None = None

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        s = f"{self.status} {self.name}: left={self.left} right={self.right} dev={self.deviation:.3e} tol={self.tol:.1e}"
        return s + (f" ({self.detail})" if self.detail else "")

    def to_dict(self, timing: bool = False) -> dict:
        d = {"name": self.name, "status": self.status, "left": self.left, "right": self.right,
             "deviation": fmt_value(self.deviation), "tol": fmt_value(self.tol)}
        if self.detail:
            d["detail"] = self.detail
        if timing and self.runtime is not None:
            d["runtime"] = fmt_value(self.runtime)
        return d


def compare(name: str, left, right, tol: float, exact_left=None, exact_right=None, detail: str = "") -> CheckResult:
    """Exact comparison when both exact values exist, else relative tolerance."""
    if exact_left is not None and exact_right is not None:
        ok = Fraction(exact_left) == Fraction(exact_right)
        dev = 0.0 if ok else rel_dev(float(exact_left), float(exact_right))
        return CheckResult(name, ok, fmt_value(exact_left), fmt_value(exact_right), dev, tol, detail)
    dev = rel_dev(left, right)
    return CheckResult(name, dev <= tol, fmt_value(left), fmt_value(right), dev, tol, detail)


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    seed: int | None = None
    trials: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def sorted_checks(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self, timing: bool = False) -> dict:
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "status": "PASS" if self.passed else "FAIL",
                "checks": [c.to_dict(timing) for c in self.sorted_checks()]}

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"suite {self.suite} seed={self.seed} trials={self.trials}"]
        lines += [c.line() for c in self.sorted_checks()]
        lines.append(f"{'PASS' if self.passed else 'FAIL'} ({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines) + "\n"
ReportFile = Report
