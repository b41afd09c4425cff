"""Named numerical checks with thresholds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

CHECK_TOL = 1e-8


@dataclass
class Check:
    name: str
    violation: float
    threshold: float
    detail: str = ""
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return math.isfinite(self.violation) and self.violation <= self.threshold


@dataclass
class CheckReport:
    checks: dict = field(default_factory=dict)

    def add(self, name: str, violation: float, threshold: float = CHECK_TOL, detail: str = ""):
        self.checks[name] = Check(name, float(violation), threshold, detail)
        return self.checks[name]

    def add_bool(self, name: str, ok: bool, detail: str = ""):
        # booleans are reported as violation 0 (pass) or 1 (fail) against threshold 0
        return self.add(name, 0.0 if ok else 1.0, 0.0, detail)

    def merge(self, other: "CheckReport", prefix: str = ""):
        for name, c in other.checks.items():
            key = f"{prefix}{name}"
            self.checks[key] = Check(key, c.violation, c.threshold, c.detail, c.elapsed)
        return self

    def __getitem__(self, name) -> Check:
        return self.checks[name]

    def __contains__(self, name) -> bool:
        return name in self.checks

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failures(self) -> list:
        return [c for c in self.checks.values() if not c.passed]

    @property
    def max_violation(self) -> float:
        vals = [c.violation for c in self.checks.values()]
        return max(vals) if vals else 0.0

    def __str__(self):
        lines = []
        for name in sorted(self.checks):
            c = self.checks[name]
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag} {name}: {c.violation:.3e} (<= {c.threshold:.1e}) {c.detail}".rstrip())
        return "\n".join(lines)
