"""Named numerical checks collected into pass/fail reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Check:
    name: str
    max_residual: float
    threshold: float
    passed: bool

    @classmethod
    def leq(cls, name: str, residual: float, threshold: float) -> "Check":
        """Check that passes when ``residual <= threshold``."""
        residual = float(abs(residual))
        return cls(name, residual, float(threshold), bool(residual <= threshold))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.overall

    def add(self, name: str, residual: float, threshold: float) -> Check:
        check = Check.leq(name, residual, threshold)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.max_residual, c.threshold, c.passed))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def max_residual(self) -> float:
        return max((c.max_residual for c in self.checks), default=0.0)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "overall": self.overall,
            "checks": [c.to_dict() for c in self.checks],
            "metadata": self.metadata,
        }

    def format_table(self) -> str:
        return format_checks(self.checks)


def format_checks(checks: Iterable[Check]) -> str:
    checks = list(checks)
    width = max([len(c.name) for c in checks] + [5])
    lines = [f"{'check':<{width}}  {'residual':>10}  {'threshold':>10}  result"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.name:<{width}}  {c.max_residual:10.3e}  {c.threshold:10.3e}  {status}")
    return "\n".join(lines)
