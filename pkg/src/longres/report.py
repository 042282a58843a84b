"""Check reports shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    residual: float
    threshold: float
    passed: bool
    witness: dict[str, Any] | None = None
    note: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, threshold: float, *, witness=None,
            note: str = "", higher_is_better: bool = False) -> Check:
        """Record a check. By default it passes iff ``residual <= threshold``;
        with ``higher_is_better`` it passes iff ``residual >= threshold``."""
        residual = float(residual)
        ok = residual >= threshold if higher_is_better else residual <= threshold
        check = Check(name, residual, float(threshold), bool(ok),
                      witness if not ok else None, note)
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"[{flag}] {c.name}: {c.residual:.3e} (threshold {c.threshold:.1e})")
        return "\n".join(lines)
