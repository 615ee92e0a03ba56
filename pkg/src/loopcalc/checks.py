"""Pass/fail records shared by every verification routine."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class CheckReport:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def extend(self, other: CheckReport) -> CheckReport:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __len__(self):
        return len(self.checks)

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "total": len(self.checks),
            "failed": len(self.failures()),
            "failures": [c.as_dict() for c in self.failures()],
            "notes": list(self.notes),
        }
