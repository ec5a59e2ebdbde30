"""Validation reports with first-failure witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool = True
    witness: object = None
    checked: int = 0
    skipped: int = 0


@dataclass
class ValidationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name)
        self.checks.append(c)
        return c

    def record(self, name: str, ok: bool, witness=None) -> bool:
        c = self.check(name)
        c.checked += 1
        if not ok and c.passed:
            c.passed = False
            c.witness = witness
        return ok

    def skip(self, name: str, count: int = 1):
        self.check(name).skipped += count

    def fail(self, name: str, witness=None):
        self.record(name, False, witness)

    def merge(self, other: "ValidationReport", prefix: str = "") -> "ValidationReport":
        for c in other.checks:
            mine = self.check(prefix + c.name)
            mine.checked += c.checked
            mine.skipped += c.skipped
            if not c.passed and mine.passed:
                mine.passed = False
                mine.witness = c.witness
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def first_failure(self) -> Check | None:
        f = self.failures
        return f[0] if f else None

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"{self.subject}: {c.name}: {status} (checked {c.checked}, skipped {c.skipped})"
            if not c.passed:
                line += f" witness {c.witness}"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        f = report.first_failure
        msg = f"{report.subject}: {f.name} failed, witness {f.witness}" if f else report.subject
        super().__init__(msg)
