from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of a single verification with the witnesses that broke it."""

    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class ValidationReport:
    checks: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self) -> bool:
        return self.ok

    def add(self, name: str, passed: bool, message: str | None = None) -> None:
        self.checks[name] = bool(passed)
        if message and not passed:
            self.messages.append(f"{name}: {message}")

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "messages": list(self.messages), **self.artifacts}


class StructuralError(ValueError):
    """Input that is not the kind of object an operation expects."""
