"""Validation reports and library exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class GraevError(Exception):
    """Base class for errors raised by the library."""


class ValidationError(GraevError):
    """An input violates a structural requirement; ``witness`` shows where."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class BoundError(GraevError):
    """A search bound is too small for the requested computation."""


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: Any
    detail: str = ""

    def __str__(self):
        text = f"{self.rule}: {self.witness!r}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class ValidationReport:
    """Collected violations; an empty report means the object is valid."""

    subject: str = ""
    violations: list[Violation] = field(default_factory=list)

    def add(self, rule: str, witness: Any, detail: str = "") -> None:
        self.violations.append(Violation(rule, witness, detail))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def by_rule(self, rule: str) -> list[Violation]:
        return [v for v in self.violations if v.rule == rule]

    def raise_if_invalid(self) -> None:
        if self.violations:
            first = self.violations[0]
            raise ValidationError(f"{self.subject or 'object'} invalid: {first}", first.witness)

    def __str__(self):
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += [f"  - {v}" for v in self.violations[:20]]
        return "\n".join(lines)
