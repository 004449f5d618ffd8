from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of one verification: how many cases were checked, which failed."""

    name: str
    checked: int = 0
    violations: list[Any] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, witness: Any) -> None:
        self.violations.append(witness)

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(
            name=self.name,
            checked=self.checked + other.checked,
            violations=self.violations + other.violations,
            details={**self.details, **other.details},
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "details": self.details,
        }
