"""Pass/fail records shared by every verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check; ``counterexample`` is ``(n, expected, actual)`` for the smallest failure."""

    check: str
    order: int
    passed: bool
    counterexample: tuple[int, int, int] | None = None
    ms: float = 0.0

    def __post_init__(self):
        if self.passed != (self.counterexample is None):
            raise ValueError("a report passes exactly when it has no counterexample")

    def to_json(self) -> dict:
        counter = None
        if self.counterexample is not None:
            n, expected, actual = self.counterexample
            counter = {"n": n, "expected": str(expected), "actual": str(actual)}
        return {
            "check": self.check,
            "order": self.order,
            "pass": self.passed,
            "counterexample": counter,
            "ms": round(self.ms, 3),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
