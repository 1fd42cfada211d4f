"""Per-property results of the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class PropertyResult:
    """Outcome of one property over a batch of instances.

    ``gating`` results decide the exit status; the others are findings that
    are reported but do not fail a run.
    """

    property: str
    n: int
    instances: int = 0
    mode: str = "symbolic"
    passed: bool = True
    counterexample: Optional[dict] = None
    gating: bool = True
    notes: List[str] = field(default_factory=list)

    def fail(self, instance: dict) -> None:
        if self.passed:
            self.counterexample = instance
        self.passed = False

    def check(self, ok: bool, instance) -> bool:
        self.instances += 1
        if not ok:
            self.fail(instance() if callable(instance) else instance)
        return ok

    def to_json(self) -> dict:
        out = {"property": self.property, "n": self.n, "instance": self.instances,
               "mode": self.mode, "pass": self.passed}
        if not self.gating:
            out["informational"] = True
        if self.notes:
            out["notes"] = list(self.notes)
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out
