"""Shared result type for the builders."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..actions import Action
from ..certify import Certificate
from ..folner import DecayReport, FolnerSequence


@dataclass
class ConstructionReport:
    """What a builder produced and how far it was checked."""

    name: str
    inputs: list[dict]
    action: Action | None
    certificates: dict[str, Certificate] = field(default_factory=dict)
    folner: DecayReport | None = None
    sequence: FolnerSequence | None = None
    budgets: dict = field(default_factory=dict)
    seed: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    def reverify(self) -> bool:
        """Re-evaluate every embedded certificate against the action."""
        return all(c.verify(self.action) for c in self.certificates.values() if c.passed)

    def statuses(self) -> dict[str, str]:
        out = {k: c.status for k, c in self.certificates.items()}
        if self.folner is not None:
            out["folner"] = "pass" if self.folner_ok() else "refuted"
        return out

    def folner_ok(self) -> bool:
        f = self.folner
        if f is None:
            return True
        return f.bound_ok is not False and f.monotone
