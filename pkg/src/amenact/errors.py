"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can report
structured failures without parsing messages.
"""
from __future__ import annotations


class AmenactError(Exception):
    code = "error"

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.path = path

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.path is not None:
            out["path"] = self.path
        return out


class MalformedElementError(AmenactError, ValueError):
    code = "malformed-element"


class FactorMismatchError(AmenactError, ValueError):
    code = "factor-mismatch"


class InvalidGroupError(AmenactError, ValueError):
    code = "invalid-group"


class UnsupportedGroupError(AmenactError):
    code = "unsupported-group"


class ClassificationConflict(AmenactError):
    """Raised when user-asserted flags rule out the requested construction."""

    code = "flag-conflict"


class BudgetExhausted(AmenactError):
    code = "budget-exhausted"


class UnexploredPointError(AmenactError):
    code = "unexplored-point"


class NoEnumerationError(AmenactError):
    code = "no-enumeration"


class ConstructionError(AmenactError):
    code = "construction-error"


class ConfigError(AmenactError):
    code = "config-error"
