"""Small argument checks shared by the public entry points."""
from __future__ import annotations

from fractions import Fraction


def check_count(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def check_fraction(value, name: str) -> Fraction:
    """Accept ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"{name} must be exact (int, Fraction or 'p/q'), not float")
    try:
        out = Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name}: cannot read {value!r} as a fraction") from exc
    if out <= 0:
        raise ValueError(f"{name} must be positive")
    return out
