"""Piecewise-linear homeomorphisms of [0, 1] with dyadic breakpoints.

Maps are stored as breakpoint lists ``[(x₀, y₀), …, (x_k, y_k)]`` of exact
fractions with ``(0, 0)`` first and ``(1, 1)`` last; the map is linear in
between. Maps whose first piece has slope 1 fix a neighbourhood of 0, so
the points ``2⁻ⁿ`` are eventually fixed.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InvalidGroupError

ONE = Fraction(1)


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _is_power_of_two(q: Fraction) -> bool:
    return q > 0 and _is_dyadic(q) and (q.numerator & (q.numerator - 1) == 0)


def dyadic(numerator: int, exponent: int) -> Fraction:
    """``numerator / 2^exponent``."""
    return Fraction(numerator, 1 << exponent) if exponent >= 0 else Fraction(numerator * (1 << -exponent))


@dataclass(frozen=True)
class PLMap:
    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = self.points
        if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise InvalidGroupError("a PL map must run from (0, 0) to (1, 1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise InvalidGroupError("breakpoints must be strictly increasing in both coordinates")
            if not (_is_dyadic(x1) and _is_dyadic(y1)):
                raise InvalidGroupError("breakpoints must be dyadic rationals")
            if not _is_power_of_two((y1 - y0) / (x1 - x0)):
                raise InvalidGroupError("slopes must be powers of two")

    @classmethod
    def from_points(cls, pts: Iterable) -> "PLMap":
        return cls(tuple((Fraction(x), Fraction(y)) for x, y in pts)).simplified()

    @classmethod
    def from_dyadic_pairs(cls, pts: Iterable) -> "PLMap":
        """Breakpoints given as ``[[(p, e), (q, f)], …]`` meaning ``(p/2^e, q/2^f)``."""
        return cls.from_points((dyadic(*x), dyadic(*y)) for x, y in pts)

    def to_dyadic_pairs(self) -> list:
        def pair(q: Fraction):
            return [q.numerator, q.denominator.bit_length() - 1]

        return [[pair(x), pair(y)] for x, y in self.points]

    @classmethod
    def identity(cls) -> "PLMap":
        return cls(((Fraction(0), Fraction(0)), (ONE, ONE)))

    def simplified(self) -> "PLMap":
        """Drop breakpoints where the slope does not change."""
        pts = list(self.points)
        out = [pts[0]]
        for i in range(1, len(pts) - 1):
            (x0, y0), (x1, y1), (x2, y2) = out[-1], pts[i], pts[i + 1]
            if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                out.append(pts[i])
        out.append(pts[-1])
        return PLMap(tuple(out))

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} is outside [0, 1]")
        xs = [p[0] for p in self.points]
        i = min(bisect_right(xs, x), len(xs) - 1)
        (x0, y0), (x1, y1) = self.points[i - 1], self.points[i]
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])]

    def inverse(self) -> "PLMap":
        return PLMap(tuple((y, x) for x, y in self.points))

    def compose(self, other: "PLMap") -> "PLMap":
        """``self ∘ other``: apply ``other`` first."""
        # breakpoints of other, and preimages under other of breakpoints of self
        back = other.inverse()
        xs = {x for x, _ in other.points} | {back(x) for x, _ in self.points}
        return PLMap.from_points((x, self(other(x))) for x in sorted(xs))

    def __mul__(self, other: "PLMap") -> "PLMap":
        return self.compose(other)


def generator_A() -> PLMap:
    return PLMap.from_points([(0, 0), (Fraction(1, 2), Fraction(1, 4)), (Fraction(3, 4), Fraction(1, 2)), (1, 1)])


def generator_B() -> PLMap:
    return PLMap.from_points(
        [
            (0, 0),
            (Fraction(1, 2), Fraction(1, 2)),
            (Fraction(3, 4), Fraction(5, 8)),
            (Fraction(7, 8), Fraction(3, 4)),
            (1, 1),
        ]
    )


def commutator(g: PLMap, h: PLMap) -> PLMap:
    """``[g, h] = g h g⁻¹ h⁻¹``."""
    return g * h * g.inverse() * h.inverse()


def standard_commutators() -> list[PLMap]:
    """Five commutators of words in the standard generators."""
    A, B = generator_A(), generator_B()
    Ai, Bi = A.inverse(), B.inverse()
    return [
        commutator(A, B),
        commutator(Ai, B),
        commutator(A * A, B),
        commutator(A, B * B),
        commutator(A * B, Bi * A),
    ]


@dataclass
class NearZeroRow:
    index: int
    threshold: int | None
    checked: tuple[int, int]
    moved: list[int]

    @property
    def ok(self) -> bool:
        return self.threshold is not None


@dataclass
class NearZeroReport:
    depth: int
    rows: list[NearZeroRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "rows": [
                {"index": r.index, "threshold": r.threshold, "checked": list(r.checked), "moved": r.moved}
                for r in self.rows
            ],
            "ok": self.ok,
        }


def threshold(g: PLMap, depth: int) -> tuple[int | None, list[int]]:
    """Least ``N`` with ``g(2⁻ᵐ) = 2⁻ᵐ`` for all ``N ≤ m ≤ depth``, and the moved exponents."""
    moved = [m for m in range(depth + 1) if g(Fraction(1, 1 << m)) != Fraction(1, 1 << m)]
    if depth in moved:
        return None, moved
    return (max(moved) + 1 if moved else 0), moved


def thompson_near_zero(S: Sequence[PLMap], depth: int = 40) -> NearZeroReport:
    """Thresholds past which each map fixes the points ``2⁻ⁿ`` up to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rows = []
    for i, g in enumerate(S):
        if g.slopes()[0] != 1:
            raise InvalidGroupError(f"map {i} has slope {g.slopes()[0]} near 0, not 1")
        n, moved = threshold(g, depth)
        rows.append(NearZeroRow(i, n, (0 if n is None else n, depth), moved))
    return NearZeroReport(depth, rows)
