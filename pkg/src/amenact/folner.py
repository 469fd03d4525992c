"""Følner machinery with exact rational defects.

The defect of a finite set ``A`` under ``s`` is ``|A △ sA| / |A|``, a
``Fraction`` in ``[0, 2]``. A set is an ``(S, ε)``-Følner set when every
defect over ``S`` is strictly below ``ε``.
"""
from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ._validation import check_count, check_fraction
from .actions import Action
from .errors import UnexploredPointError


def _as_set(A: Iterable) -> frozenset:
    out = frozenset(A)
    if not out:
        raise ValueError("Følner sets must be nonempty")
    return out


def defect(a: Action, A: Iterable, s) -> Fraction:
    """Exact ``|A △ sA| / |A|``."""
    A = _as_set(A)
    try:
        sA = {a.act(s, x) for x in A}
    except KeyError as exc:
        raise UnexploredPointError(f"point {exc.args[0]!r} is outside the explored region") from exc
    return Fraction(len(A.symmetric_difference(sA)), len(A))


@dataclass
class FolnerCertificate:
    """An ``(S, ε)`` Følner witness; ``ok`` iff every defect is below ``eps``."""

    S: list
    A: list
    defects: list[Fraction]
    eps: Fraction
    action_id: str = ""

    @property
    def max_defect(self) -> Fraction:
        return max(self.defects, default=Fraction(0))

    @property
    def ok(self) -> bool:
        return all(d < self.eps for d in self.defects)

    @property
    def violations(self) -> list:
        return [s for s, d in zip(self.S, self.defects) if d >= self.eps]

    def reverify(self, a: Action) -> "FolnerCertificate":
        return certify_folner(a, self.A, self.S, self.eps)


def certify_folner(a: Action, A: Iterable, S: Sequence, eps) -> FolnerCertificate:
    """Compute every defect over ``S``; the result's ``ok`` says whether it certifies."""
    eps = check_fraction(eps, "eps")
    pts = list(dict.fromkeys(A))
    if not pts:
        raise ValueError("Følner sets must be nonempty")
    defects = [defect(a, pts, s) for s in S]
    return FolnerCertificate(list(S), pts, defects, eps, action_id=a.name)


def _orbit_labels(a: Action, A: Sequence, S: Sequence, limit: int) -> dict:
    """Group the points of ``A`` by orbit.

    Uses ``a.orbit_key`` when the action provides one. Otherwise points are
    merged whenever a bounded breadth-first search (over ``S`` and the
    group letters) from one reaches another.
    """
    keys = {x: a.orbit_key(x) for x in A}
    if all(k is not None for k in keys.values()):
        return keys
    parent = {x: x for x in A}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    members = set(A)
    gens = list(S)
    try:
        gens += [l for l in a.group.letters if l not in gens]
    except Exception:  # groups without a finite generating set
        pass
    inverses = [a.group.inv(g) for g in gens]
    for x in A:
        seen = {x}
        queue = deque([x])
        while queue and len(seen) < limit:
            y = queue.popleft()
            for g in gens + inverses:
                z = a.act(g, y)
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
                    if z in members:
                        parent[find(z)] = find(x)
    return {x: find(x) for x in A}


def localize_to_orbit(a: Action, cert: FolnerCertificate, search_limit: int = 2000) -> FolnerCertificate:
    """Restrict a certificate to the piece of ``A`` inside a single orbit.

    Since ``|A △ sA|`` is additive over orbits, some piece does at least as
    well as ``A``. Picks the piece with the smallest maximal defect, ties
    broken by the smallest point (by ``repr``).
    """
    labels = _orbit_labels(a, cert.A, cert.S, search_limit)
    pieces: dict = {}
    for x in cert.A:
        pieces.setdefault(labels[x], []).append(x)
    if len(pieces) == 1:
        return cert
    best = None
    for piece in pieces.values():
        c = certify_folner(a, piece, cert.S, cert.eps)
        key = (c.max_defect, min(repr(x) for x in piece))
        if best is None or key < best[0]:
            best = (key, c)
    return best[1]


@dataclass
class FolnerSequence:
    """Sets ``A_n`` indexed by ``n``; optional orbit anchors ``y_n``.

    ``bound(n, size)`` is the decay bound the builder promises for the
    maximal defect over its generators, and ``bound_label`` names it.
    """

    sets: dict[int, list]
    anchors: dict[int, object] = field(default_factory=dict)
    bound: Callable[[int, int], Fraction] | None = None
    bound_label: str = ""

    def indices(self) -> list[int]:
        return sorted(self.sets)

    def sizes(self) -> list[int]:
        return [len(self.sets[n]) for n in self.indices()]

    def subsequence(self, indices: Iterable[int]) -> "FolnerSequence":
        keep = list(indices)
        return FolnerSequence(
            {n: self.sets[n] for n in keep},
            {n: self.anchors[n] for n in keep if n in self.anchors},
            self.bound,
            self.bound_label,
        )


@dataclass
class DecayRow:
    n: int
    size: int
    defects: list[Fraction]

    @property
    def max_defect(self) -> Fraction:
        return max(self.defects, default=Fraction(0))


@dataclass
class DecayReport:
    rows: list[DecayRow]
    generator_labels: list[str]
    bound_label: str
    bound_ok: bool | None
    monotone: bool
    strictly_decreasing: bool

    def max_defects(self) -> list[Fraction]:
        return [r.max_defect for r in self.rows]

    def to_rows(self) -> list[dict]:
        return [
            {
                "n": r.n,
                "size": r.size,
                "defects": [fraction_str(d) for d in r.defects],
                "defect_max": fraction_str(r.max_defect),
            }
            for r in self.rows
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "size", "defect_max", *[f"defect[{g}]" for g in self.generator_labels]])
        for r in self.rows:
            w.writerow([r.n, r.size, fraction_str(r.max_defect), *[fraction_str(d) for d in r.defects]])
        return buf.getvalue()


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def verify_sequence(
    a: Action, seq: FolnerSequence, S: Sequence, labels: Sequence[str] | None = None
) -> DecayReport:
    """Tabulate defects of every ``A_n`` over ``S``.

    ``bound_ok`` checks the builder's bound on every row (``None`` when the
    sequence carries no bound). ``monotone`` reports whether the maximal
    defects are non-increasing from the first row where they start doing so
    and stay so through the end of the tested range.
    """
    rows = []
    for n in seq.indices():
        A = seq.sets[n]
        rows.append(DecayRow(n, len(set(A)), [defect(a, A, s) for s in S]))
    bound_ok = None
    if seq.bound is not None:
        bound_ok = all(r.max_defect <= seq.bound(r.n, r.size) for r in rows)
    maxes = [r.max_defect for r in rows]
    # eventually monotone: the tail after the last increase covers at least half the range
    last_increase = max((i for i in range(1, len(maxes)) if maxes[i] > maxes[i - 1]), default=0)
    monotone = last_increase <= len(maxes) // 2
    strictly = all(maxes[i] < maxes[i - 1] for i in range(1, len(maxes)))
    if labels is None:
        labels = [str(i) for i in range(len(S))]
    return DecayReport(rows, list(labels), seq.bound_label, bound_ok, monotone, strictly)


@dataclass
class NotFound:
    """Search exhausted its budget; this says nothing about non-amenability."""

    budget: int
    best: FolnerCertificate | None = None

    ok = False


def search_folner(a: Action, S: Sequence, eps, budget: int, roots: int = 4) -> FolnerCertificate | NotFound:
    """Look for an ``(S, ε)``-Følner set.

    First grows breadth-first balls (over ``S`` and inverses) around the
    first ``roots`` enumerated points; then tries greedy removal of the
    boundary points of the best ball found. ``budget`` caps the total number
    of point evaluations.
    """
    check_count(budget, "budget")
    eps = check_fraction(eps, "eps")
    S = list(S)
    moves = S + [a.group.inv(s) for s in S]
    spent = 0
    best: FolnerCertificate | None = None
    try:
        starts = a.first_points(roots)
    except Exception:
        starts = [a.root]
    for root in starts:
        ball = [root]
        seen = {root}
        frontier = [root]
        while spent < budget:
            cert = certify_folner(a, ball, S, eps)
            spent += len(ball) * len(S)
            if cert.ok:
                return cert
            if best is None or cert.max_defect < best.max_defect:
                best = cert
            nxt = []
            for y in frontier:
                for g in moves:
                    z = a.act(g, y)
                    spent += 1
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            if not nxt:
                break
            ball.extend(nxt)
            frontier = nxt
    if best is not None:
        current = list(best.A)
        improved = True
        while improved and spent < budget and len(current) > 1:
            improved = False
            members = set(current)
            boundary = [x for x in current if any(a.act(g, x) not in members for g in moves)]
            spent += len(current) * len(moves)
            for x in boundary:
                trial = [y for y in current if y != x]
                cert = certify_folner(a, trial, S, eps)
                spent += len(trial) * len(S)
                if cert.ok:
                    return cert
                if cert.max_defect < best.max_defect:
                    best, current, improved = cert, trial, True
                    break
                if spent >= budget:
                    break
    return NotFound(budget, best)
