"""The lamplighter group acting on the cosets of its half-line lamp subgroup.

``G = (⊕_ℤ Q) ⋊ ℤ`` and ``K = ⊕_ℕ Q`` (lamps at coordinates ``≥ 0``). The
coset ``(f, n)K`` is determined by ``n`` and the lamps of ``f`` strictly
below ``n``. A point is ``(n, cfg)`` where ``cfg`` lists those lamps by their
offset ``c - n < 0`` in increasing order; the root is the trivial coset ``(0, ())``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..actions import Action
from ..certify import certify_faithful, certify_transitive
from ..errors import InvalidGroupError
from ..folner import FolnerSequence, verify_sequence
from ..groups import FiniteGroup, Wreath, _config_mul
from .common import ConstructionReport


class LamplighterCosetAction(Action):
    name = "lamplighter-coset"

    def __init__(self, group: Wreath):
        super().__init__(group, root=(0, ()))
        self.q = group.factor

    def absolute(self, x) -> tuple:
        n, cfg = x
        return tuple((n + o, v) for o, v in cfg)

    def coset_of(self, g) -> tuple:
        f, n = g
        return (n, tuple(sorted((c - n, v) for c, v in f if c < n)))

    def act_element(self, g, x):
        f, m = g
        n = x[0]
        return self.coset_of((_config_mul(self.q, f, self.absolute(x), shift=m), n + m))

    def route(self, x):
        return (self.absolute(x), x[0])

    def shell(self, N: int) -> list:
        """Points with ``max(|n|, largest |offset|) = N``, in a fixed order."""
        if N == 0:
            return [(0, ())]
        qs = range(self.q.order)
        out = []
        for n in sorted(range(-N, N + 1), key=lambda k: (abs(k), k < 0)):
            # lamps at offsets -N..-1; the offset -N lamp must be lit unless |n| = N
            for vals in product(qs, repeat=N):
                if abs(n) < N and vals[-1] == 0:
                    continue
                out.append((n, tuple(sorted((-(i + 1), v) for i, v in enumerate(vals) if v))))
        return out

    def points(self):
        N = 0
        while True:
            yield from self.shell(N)
            N += 1

    def box(self, n: int) -> list:
        """``{(m, cfg): |m| ≤ n, offsets in [-n, -1]}``."""
        return [x for N in range(n + 1) for x in self.shell(N)]


def lamplighter_coset_action(
    q: FiniteGroup,
    word_budget: int = 6,
    point_budget: int = 500,
    depth: int = 12,
    search_budget: int = 2000,
    seed: int = 0,
) -> tuple[LamplighterCosetAction, ConstructionReport]:
    """Faithful transitive action of ``Q wr Z`` on ``G/K`` with box Følner sets.

    The shift moves ``2|Q|^n`` points out of the ``n``-th box of size
    ``(2n+1)|Q|^n``; lamps at coordinate 0 preserve every box.
    """
    if not isinstance(q, FiniteGroup):
        raise InvalidGroupError("the lamp group must be a finite table")
    if q.order < 2:
        raise InvalidGroupError("the lamp group must be nontrivial")
    g = Wreath(q)
    a = LamplighterCosetAction(g)
    sets = {n: a.box(n) for n in range(1, depth + 1)}
    seq = FolnerSequence(
        sets,
        {n: a.root for n in sets},
        bound=lambda n, s: Fraction(2, 2 * n + 1),
        bound_label="2/(2n+1)",
    )
    report = ConstructionReport(
        "lamplighter",
        [g.describe()],
        a,
        budgets={"word_budget": word_budget, "point_budget": point_budget, "folner_depth": depth},
        seed=seed,
        sequence=seq,
    )
    report.certificates["faithfulness"] = certify_faithful(a, word_budget, search_budget)
    report.certificates["transitivity"] = certify_transitive(a, n=point_budget)
    labels = [f"lamp:{x}" for x in q.generators] + ["shift"]
    report.folner = verify_sequence(a, seq, g.generators, labels)
    report.details["strictly_decreasing"] = report.folner.strictly_decreasing
    return a, report
