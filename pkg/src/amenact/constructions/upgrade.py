"""Upgrading a transitive amenable action of ``G * H`` to a faithful one.

``X = Y ⊔ Z`` with ``Z = (G*H)/⟨g₀h₀⟩``. ``G`` acts as before; ``H`` acts
through ``h^σ = σhσ`` where ``σ`` swaps the base root ``y₀`` with the trivial
coset ``z₀``. Points: ``(0, y)`` for ``y ∈ Y`` and ``(1, z)`` for cosets.
"""
from __future__ import annotations

from fractions import Fraction

from ..actions import Action, CyclicCosetAction, DisjointUnionAction
from ..certify import certify_faithful, certify_transitive
from ..errors import ConstructionError, FactorMismatchError
from ..folner import FolnerSequence, verify_sequence
from ..groups import FreeProduct, ReducedWord
from .common import ConstructionReport


class UpgradedAction(Action):
    name = "upgraded"

    def __init__(self, base: Action, g0, h0):
        fp = base.group
        if not isinstance(fp, FreeProduct) or len(fp.factors) != 2:
            raise FactorMismatchError("the upgrade needs an action of a two-factor free product")
        G, H = fp.factors
        if G.is_identity(g0) or H.is_identity(h0):
            raise ConstructionError("g0 and h0 must be nontrivial")
        super().__init__(fp, root=(0, base.root))
        self.base = base
        self.g0, self.h0 = g0, h0
        self.c = fp.word((0, g0), (1, h0))
        self.z = CyclicCosetAction(fp, self.c)
        self.y0 = (0, base.root)
        self.z0 = (1, fp.identity)
        self.components = [base, self.z]

    def sigma(self, x):
        if x == self.y0:
            return self.z0
        if x == self.z0:
            return self.y0
        return x

    def old_syllable(self, factor, payload, x):
        part, p = x
        if part == 0:
            return (0, self.base.act_syllable(factor, payload, p))
        return (1, self.z.act_syllable(factor, payload, p))

    def old_act(self, g, x):
        for s in reversed(g):
            x = self.old_syllable(s.factor, s.payload, x)
        return x

    def act_syllable(self, factor, payload, x):
        if factor == 0:
            return self.old_syllable(factor, payload, x)
        return self.sigma(self.old_syllable(factor, payload, self.sigma(x)))

    def old_trail(self, w: ReducedWord, x) -> list:
        out = [x]
        for s in reversed(w):
            x = self.old_syllable(s.factor, s.payload, x)
            out.append(x)
        return out

    def points(self):
        return DisjointUnionAction.points(self)

    def z_points(self, n: int) -> list:
        return [(1, z) for z in self.z.first_points(n)]

    def route(self, x):
        fp = self.group
        gh = self.c
        if x == self.y0:
            return fp.identity
        if x == self.z0:
            return gh
        if x[0] == 1:
            # the canonical representative is a shortest word with u·z₀ = z
            u = x[1]
            return fp.mul(u, gh) if u[-1].factor == 0 else u
        w = self.base.route(x[1])
        if w is None:
            return None
        trail = self.old_trail(w, self.y0)
        last = max(i for i, p in enumerate(trail) if p == self.y0)
        w = ReducedWord(w[: len(w) - last])
        if not w:
            return fp.identity
        return w if w[-1].factor == 0 else fp.mul(w, gh)

    def faithfulness_hint(self, w: ReducedWord, candidates: list):
        """A coset moved by ``w`` whose trail under the right prefixes of ``w`` avoids ``z₀``."""
        for x in candidates:
            trail = self.old_trail(w, x)
            if trail[-1] != x and self.z0 not in trail:
                return x
        return None


def changed_points(a: UpgradedAction, g, points) -> list:
    """Points where the new action of ``g`` differs from the original one."""
    return [x for x in points if a.act(g, x) != a.old_act(g, x)]


def sizes_unbounded(sizes: list[int]) -> bool:
    """Within a finite range: the second half reaches beyond the first half."""
    if len(sizes) < 2:
        return False
    half = len(sizes) // 2
    return max(sizes[half:]) > max(sizes[:half])


def upgrade_to_faithful(
    base: Action,
    seq: FolnerSequence,
    g0=None,
    h0=None,
    word_budget: int = 6,
    point_budget: int = 500,
    search_budget: int = 200,
    seed: int = 0,
    check_base: bool = True,
) -> tuple[UpgradedAction, ConstructionReport]:
    """Conjugate ``H`` by the swap of ``y₀`` and ``z₀``.

    ``seq`` is a Følner sequence of ``base`` whose sizes must grow over the
    verified range. ``g0`` and ``h0`` default to the first generator of each
    factor.
    """
    fp = base.group
    if not isinstance(fp, FreeProduct) or len(fp.factors) != 2:
        raise FactorMismatchError("the upgrade needs an action of a two-factor free product")
    G, H = fp.factors
    g0 = G.generators[0] if g0 is None else g0
    h0 = H.generators[0] if h0 is None else h0
    sizes = seq.sizes()
    if not sizes_unbounded(sizes):
        raise ConstructionError(f"Følner set sizes stay bounded in the verified range: {sizes}")
    if check_base:
        base_cert = certify_transitive(base, n=point_budget)
        if not base_cert.passed:
            raise ConstructionError(f"base action not certified transitive ({base_cert.status})")
    a = UpgradedAction(base, g0, h0)
    new_seq = FolnerSequence(
        {n: [(0, y) for y in pts] for n, pts in seq.sets.items()},
        {n: (0, y) for n, y in seq.anchors.items()},
        bound=None if seq.bound is None else (lambda n, size, b=seq.bound: b(n, size) + Fraction(8, size)),
        bound_label="" if seq.bound is None else f"{seq.bound_label} + 8/|A_n|",
    )
    words = [w for w in fp.ball(word_budget) if w]
    candidates = a.z_points(search_budget)
    hints = {}
    for w in words:
        x = a.faithfulness_hint(w, candidates)
        if x is not None:
            hints[w] = x
    report = ConstructionReport(
        "upgrade",
        [f.describe() for f in fp.factors],
        a,
        budgets={"word_budget": word_budget, "point_budget": point_budget, "folner_depth": len(sizes)},
        seed=seed,
        sequence=new_seq,
    )
    report.certificates["faithfulness"] = certify_faithful(a, word_budget, search_budget, hints=hints, words=words)
    report.certificates["transitivity"] = certify_transitive(a, n=point_budget)
    letters = fp.letters
    report.folner = verify_sequence(a, new_seq, letters, [f"{fp.factors[s[0].factor].name}:{s[0].payload}" for s in letters])
    h0z0 = a.z.act(fp.syllable(1, h0), fp.identity)
    g0iz0 = a.z.act(fp.syllable(0, G.inv(g0)), fp.identity)
    report.details.update(
        {
            "g0": G.payload_to_json(g0),
            "h0": H.payload_to_json(h0),
            "h0z0_equals_g0inv_z0": h0z0 == g0iz0,
            "h0z0_moved": h0z0 != fp.identity,
            "base": base.name,
        }
    )
    return a, report
