"""Faithful transitive amenable actions of ``G * H`` for finite ``G``, ``H``.

Pipeline: the kernel ``F`` of ``G * H → G × H`` is free of rank
``(|G|-1)(|H|-1)``. ``F`` acts amenably: regularly when the rank is one,
otherwise through :func:`build_free_product_action` on ``Z * F_{r-1}``.
The action is induced up to ``G * H`` (``F`` has finite index, hence is
co-amenable), pulled back along the quotient map (the identity here, since
the factors are taken as their own quotients) and finally upgraded.
"""
from __future__ import annotations

from fractions import Fraction

from ..actions import Action, FreeProductHom, InducedAction, RegularAction, kernel_transversal, pullback
from ..cosets import kernel_coset_table, schreier_basis
from ..errors import ConstructionError
from ..folner import FolnerSequence
from ..groups import FiniteGroup, FreeGroup, FreeProduct, Integers
from .beta import build_free_product_action
from .common import ConstructionReport
from .upgrade import sizes_unbounded, upgrade_to_faithful


def _sign(e: int) -> int:
    return 1 if e > 0 else -1


def free_ball_size(rank: int, radius: int) -> int:
    """Number of elements of word length ≤ ``radius`` in a free group of the given rank."""
    m = 2 * rank
    return 1 + sum(m * (m - 1) ** (k - 1) for k in range(1, radius + 1))


def inner_word_budget(rank: int, word_budget: int, cap: int = 2000) -> int:
    """Largest radius ≤ ``word_budget`` whose ball in the kernel has at most ``cap`` elements.

    The kernel action only has to be transitive and amenable; faithfulness
    of the final action comes from the upgrade.
    """
    r = word_budget
    while r > 1 and free_ball_size(rank, r) > cap:
        r -= 1
    return r


def free_kernel_action(rank: int, depth: int, word_budget: int, seed: int = 0):
    """An amenable action of the free group of the given rank, in Schreier-basis coordinates.

    Returns ``(action, sequence, word_map, word_unmap, inner_report)``.
    """
    if rank == 1:
        z = Integers()
        a = RegularAction(z)
        seq = FolnerSequence(
            {n: list(range(-n, n + 1)) for n in range(1, depth + 1)},
            bound=lambda n, s: Fraction(2, s),
            bound_label="2/|A_n|",
        )

        def word_map(word):
            return sum(e for _, e in word)

        def word_unmap(k):
            return [(0, _sign(k))] * abs(k)

        return a, seq, word_map, word_unmap, None
    a, rep = build_free_product_action(Integers(), FreeGroup(rank - 1), depth=depth, word_budget=word_budget, seed=seed)
    fp: FreeProduct = a.group

    def word_map(word):
        raw = [(0, e) if g == 0 else (1, (g * e,)) for g, e in word]
        return fp.reduce(raw)

    def word_unmap(u):
        out = []
        for s in u:
            if s.factor == 0:
                out += [(0, _sign(s.payload))] * abs(s.payload)
            else:
                out += [(abs(x), _sign(x)) for x in s.payload]
        return out

    return a, rep.sequence, word_map, word_unmap, rep


def finite_quotient_route(
    G: FiniteGroup,
    H: FiniteGroup,
    depth: int = 30,
    word_budget: int = 6,
    point_budget: int = 500,
    search_budget: int = 200,
    seed: int = 0,
) -> tuple[Action, ConstructionReport]:
    for f in (G, H):
        if not isinstance(f, FiniteGroup):
            raise ConstructionError(f"{f.name} is not a finite table group")
        if f.order == 1:
            raise ConstructionError(f"{f.name} is trivial; the free product is not a proper instance")
    L = FreeProduct([G, H])
    table = kernel_coset_table(L)
    basis = schreier_basis(table)
    rank = basis.rank
    inner_budget = inner_word_budget(rank, word_budget)
    f_action, f_seq, word_map, word_unmap, inner = free_kernel_action(rank, depth, inner_budget, seed)
    sub = kernel_transversal(table, basis, word_map, word_unmap)
    induced = InducedAction(L, sub, f_action)
    identity = FreeProductHom(L, L, [[L.syllable(i, g) for g in f.generators] for i, f in enumerate(L.factors)])
    base = pullback(identity, induced, source=L, lift=lambda u: u)
    seq = FolnerSequence(
        {n: [(z, t) for z in pts for t in range(table.index)] for n, pts in f_seq.sets.items()},
    )
    if not sizes_unbounded(seq.sizes()):
        raise ConstructionError("Følner set sizes of the induced action stay bounded")
    a, rep = upgrade_to_faithful(
        base, seq, word_budget=word_budget, point_budget=point_budget, search_budget=search_budget, seed=seed
    )
    out = ConstructionReport(
        "finite_quotient",
        [G.describe(), H.describe()],
        a,
        rep.certificates,
        rep.folner,
        rep.sequence,
        rep.budgets,
        seed,
        dict(rep.details),
    )
    out.details.update(
        {
            "kernel_index": table.index,
            "kernel_rank": rank,
            "branch": "regular Z" if rank == 1 else f"free product Z * F{rank - 1}",
            "inner_word_budget": inner_budget if rank > 1 else None,
        }
    )
    if inner is not None:
        out.details["inner_statuses"] = inner.statuses()
    return a, out
