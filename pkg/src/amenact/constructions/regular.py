"""Left-regular actions of amenable groups with built-in Følner families."""
from __future__ import annotations

from fractions import Fraction

from ..actions import RegularAction
from ..errors import ClassificationConflict, UnsupportedGroupError
from ..folner import FolnerSequence
from ..groups import DirectSum, FiniteGroup, FreeGroup, Group, Integers, Wreath


def _intervals(depth: int) -> dict[int, list[int]]:
    return {n: list(range(n)) for n in range(1, depth + 1)}


def _lamp_boxes(w: Wreath, depth: int) -> dict[int, list]:
    # {(f, k): |k| <= n, supp f ⊆ [k - n, k + n]}
    q = w.factor
    sets = {}
    for n in range(1, depth + 1):
        width = 2 * n + 1
        configs = [()]
        for off in range(width):
            configs = [c + ((off, x),) if x else c for c in configs for x in range(q.order)]
        box = []
        for k in range(-n, n + 1):
            for c in configs:
                box.append((tuple((k - n + off, x) for off, x in c), k))
        sets[n] = box
    return sets


def regular_action(group: Group, depth: int = 10) -> tuple[RegularAction, FolnerSequence]:
    """The left-regular action of an amenable group and a Følner family.

    Families: the whole group (finite), ``[0, n)`` (integers and rank-one
    free groups), configurations on the first ``n`` coordinates (direct
    sums), and ``{(f, k): |k| ≤ n, supp f ⊆ [k-n, k+n]}`` (lamplighters).
    """
    if group.flags.is_amenable is False:
        raise ClassificationConflict(f"{group.name} is flagged non-amenable")
    a = RegularAction(group)
    if isinstance(group, FiniteGroup):
        full = list(range(group.order))
        seq = FolnerSequence({n: full for n in range(1, depth + 1)}, bound=lambda n, s: Fraction(0), bound_label="0")
    elif isinstance(group, Integers):
        seq = FolnerSequence(_intervals(depth), bound=lambda n, s: Fraction(2, n), bound_label="2/n")
    elif isinstance(group, FreeGroup) and group.rank == 1:
        sets = {n: [group.power((1,), k) for k in range(n)] for n in range(1, depth + 1)}
        seq = FolnerSequence(sets, bound=lambda n, s: Fraction(2, n), bound_label="2/n")
    elif isinstance(group, DirectSum):
        q = group.factor.order
        sets = {n: [group.element_at(i) for i in range(q**n)] for n in range(1, depth + 1)}
        # coordinate generators beyond the box move every point out
        seq = FolnerSequence(sets, bound_label="0 on the first n coordinates")
    elif isinstance(group, Wreath):
        seq = FolnerSequence(_lamp_boxes(group, depth), bound=lambda n, s: Fraction(2, 2 * n + 1), bound_label="2/(2n+1)")
    else:
        raise UnsupportedGroupError(f"no built-in Følner family for {group.kind} {group.name}")
    return a, seq

