"""Decide membership in the class of groups with a faithful transitive
amenable action, for free products, from user-asserted flags.

A free product of finitely many factors is blocked exactly when all factors
but one have property (F) and the remaining one has virtually (F); with
infinitely many factors it is never blocked. Unknown flags are resolved by
asking whether every consistent completion gives the same answer.
"""
from __future__ import annotations

import math
from typing import Sequence

from ..errors import ClassificationConflict
from ..groups import Flags

IN_A, VIRTUALLY_F, UNKNOWN = "in_A", "virtually_F", "unknown"

# per-factor states: has (F); virtually (F) without (F); neither
F, V, N = "F", "V", "N"


def possible_states(flags: Flags) -> frozenset[str]:
    """States of one factor consistent with its flags."""
    states = {F, V, N}
    if flags.has_F is True:
        states &= {F}
    elif flags.has_F is False:
        states &= {V, N}
    if flags.virtually_F is True:
        states &= {F, V}
    elif flags.virtually_F is False:
        states &= {N}
    if not states:
        raise ClassificationConflict("has_F = true contradicts virtually_F = false")
    return frozenset(states)


def classify(factors: Sequence, n: int | float | None = None) -> str:
    """``"virtually_F"``, ``"in_A"`` or ``"unknown"`` for the free product of ``factors``.

    ``factors`` holds groups (their ``flags`` are read) or :class:`Flags`.
    ``n`` is the number of factors; pass ``math.inf`` for a countably
    infinite free product whose first factors are listed.
    """
    if n is None:
        n = len(factors)
    if n != math.inf and n < 2:
        raise ValueError("classify needs at least two factors")
    flags = [f if isinstance(f, Flags) else f.flags for f in factors]
    sets = [possible_states(fl) for fl in flags]
    if n == math.inf:
        return IN_A
    # blocked iff every factor is F except at most one, which is F or V
    non_f_forced = [i for i, s in enumerate(sets) if F not in s]
    can_block = len(non_f_forced) <= 1 and all(V in sets[i] for i in non_f_forced)
    can_pass = any(N in s for s in sets) or sum(1 for s in sets if s & {V, N}) >= 2
    if can_block and can_pass:
        return UNKNOWN
    return VIRTUALLY_F if can_block else IN_A
