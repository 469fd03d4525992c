from __future__ import annotations

import itertools
import math

import pytest

from amenact.constructions import IN_A, UNKNOWN, VIRTUALLY_F, classify
from amenact.errors import ClassificationConflict
from amenact.groups import Flags

VALUES = (True, False, None)


def _completions(flags: Flags):
    """Actual states consistent with the flags; a state is (has_F, virtually_F)."""
    states = [(True, True), (False, True), (False, False)]
    return [
        s for s in states
        if (flags.has_F is None or flags.has_F == s[0]) and (flags.virtually_F is None or flags.virtually_F == s[1])
    ]


def _oracle(flag_list):
    verdicts = set()
    for combo in itertools.product(*[_completions(f) for f in flag_list]):
        non_f = [s for s in combo if not s[0]]
        blocked = len(non_f) == 0 or (len(non_f) == 1 and non_f[0][1])
        verdicts.add(blocked)
    if verdicts == {True}:
        return VIRTUALLY_F
    if verdicts == {False}:
        return IN_A
    return UNKNOWN


# G.has_F x H.virtually_F with H.has_F = False: the two-factor blocking pattern
THEOREM_TABLE = {
    (True, True): VIRTUALLY_F,
    (True, False): IN_A,
    (True, None): UNKNOWN,
    (False, True): IN_A,
    (False, False): IN_A,
    (False, None): IN_A,
    (None, True): UNKNOWN,
    (None, False): IN_A,
    (None, None): UNKNOWN,
}


@pytest.mark.parametrize("g_has_f,h_virt", list(THEOREM_TABLE))
def test_two_factor_table(g_has_f, h_virt):
    flags = [Flags(has_F=g_has_f), Flags(has_F=False, virtually_F=h_virt)]
    assert classify(flags) == THEOREM_TABLE[(g_has_f, h_virt)]
    # order of the factors does not matter
    assert classify(flags[::-1]) == THEOREM_TABLE[(g_has_f, h_virt)]


def test_infinitely_many_factors():
    flags = [Flags(has_F=True), Flags(has_F=True, virtually_F=True)]
    assert classify(flags, math.inf) == IN_A


def test_agrees_with_completion_oracle():
    all_flags = [Flags(None, h, v) for h in VALUES for v in VALUES if not (h is True and v is False)]
    for k in (2, 3):
        for combo in itertools.product(all_flags, repeat=k):
            assert classify(list(combo)) == _oracle(combo), combo


def test_conflicting_flags():
    with pytest.raises(ClassificationConflict):
        classify([Flags(has_F=True, virtually_F=False), Flags()])


def test_needs_two_factors():
    with pytest.raises(ValueError):
        classify([Flags()])
