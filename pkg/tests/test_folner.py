from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amenact.actions import RegularAction, disjoint_union
from amenact.constructions.providers import CyclicQuotientAction
from amenact.folner import (
    FolnerSequence,
    NotFound,
    certify_folner,
    defect,
    localize_to_orbit,
    search_folner,
    verify_sequence,
)
from amenact.groups import FiniteGroup, Integers

from oracles import symmetric_difference_defect


def test_interval_defect_exact():
    a = RegularAction(Integers())
    for n in (1, 2, 7, 100):
        A = range(n)
        assert defect(a, A, 1) == defect(a, A, -1) == Fraction(2, n)


def test_defect_matches_oracle():
    z = Integers()
    a = RegularAction(z)
    rng = random.Random(5)
    for _ in range(100):
        A = rng.sample(range(-20, 20), rng.randint(1, 15))
        s = rng.randint(-4, 4)
        assert defect(a, A, s) == symmetric_difference_defect(A, lambda x: x + s)


def test_defect_rejects_empty():
    with pytest.raises(ValueError):
        defect(RegularAction(Integers()), [], 1)


def test_full_orbit_has_zero_defect():
    g = FiniteGroup.symmetric(3)
    a = RegularAction(g)
    assert all(defect(a, range(6), s) == 0 for s in g.letters)


def _multi_orbit():
    z = Integers()
    return disjoint_union([CyclicQuotientAction(z, m, lambda k: k, 1) for m in (3, 5, 8)])


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_orbit_additivity(data):
    a = _multi_orbit()
    pts = [(i, y) for i, m in enumerate((3, 5, 8)) for y in range(m)]
    A = data.draw(st.lists(st.sampled_from(pts), min_size=1, unique=True))
    s = data.draw(st.integers(-3, 3))
    total = defect(a, A, s) * len(A)
    parts = {}
    for x in A:
        parts.setdefault(x[0], []).append(x)
    assert total == sum(defect(a, P, s) * len(P) for P in parts.values())


def test_certificate_and_reverify():
    a = RegularAction(Integers())
    c = certify_folner(a, range(10), [1], Fraction(1, 4))
    assert c.ok and c.max_defect == Fraction(1, 5)
    assert c.reverify(a).defects == c.defects
    bad = certify_folner(a, range(4), [1], Fraction(1, 4))
    assert not bad.ok and bad.violations == [1]
    with pytest.raises(TypeError):
        certify_folner(a, range(4), [1], 0.25)


def test_localize_keeps_best_orbit():
    a = _multi_orbit()
    A = [(0, 0), (1, 0), (1, 1), (1, 2), (1, 3), (1, 4)]
    c = certify_folner(a, A, [1], Fraction(1, 2))
    loc = localize_to_orbit(a, c)
    assert sorted(loc.A) == [(1, y) for y in range(5)]
    assert loc.max_defect == 0 <= c.max_defect


def test_search_finds_interval_or_reports_budget():
    a = RegularAction(Integers())
    c = search_folner(a, [1], Fraction(1, 5), budget=10_000)
    assert c.ok and c.reverify(a).ok
    miss = search_folner(a, [1], Fraction(1, 500), budget=50)
    assert isinstance(miss, NotFound) and not miss.ok


def test_verify_sequence_table_and_csv():
    a = RegularAction(Integers())
    seq = FolnerSequence({n: list(range(n)) for n in range(1, 6)}, bound=lambda n, s: Fraction(2, n), bound_label="2/n")
    rep = verify_sequence(a, seq, [1], ["+1"])
    assert rep.bound_ok and rep.monotone and rep.strictly_decreasing
    assert rep.max_defects() == [Fraction(2, n) for n in range(1, 6)]
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,size,defect_max,defect[+1]"
    assert lines[2] == "2,2,1/1,1/1"
