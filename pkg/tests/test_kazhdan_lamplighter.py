from __future__ import annotations

from fractions import Fraction

import pytest

from amenact.constructions import component_orbit_exceeds, kazhdan_nonfg_action, lamplighter_coset_action
from amenact.constructions.lamplighter import LamplighterCosetAction
from amenact.errors import ConstructionError, InvalidGroupError, UnsupportedGroupError
from amenact.folner import defect
from amenact.groups import DirectSum, FiniteGroup, Integers, Wreath


@pytest.fixture(scope="module")
def sum_z2():
    return DirectSum(FiniteGroup.cyclic(2))


def test_singleton_certificate_on_first_coordinates(sum_z2):
    a, certify = kazhdan_nonfg_action(sum_z2, 5)
    S = [sum_z2.coordinate_element(j, 1) for j in range(3)]
    c = certify(S, Fraction(1, 10**9))
    assert c.ok and c.max_defect == 0
    assert c.A == [(3, ())]


def test_components_have_no_finite_orbit(sum_z2):
    a, _ = kazhdan_nonfg_action(sum_z2, 4)
    for k in range(1, 5):
        assert not component_orbit_exceeds(a, k, 100).closed


def test_coset_action_is_an_action(sum_z2):
    a, _ = kazhdan_nonfg_action(sum_z2, 3)
    pts = a.first_points(40)
    els = [sum_z2.element_at(i) for i in range(16)]
    for x in pts:
        for g in els:
            for h in els[:4]:
                assert a.act(g, a.act(h, x)) == a.act(sum_z2.mul(g, h), x)
    # the first k coordinates fix the trivial coset of G/H_k
    assert a.act(sum_z2.coordinate_element(1, 1), (2, ())) == (2, ())
    assert a.act(sum_z2.coordinate_element(2, 1), (2, ())) != (2, ())


def test_kazhdan_errors(sum_z2):
    with pytest.raises(ConstructionError):
        kazhdan_nonfg_action(sum_z2, 0)
    with pytest.raises(UnsupportedGroupError):
        kazhdan_nonfg_action(Integers(), 3)
    _, certify = kazhdan_nonfg_action(sum_z2, 2)
    with pytest.raises(ConstructionError):
        certify([sum_z2.coordinate_element(4, 1)], Fraction(1, 2))


@pytest.fixture(scope="module")
def lamp():
    return LamplighterCosetAction(Wreath(FiniteGroup.cyclic(2)))


def _coset_oracle(q, g):
    """Representative of gK by brute reduction: drop lamps at or above the shift."""
    f, n = g
    return (n, tuple(sorted((c - n, v) for c, v in f if c < n)))


def test_shift_and_lamp_generators(lamp):
    w = lamp.group
    lamp0, t = w.generators
    assert lamp.act(t, (2, ((-1, 1),))) == (3, ((-1, 1),))
    for n in (-3, -1, 0):
        assert lamp.act(lamp0, (n, ())) == (n, ())
    assert lamp.act(lamp0, (2, ())) == (2, ((-2, 1),))
    assert lamp.act(w.identity, lamp.root) == lamp.root


def test_action_matches_coset_oracle(lamp):
    w = lamp.group
    elems = w.ball(4)
    for x in lamp.first_points(60):
        rep = lamp.route(x)
        for g in elems:
            assert lamp.act(g, x) == _coset_oracle(w.factor, w.mul(g, rep))


def test_shells_partition_points(lamp):
    seen = set()
    for N in range(5):
        sh = lamp.shell(N)
        assert len(set(sh)) == len(sh)
        assert not seen & set(sh)
        seen |= set(sh)
    assert len(lamp.box(3)) == 7 * 2**3


def test_box_defects(lamp):
    lamp0, t = lamp.group.generators
    for n in range(1, 7):
        A = lamp.box(n)
        assert defect(lamp, A, t) == Fraction(2, 2 * n + 1)
        assert defect(lamp, A, lamp0) == 0


def test_lamplighter_report_small():
    a, rep = lamplighter_coset_action(FiniteGroup.cyclic(3), word_budget=3, point_budget=200, depth=5)
    assert rep.statuses() == {"faithfulness": "pass", "transitivity": "pass", "folner": "pass"}
    assert rep.folner.strictly_decreasing and rep.reverify()


def test_trivial_lamp_group_rejected():
    with pytest.raises(InvalidGroupError):
        lamplighter_coset_action(FiniteGroup.cyclic(1))
