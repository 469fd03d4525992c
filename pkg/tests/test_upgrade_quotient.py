from __future__ import annotations

import pytest

from amenact.constructions import build_free_product_action, finite_quotient_route, upgrade_to_faithful
from amenact.constructions.finite_quotient import free_ball_size, inner_word_budget
from amenact.constructions.upgrade import changed_points, sizes_unbounded
from amenact.errors import ConstructionError
from amenact.folner import FolnerSequence
from amenact.groups import FiniteGroup, Integers


@pytest.fixture(scope="module")
def upgraded():
    base, rep = build_free_product_action(Integers(), Integers(), depth=12, word_budget=4, point_budget=200)
    return upgrade_to_faithful(base, rep.sequence, word_budget=4, point_budget=200)


def test_upgrade_certificates(upgraded):
    a, rep = upgraded
    assert rep.statuses() == {"faithfulness": "pass", "transitivity": "pass", "folner": "pass"}
    assert rep.reverify()


def test_swap_point_relations(upgraded):
    a, _ = upgraded
    fp = a.group
    G, H = fp.factors
    z0 = a.z0
    # in Z with its coset action, before conjugating by the swap
    h0z0 = a.old_act(fp.syllable(1, a.h0), z0)
    assert h0z0 == a.old_act(fp.syllable(0, G.inv(a.g0)), z0) != z0
    # z0 = g0 · h0^σ · y0
    assert a.act(fp.word((0, a.g0), (1, a.h0)), a.y0) == z0


def test_conjugated_h_changes_few_points(upgraded):
    a, _ = upgraded
    fp = a.group
    pts = a.first_points(600)
    for h in (1, -1, 2, 5):
        s = fp.syllable(1, h)
        changed = changed_points(a, s, pts)
        assert len(changed) <= 4
        assert all(x in (a.y0, a.z0) or a.old_act(s, x) in (a.y0, a.z0) for x in changed)
    assert changed_points(a, fp.syllable(0, 1), pts) == []


def test_z_points_fixed_by_short_words(upgraded):
    a, _ = upgraded
    zs = a.z_points(200)
    for w in a.group.ball(4):
        if w:
            assert sum(1 for z in zs if a.act(w, z) == z) <= 1


def test_upgrade_refuses_bounded_sizes():
    base, rep = build_free_product_action(Integers(), Integers(), depth=4, word_budget=1, point_budget=20)
    flat = FolnerSequence({n: rep.sequence.sets[1] for n in range(1, 5)})
    with pytest.raises(ConstructionError):
        upgrade_to_faithful(base, flat)
    with pytest.raises(ConstructionError):
        upgrade_to_faithful(base, rep.sequence, g0=0)


def test_sizes_unbounded():
    assert sizes_unbounded([1, 2, 3, 4])
    assert not sizes_unbounded([5, 5, 5, 5])
    assert not sizes_unbounded([9, 1, 2, 3])


def test_ball_budget_cap():
    assert free_ball_size(1, 3) == 7
    assert free_ball_size(2, 2) == 17
    assert free_ball_size(4, inner_word_budget(4, 6)) <= 2000
    assert inner_word_budget(1, 6) == 6


def test_dihedral_route_through_integers():
    a, rep = finite_quotient_route(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2), depth=10, point_budget=200)
    assert rep.details["kernel_rank"] == 1
    assert rep.statuses() == {"faithfulness": "pass", "transitivity": "pass", "folner": "pass"}


def test_finite_quotient_rejects_trivial_factor():
    with pytest.raises(ConstructionError):
        finite_quotient_route(FiniteGroup.cyclic(1), FiniteGroup.cyclic(3))
    with pytest.raises(ConstructionError):
        finite_quotient_route(Integers(), FiniteGroup.cyclic(3))
