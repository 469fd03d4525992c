from __future__ import annotations

import itertools
import random

import pytest

from amenact.actions import (
    CyclicCosetAction,
    CyclicSubgroup,
    FreeProductHom,
    RegularAction,
    TrivialAction,
    coset_action,
    disjoint_union,
    finite_transversal,
    induced_action,
    orbit,
    product_action,
    pullback,
)
from amenact.cosets import kernel_coset_table
from amenact.errors import FactorMismatchError
from amenact.groups import FiniteGroup, FiniteSubgroup, Integers

from oracles import brute_induced, count_orbits, is_free, random_induced_instance, z_action

def test_induced_action_matches_brute_force():
    rng = random.Random(11)
    for _ in range(50):
        H, L, blocks = random_induced_instance(rng)
        Z = z_action(L, blocks)
        sub = finite_transversal(H, L)
        X = induced_action(H, sub, Z)
        pts = list(X.points())
        cls, reps = brute_induced(H, L, Z)
        assert len(pts) == len(reps) == Z.size * sub.index
        # (z, i) ↦ [t_i, z] is an H-equivariant bijection
        phi = {p: cls[(sub.transversal[p[1]], p[0])] for p in pts}
        assert len(set(phi.values())) == len(pts)
        for h in range(H.order):
            for p in pts:
                hh, z = reps[phi[p]]
                assert phi[X.act(h, p)] == cls[(H.mul(h, hh), z)]
        z_pts = list(Z.points())
        z_trans = count_orbits(z_pts, Z.act, L.elements) == 1
        x_trans = count_orbits(pts, X.act, H.generators) == 1
        assert z_trans == x_trans
        z_free = is_free(z_pts, Z.act, L.elements, 0)
        x_free = is_free(pts, X.act, range(H.order), 0)
        assert z_free == x_free


def test_induced_from_trivial_subgroup_is_regular():
    H = FiniteGroup.symmetric(3)
    L = FiniteSubgroup(H, [0])
    Z = TrivialAction(L, ["*"])
    X = induced_action(H, finite_transversal(H, L), Z)
    assert X.size == 6
    assert all(X.act(h, X.root) != X.root for h in range(1, 6))


def test_disjoint_union_and_product():
    z = Integers()
    a = RegularAction(z)
    u = disjoint_union([a, a])
    assert u.act(3, (1, 4)) == (1, 7)
    assert u.first_points(4) == [(0, 0), (1, 0), (0, 1), (1, 1)]
    g = FiniteGroup.cyclic(3)
    p = product_action(RegularAction(g), RegularAction(g))
    assert p.size == 9
    assert sorted(p.points()) == sorted(itertools.product(range(3), range(3)))
    with pytest.raises(FactorMismatchError):
        disjoint_union([a, RegularAction(Integers())])


def test_product_enumeration_covers_infinite_pairs():
    z = Integers()
    p = product_action(RegularAction(z), RegularAction(z))
    pts = p.first_points(200)
    assert len(set(pts)) == 200
    assert (0, 0) in pts and (1, -1) in pts


def test_table_coset_action_matches_table(z2z3):
    t = kernel_coset_table(z2z3)
    a = coset_action(z2z3, t)
    for w in z2z3.ball(5):
        assert a.act(w, 0) == t.coset_of(w)


def test_cyclic_coset_action(zz):
    c = zz.word((0, 1), (1, 1))
    a = coset_action(zz, CyclicSubgroup(c))
    assert isinstance(a, CyclicCosetAction)
    assert a.act(c, a.root) == a.root
    assert a.act(zz.power(c, -5), a.root) == a.root
    assert a.act(zz.word((1, 1)), a.root) == a.act(zz.word((0, -1)), a.root)
    pts = a.first_points(100)
    assert len(set(pts)) == 100
    # canonical points are fixed by the route
    for x in pts:
        assert a.act(a.route(x), a.root) == x


def test_pullback_along_hom(z2z3):
    # Z/2 * Z/3 → Z/6 sending the generators to 3 and 2
    z6 = FiniteGroup.cyclic(6)
    q = FreeProductHom(z2z3, z6, [[3], [2]])
    a = pullback(q, RegularAction(z6))
    for w in z2z3.ball(4):
        assert a.act(w, 0) == q(w)


def test_orbit_reports_closure():
    g = FiniteGroup.symmetric(3)
    r = orbit(RegularAction(g), 0, 100)
    assert r.closed and len(r) == 6
    for x in r.points:
        assert g.mul(r.word_to(x, g), 0) == x
    r = orbit(RegularAction(Integers()), 0, 10)
    assert not r.closed
