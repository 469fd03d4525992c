from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amenact.constructions.thompson import (
    PLMap,
    commutator,
    generator_A,
    generator_B,
    standard_commutators,
    threshold,
    thompson_near_zero,
)
from amenact.errors import InvalidGroupError

from oracles import pl_eval


def _dyadics(rng, k=60, depth=10):
    return [Fraction(rng.randrange(1 << depth), 1 << depth) for _ in range(k)] + [Fraction(0), Fraction(1)]


def test_generators_values():
    A, B = generator_A(), generator_B()
    assert A(Fraction(1, 2)) == Fraction(1, 4)
    assert A(Fraction(3, 4)) == Fraction(1, 2)
    assert B(Fraction(3, 4)) == Fraction(5, 8)
    assert B(Fraction(1, 3)) == Fraction(1, 3)


def test_composition_matches_pointwise_oracle():
    rng = random.Random(2)
    A, B = generator_A(), generator_B()
    maps = [A, B, A.inverse(), B.inverse()]
    for _ in range(30):
        word = [rng.choice(maps) for _ in range(rng.randint(1, 6))]
        g = word[0]
        for h in word[1:]:
            g = g * h
        for x in _dyadics(rng):
            y = x
            for h in reversed(word):
                y = pl_eval(h.points, y)
            assert g(x) == y


def test_inverse_round_trip():
    rng = random.Random(4)
    for g in standard_commutators() + [generator_A(), generator_B()]:
        gi = g.inverse()
        assert (g * gi).points == PLMap.identity().points
        for x in _dyadics(rng, 20):
            assert gi(g(x)) == x


def test_commutator_thresholds_by_direct_evaluation():
    for g in standard_commutators():
        assert g.slopes()[0] == 1
        n, moved = threshold(g, 40)
        assert n is not None
        for m in range(n, 41):
            x = Fraction(1, 2**m)
            assert pl_eval(g.points, x) == x
        if n > 0:
            assert pl_eval(g.points, Fraction(1, 2 ** (n - 1))) != Fraction(1, 2 ** (n - 1))


def test_report_and_identity():
    rep = thompson_near_zero([PLMap.identity()] + standard_commutators(), 40)
    assert rep.ok and rep.rows[0].threshold == 0
    assert len(rep.rows) == 6


def test_rejects_bad_maps():
    with pytest.raises(InvalidGroupError):
        thompson_near_zero([generator_A()], 10)
    with pytest.raises(InvalidGroupError):
        PLMap.from_points([(0, 0), (Fraction(1, 3), Fraction(1, 3)), (1, 1)])
    with pytest.raises(InvalidGroupError):
        PLMap.from_points([(0, 0), (Fraction(1, 2), Fraction(3, 8)), (1, 1)])
    with pytest.raises(InvalidGroupError):
        PLMap.from_points([(0, 0), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 4), Fraction(3, 4)), (1, 1)])


def test_dyadic_pair_round_trip():
    for g in standard_commutators():
        assert PLMap.from_dyadic_pairs(g.to_dyadic_pairs()) == g


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from("ABab"), min_size=1, max_size=5), st.lists(st.sampled_from("ABab"), min_size=1, max_size=5))
def test_commutators_are_trivial_near_zero(u, v):
    gens = {"A": generator_A(), "B": generator_B()}
    gens["a"], gens["b"] = gens["A"].inverse(), gens["B"].inverse()

    def word(s):
        g = PLMap.identity()
        for c in s:
            g = g * gens[c]
        return g

    g = commutator(word(u), word(v))
    assert g.slopes()[0] == 1
    assert threshold(g, 30)[0] is not None
