"""Independent reference implementations used only by the tests."""
from __future__ import annotations

from fractions import Fraction
import random

from amenact.actions import FunctionAction
from amenact.groups import FiniteGroup, FiniteSubgroup


def stack_reduce(raw, mul, is_identity):
    """Free-product normal form by a single left-to-right stack pass.

    ``raw`` is a list of ``(factor, payload)``; ``mul(f, a, b)`` multiplies in
    factor ``f``.
    """
    stack: list[tuple[int, object]] = []
    for f, p in raw:
        if is_identity(f, p):
            continue
        if stack and stack[-1][0] == f:
            q = mul(f, stack.pop()[1], p)
            if not is_identity(f, q):
                stack.append((f, q))
        else:
            stack.append((f, p))
    return [tuple(s) for s in stack]


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def symmetric_difference_defect(A, image) -> Fraction:
    A = set(A)
    sA = {image(x) for x in A}
    return Fraction(len(A ^ sA), len(A))


def pl_eval(points, x: Fraction) -> Fraction:
    """Evaluate a PL map by a linear scan over its breakpoints."""
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= x <= x1:
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    raise ValueError(x)


# -- induced actions by brute force ----------------------------------------

GROUPS = [
    FiniteGroup.cyclic(6),
    FiniteGroup.cyclic(12),
    FiniteGroup.symmetric(3),
    FiniteGroup.dihedral(4),
    FiniteGroup.dihedral(6),
    FiniteGroup.symmetric(4),
    FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(4)),
]


def _closure(g, gens):
    out = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def _subgroup_action(L: FiniteSubgroup, M: set):
    """L acting on its left cosets of M, points are canonical minima."""

    def canon(x):
        return min(L.mul(x, m) for m in M)

    pts = sorted({canon(x) for x in L.elements})
    return FunctionAction(L, lambda l, x: canon(L.mul(l, x)), pts), pts


def random_induced_instance(rng: random.Random):
    while True:
        H = rng.choice(GROUPS)
        L_set = _closure(H, rng.sample(range(H.order), rng.randint(1, 2)))
        if H.order // len(L_set) <= 6:
            break
    L = FiniteSubgroup(H, L_set)
    # Z = one or two blocks of L-cosets of small subgroups, at most 8 points
    blocks = []
    total = 0
    for _ in range(rng.randint(1, 2)):
        for _ in range(20):
            gens = rng.sample(L.elements, rng.randint(0, 1))
            M = _closure(H, gens)
            if L.order // len(M) + total <= 8:
                blocks.append(M)
                total += L.order // len(M)
                break
    return H, L, blocks


def z_action(L, blocks):
    acts = []
    for M in blocks:
        a, _ = _subgroup_action(L, M)
        acts.append(a)
    pts = [(i, x) for i, a in enumerate(acts) for x in a.points()]
    return FunctionAction(L, lambda l, p: (p[0], acts[p[0]].act(l, p[1])), pts)


def brute_induced(H, L, Z):
    """Classes of H × Z under (h l, z) ~ (h, l z); H acts on the left factor."""
    cls = {}
    reps = []
    for h in range(H.order):
        for z in Z.points():
            if (h, z) in cls:
                continue
            k = len(reps)
            reps.append((h, z))
            for l in L.elements:
                cls[(H.mul(h, l), Z.act(L.inv(l), z))] = k
    return cls, reps


def count_orbits(points, act, gens):
    seen, count = set(), 0
    for p in points:
        if p in seen:
            continue
        count += 1
        seen.add(p)
        stack = [p]
        while stack:
            q = stack.pop()
            for g in gens:
                r = act(g, q)
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
    return count


def is_free(points, act, elements, identity):
    return all(act(g, p) != p for p in points for g in elements if g != identity)
