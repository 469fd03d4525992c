"""Actions with finite orbits of unbounded size and Følner sets inside them.

``build_Y`` assembles ``Y = ⊔_n Y_n`` from a family of finite transitive
actions with ``|Y_n| > n``. Each ``A_n`` is the whole orbit ``Y_n``, so every
defect vanishes. Providers:

* a homomorphism ``φ: H → Z`` (integers, free groups, free products with
  such a factor) composed with ``Z → Z/(n+1)``;
* for free products of finite groups, the action induced from the free
  kernel ``K`` of the map onto the product of the factors, with ``K``
  acting on ``Z/(n+1)`` through the exponent of its first basis element.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from ..actions import Action, InducedAction, kernel_transversal
from ..cosets import kernel_coset_table, schreier_basis
from ..errors import ClassificationConflict, UnsupportedGroupError
from ..folner import FolnerSequence
from ..groups import FiniteGroup, FreeGroup, FreeProduct, Group, Integers


class CyclicQuotientAction(Action):
    """``H`` acting on ``Z/m`` through ``φ: H → Z``."""

    name = "cyclic-quotient"

    def __init__(self, group: Group, m: int, phi: Callable[[object], int], unit):
        super().__init__(group, root=0)
        self.m, self.phi, self.unit = m, phi, unit
        self.size = m

    def act(self, g, x):
        return (x + self.phi(g)) % self.m

    def act_syllable(self, factor, payload, x):
        return (x + self.phi(self.group.syllable(factor, payload))) % self.m

    def points(self):
        return iter(range(self.m))

    def route(self, x):
        return self.group.power(self.unit, x)


def _free_exponent(w: tuple) -> int:
    return sum(1 if x == 1 else -1 if x == -1 else 0 for x in w)


def abelian_coordinate(h: Group) -> tuple[Callable[[object], int], object] | None:
    """A surjection ``φ: H → Z`` and an element with ``φ = 1``, if one is built in."""
    if isinstance(h, Integers):
        return (lambda g: g), 1
    if isinstance(h, FreeGroup) and h.rank >= 1:
        return _free_exponent, (1,)
    if isinstance(h, FreeProduct):
        for i, f in enumerate(h.factors):
            inner = abelian_coordinate(f)
            if inner is None:
                continue
            phi_i, unit_i = inner

            def phi(w, i=i, phi_i=phi_i):
                return sum(phi_i(s.payload) for s in w if s.factor == i)

            return phi, h.syllable(i, unit_i)
    return None


class OrbitProvider:
    """Family of finite transitive ``H``-actions; orbit ``n`` has more than ``n`` points."""

    label = "provider"

    def __init__(self, group: Group):
        self.group = group
        self._cache: dict[int, Action] = {}

    def orbit(self, n: int) -> Action:
        a = self._cache.get(n)
        if a is None:
            a = self._build(n)
            self._cache[n] = a
        return a

    def _build(self, n: int) -> Action:
        raise NotImplementedError

    def anchor(self, n: int):
        return self.orbit(n).root


class QuotientProvider(OrbitProvider):
    label = "cyclic quotients Z/(n+1)"

    def __init__(self, group: Group, phi, unit):
        super().__init__(group)
        self.phi, self.unit = phi, unit

    def _build(self, n):
        return CyclicQuotientAction(self.group, n + 1, self.phi, self.unit)


class KernelProvider(OrbitProvider):
    """Free products of finite groups: induce ``Z/(n+1)`` up from the free kernel."""

    label = "induced from the kernel onto the product of the factors"

    def __init__(self, group: FreeProduct):
        super().__init__(group)
        self.table = kernel_coset_table(group)
        self.basis = schreier_basis(self.table)
        if self.basis.rank == 0:
            raise UnsupportedGroupError(f"{group.name} has a trivial kernel")
        self._ints = Integers()
        self.sub = kernel_transversal(
            self.table,
            self.basis,
            lambda word: sum(e for g, e in word if g == 0),
            lambda k: [(0, 1 if k > 0 else -1)] * abs(k),
        )

    def _build(self, n):
        z = CyclicQuotientAction(self._ints, n + 1, lambda k: k, 1)
        return InducedAction(self.group, self.sub, z)


def provider_for(h: Group) -> OrbitProvider:
    """Pick the built-in provider for ``h`` or explain why there is none."""
    if h.flags.virtually_F is True:
        raise ClassificationConflict(
            f"{h.name} is flagged virtually (F); its amenable actions have bounded finite orbits"
        )
    if h.order is not None:
        raise ClassificationConflict(f"{h.name} is finite, hence virtually (F)")
    coord = abelian_coordinate(h)
    if coord is not None:
        return QuotientProvider(h, *coord)
    if isinstance(h, FreeProduct) and all(isinstance(f, FiniteGroup) for f in h.factors):
        return KernelProvider(h)
    raise UnsupportedGroupError(f"no built-in orbit provider for {h.kind} {h.name}")


class OrbitFamilyAction(Action):
    """``Y = ⊔_{n ≥ 1} Y_n``; points are ``(n, y)``."""

    name = "orbit-family"

    def __init__(self, provider: OrbitProvider):
        super().__init__(provider.group, root=(1, provider.anchor(1)))
        self.provider = provider

    def act(self, g, x):
        n, y = x
        return (n, self.provider.orbit(n).act(g, y))

    def act_syllable(self, factor, payload, x):
        n, y = x
        return (n, self.provider.orbit(n).act_syllable(factor, payload, y))

    def points(self):
        n = 1
        while True:
            for y in self.provider.orbit(n).points():
                yield (n, y)
            n += 1

    def orbit_key(self, x):
        return x[0]

    def orbit_points(self, n: int) -> list:
        return [(n, y) for y in self.provider.orbit(n).points()]


def build_Y(h: Group, depth: int) -> tuple[OrbitFamilyAction, FolnerSequence]:
    """An ``H``-set with one finite orbit per ``n`` and ``A_n`` the whole ``n``-th orbit.

    ``|H·y_n| > n`` holds by construction and every defect is zero.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    y = OrbitFamilyAction(provider_for(h))
    sets = {n: y.orbit_points(n) for n in range(1, depth + 1)}
    anchors = {n: (n, y.provider.anchor(n)) for n in range(1, depth + 1)}
    seq = FolnerSequence(sets, anchors, bound=lambda n, s: Fraction(0), bound_label="0")
    return y, seq
