"""An amenable action without finite orbits of a group that is not finitely generated.

For ``G = ⊕_ℕ Q`` the subgroups ``H_k`` of elements supported on the first
``k`` coordinates are finitely generated. ``X = ⊔_{k=1}^{depth} G/H_k``;
the coset of ``g`` in ``G/H_k`` is represented by ``g`` restricted to the
coordinates ``≥ k``. Points are ``(k, configuration)``.
"""
from __future__ import annotations

from ..actions import Action, orbit
from ..errors import ConstructionError, UnsupportedGroupError
from ..folner import FolnerCertificate, certify_folner
from ..groups import DirectSum


class NonFGCosetAction(Action):
    name = "kazhdan"

    def __init__(self, group: DirectSum, depth: int):
        if not isinstance(group, DirectSum) or group.index_set != "N":
            raise UnsupportedGroupError("the coset construction needs a direct sum over N")
        if depth < 1:
            raise ConstructionError("depth 0 gives an empty union")
        super().__init__(group, root=(1, ()))
        self.depth = depth

    @staticmethod
    def _restrict(cfg: tuple, k: int) -> tuple:
        return tuple(p for p in cfg if p[0] >= k)

    def act_element(self, g, x):
        k, cfg = x
        return (k, self._restrict(self.group.mul(g, cfg), k))

    def points(self):
        # round robin over components; component k lists configurations on coordinates >= k
        i = 0
        while True:
            cfg = self.group.element_at(i)
            for k in range(1, self.depth + 1):
                yield (k, tuple((c + k, v) for c, v in cfg))
            i += 1

    def route(self, x):
        return x[1]

    def orbit_key(self, x):
        return x[0]

    def trivial_coset(self, k: int):
        return (k, ())


def support_bound(group: DirectSum, S) -> int:
    """Smallest ``k`` such that every element of ``S`` lives on the first ``k`` coordinates."""
    return max((c + 1 for s in S for c, _ in s), default=0)


def kazhdan_nonfg_action(group: DirectSum, depth: int):
    """The action together with a certificate builder for finite ``S``.

    Returns ``(action, certify)`` where ``certify(S, eps)`` returns the
    singleton certificate at the trivial coset of ``G/H_k`` for the least
    suitable ``k ≤ depth``.
    """
    a = NonFGCosetAction(group, depth)

    def certify(S, eps) -> FolnerCertificate:
        k = max(1, support_bound(group, S))
        if k > depth:
            raise ConstructionError(f"S needs component k = {k} beyond depth {depth}")
        return certify_folner(a, [a.trivial_coset(k)], S, eps)

    return a, certify


def component_orbit_exceeds(a: NonFGCosetAction, k: int, limit: int, extra: int = 10):
    """Breadth-first orbit of the trivial coset in ``G/H_k`` under coordinate
    generators for the first ``k + extra`` coordinates; returns the orbit result."""
    gens = a.group.coordinate_generators(k + extra)
    return orbit(a, a.trivial_coset(k), limit, generators=gens)
