"""Countable G-sets with lazily explored point spaces.

An :class:`Action` couples a group with an evaluation rule. Points are
hashable Python values whose identity never changes; lazily materialized
spaces (coset spaces of infinite index, the β-ledger spaces) compute a
canonical representative for every point they issue.

Words of a free product act right to left: the rightmost syllable first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .cosets import CosetTable, SchreierBasis
from .errors import (
    ConstructionError,
    FactorMismatchError,
    NoEnumerationError,
)
from .groups import (
    DirectProduct,
    FiniteGroup,
    FiniteSubgroup,
    FreeProduct,
    Group,
    ReducedWord,
    check_cyclic_generator,
)


class Action:
    """Base class. Subclasses implement ``act_syllable`` (free products) or
    ``act_element``; optionally ``points`` (canonical enumeration)."""

    name = "action"
    #: number of points if finite and known
    size: int | None = None

    def __init__(self, group: Group, root: Hashable = None):
        self.group = group
        self.root = root

    def __repr__(self):
        return f"<{type(self).__name__} of {self.group.name}>"

    def act(self, g, x):
        if isinstance(self.group, FreeProduct):
            for s in reversed(g):
                x = self.act_syllable(s.factor, s.payload, x)
            return x
        return self.act_element(g, x)

    def act_syllable(self, factor: int, payload, x):
        return self.act_element(self.group.syllable(factor, payload), x)

    def act_element(self, g, x):
        raise NotImplementedError

    def points(self) -> Iterator:
        raise NoEnumerationError(f"{self!r} has no canonical point enumeration")

    def first_points(self, n: int) -> list:
        out = []
        for x in self.points():
            if len(out) >= n:
                break
            out.append(x)
        return out

    def orbit_key(self, x) -> Hashable | None:
        """A label constant exactly on orbits, when cheaply available."""
        return None

    def route(self, x):
        """A group element carrying ``root`` to ``x``, or ``None`` if unknown.

        Constructions that know their orbit structure override this; callers
        must re-evaluate the element, never trust it.
        """
        return None

    # -- serialization of points -----------------------------------------
    def point_to_json(self, x):
        return to_jsonable(x)

    def point_from_json(self, doc):
        return from_jsonable(doc)


def to_jsonable(x):
    if isinstance(x, ReducedWord):
        return {"w": [[s.factor, to_jsonable(s.payload)] for s in x]}
    if isinstance(x, tuple):
        return [to_jsonable(v) for v in x]
    return x


def from_jsonable(doc):
    from .groups import FactorElement

    if isinstance(doc, dict) and set(doc) == {"w"}:
        return ReducedWord(FactorElement(f, from_jsonable(p)) for f, p in doc["w"])
    if isinstance(doc, list):
        return tuple(from_jsonable(v) for v in doc)
    return doc


def apply(a: Action, w, x):
    """Apply the group element ``w`` to ``x``; the identity word returns ``x``."""
    return a.act(w, x)


# ---------------------------------------------------------------------------
# Basic actions


class RegularAction(Action):
    """Left multiplication of a group on itself."""

    name = "regular"

    def __init__(self, group: Group):
        super().__init__(group, root=group.identity)
        self.size = group.order

    def act(self, g, x):
        return self.group.mul(g, x)

    def act_syllable(self, factor, payload, x):
        return self.group.mul(self.group.syllable(factor, payload), x)

    def points(self):
        return self.group.iter_elements()

    def route(self, x):
        return x


class FunctionAction(Action):
    """An action given by a Python callable ``fn(element, point)``.

    For free products ``fn`` receives single-syllable words.
    """

    name = "function"

    def __init__(self, group: Group, fn: Callable, points: Sequence | None = None, root=None):
        super().__init__(group, root=root if root is not None else (points[0] if points else None))
        self._fn = fn
        self._points = list(points) if points is not None else None
        self.size = len(self._points) if self._points is not None else None

    def act_element(self, g, x):
        return self._fn(g, x)

    def points(self):
        if self._points is None:
            raise NoEnumerationError("no point list given")
        return iter(self._points)


class TrivialAction(FunctionAction):
    name = "trivial"

    def __init__(self, group: Group, points: Sequence):
        super().__init__(group, lambda g, x: x, points)

    def act(self, g, x):
        return x

    def orbit_key(self, x):
        return x


class FiniteCosetAction(Action):
    """A finite group acting on the left cosets of a subgroup."""

    name = "cosets"

    def __init__(self, group: FiniteGroup, subgroup: FiniteSubgroup):
        self.subgroup = subgroup
        reps = sorted({self._canon(group, subgroup, x) for x in range(group.order)})
        super().__init__(group, root=0)
        self._reps = reps
        self.size = len(reps)

    @staticmethod
    def _canon(group, subgroup, x):
        return min(group.mul(x, l) for l in subgroup.elements)

    def act_element(self, g, x):
        return self._canon(self.group, self.subgroup, self.group.mul(g, x))

    def points(self):
        return iter(self._reps)


# ---------------------------------------------------------------------------
# Orbits


@dataclass
class OrbitResult:
    points: list
    closed: bool
    #: point -> (parent point, letter index); the root maps to None
    parent: dict
    letters: list

    def word_to(self, x, group: Group):
        """Group element carrying the root to ``x`` along the BFS tree."""
        letters = self.letters
        seq = []
        while self.parent[x] is not None:
            x, li = self.parent[x]
            seq.append(li)
        out = group.identity
        for li in seq:
            out = group.mul(out, letters[li])
        return out

    def __len__(self):
        return len(self.points)


def orbit(
    a: Action,
    x,
    limit: int,
    generators: Sequence | None = None,
    stop_when: Callable[[Any], bool] | None = None,
) -> OrbitResult:
    """Breadth-first closure of ``x`` under generators and their inverses.

    Reports ``closed=False`` when a new point would exceed ``limit``, or when
    ``stop_when(new_point)`` returns True for a newly discovered point.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if generators is None:
        letters = a.group.letters
    else:
        letters = []
        for g in generators:
            letters.append(g)
            gi = a.group.inv(g)
            if gi != g:
                letters.append(gi)
    parent: dict = {x: None}
    order = [x]
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for li, s in enumerate(letters):
            z = a.act(s, y)
            if z not in parent:
                if len(order) >= limit:
                    return OrbitResult(order, False, parent, letters)
                parent[z] = (y, li)
                order.append(z)
                queue.append(z)
                if stop_when is not None and stop_when(z):
                    return OrbitResult(order, False, parent, letters)
    return OrbitResult(order, True, parent, letters)


# ---------------------------------------------------------------------------
# Disjoint unions and products


class DisjointUnionAction(Action):
    """Tagged union ``⊔ actions``; point ``(i, x)`` lives in component ``i``."""

    name = "disjoint-union"

    def __init__(self, actions: Sequence[Action]):
        if not actions:
            raise ConstructionError("disjoint union of an empty list")
        g = actions[0].group
        for b in actions[1:]:
            if b.group is not g:
                raise FactorMismatchError("disjoint union needs a common group")
        super().__init__(g, root=(0, actions[0].root))
        self.components = list(actions)
        sizes = [b.size for b in actions]
        self.size = None if None in sizes else sum(sizes)

    def act(self, g, x):
        i, y = x
        return (i, self.components[i].act(g, y))

    def points(self):
        iters = [iter(b.points()) for b in self.components]
        live = list(range(len(iters)))
        while live:
            nxt = []
            for i in live:
                try:
                    yield (i, next(iters[i]))
                    nxt.append(i)
                except StopIteration:
                    pass
            live = nxt

    def orbit_key(self, x):
        i, y = x
        k = self.components[i].orbit_key(y)
        return None if k is None else (i, k)


def disjoint_union(actions: Sequence[Action]) -> DisjointUnionAction:
    return DisjointUnionAction(actions)


def _dovetail(a_iter_fn, b_iter_fn) -> Iterator[tuple]:
    """Enumerate pairs from two (possibly infinite) enumerations by diagonals."""
    a_items: list = []
    b_items: list = []
    a_it, b_it = iter(a_iter_fn()), iter(b_iter_fn())
    a_done = b_done = False
    d = 0
    while True:
        if not a_done and len(a_items) <= d:
            try:
                a_items.append(next(a_it))
            except StopIteration:
                a_done = True
        if not b_done and len(b_items) <= d:
            try:
                b_items.append(next(b_it))
            except StopIteration:
                b_done = True
        emitted = False
        for i in range(min(d, len(a_items) - 1), -1, -1):
            j = d - i
            if j < len(b_items):
                yield (a_items[i], b_items[j])
                emitted = True
        if not emitted and a_done and b_done and d >= len(a_items) + len(b_items):
            return
        d += 1


class ProductAction(Action):
    """Coordinatewise action of ``G × H`` on ``X × Y``."""

    name = "product"

    def __init__(self, a: Action, b: Action):
        super().__init__(DirectProduct(a.group, b.group), root=(a.root, b.root))
        self.left, self.right = a, b
        if a.size is not None and b.size is not None:
            self.size = a.size * b.size

    def act(self, g, x):
        return (self.left.act(g[0], x[0]), self.right.act(g[1], x[1]))

    def points(self):
        return _dovetail(self.left.points, self.right.points)

    def orbit_key(self, x):
        ka, kb = self.left.orbit_key(x[0]), self.right.orbit_key(x[1])
        return None if ka is None or kb is None else (ka, kb)


def product_action(a: Action, b: Action) -> ProductAction:
    return ProductAction(a, b)


# ---------------------------------------------------------------------------
# Induced actions


@dataclass
class SubgroupTransversal:
    """A subgroup ``L < H`` described by a left transversal.

    ``coset_index(h)`` returns ``i`` with ``h ∈ transversal[i]·L``;
    ``to_acting(l)`` converts ``l ∈ L`` into an element of the group that
    acts on the inducing set. ``transversal[0]`` must be the identity.
    """

    transversal: list
    coset_index: Callable[[Any], int]
    to_acting: Callable[[Any], Any]
    description: str = "subgroup"
    #: optional inverse of ``to_acting`` (acting element -> subgroup element)
    from_acting: Callable[[Any], Any] | None = None

    @property
    def index(self) -> int:
        return len(self.transversal)


def finite_transversal(group: FiniteGroup, subgroup: FiniteSubgroup) -> SubgroupTransversal:
    reps: list[int] = []
    canon_to_index: dict[int, int] = {}
    for x in range(group.order):
        c = min(group.mul(x, l) for l in subgroup.elements)
        if c not in canon_to_index:
            canon_to_index[c] = len(reps)
            reps.append(c)

    def coset_index(h):
        return canon_to_index[min(group.mul(h, l) for l in subgroup.elements)]

    return SubgroupTransversal(reps, coset_index, lambda l: l, f"{subgroup.name} < {group.name}")


def kernel_transversal(
    table: CosetTable,
    basis: SchreierBasis,
    word_map: Callable[[list[tuple[int, int]]], Any],
    word_unmap: Callable[[Any], list[tuple[int, int]]] | None = None,
) -> SubgroupTransversal:
    """Transversal of a kernel coset table.

    ``word_map`` turns a free word in the Schreier basis into an element of
    the group acting on the inducing set; ``word_unmap`` goes back.
    """
    back = None if word_unmap is None else (lambda g: basis.evaluate(word_unmap(g)))
    return SubgroupTransversal(
        list(table.transversal),
        table.coset_of,
        lambda l: word_map(basis.rewrite(l)),
        table.subgroup_id,
        back,
    )


class InducedAction(Action):
    """The induced H-set realized as ``Z × (H/L)``.

    ``h·(z, t) = (l·z, t')`` where ``h·t = t'·l``, ``t'`` the chosen
    representative and ``l ∈ L``.
    """

    name = "induced"

    def __init__(self, group: Group, sub: SubgroupTransversal, z: Action):
        if not sub.transversal or not group.is_identity(sub.transversal[0]):
            raise ConstructionError("transversal must start with the identity")
        super().__init__(group, root=(z.root, 0))
        self.sub = sub
        self.inducing = z
        if z.size is not None:
            self.size = z.size * sub.index
        self._cocycle: dict = {}

    def cocycle(self, h, ti: int):
        key = (h, ti)
        hit = self._cocycle.get(key)
        if hit is None:
            g = self.group
            ht = g.mul(h, self.sub.transversal[ti])
            tj = self.sub.coset_index(ht)
            l = g.mul(g.inv(self.sub.transversal[tj]), ht)
            hit = (tj, self.sub.to_acting(l))
            self._cocycle[key] = hit
        return hit

    def act(self, h, x):
        if isinstance(self.group, FreeProduct):
            for s in reversed(h):
                x = self.act_syllable(s.factor, s.payload, x)
            return x
        z, ti = x
        tj, l = self.cocycle(h, ti)
        return (self.inducing.act(l, z), tj)

    def act_syllable(self, factor, payload, x):
        z, ti = x
        tj, l = self.cocycle(self.group.syllable(factor, payload), ti)
        return (self.inducing.act(l, z), tj)

    def points(self):
        n = self.sub.index
        for z in self.inducing.points():
            for ti in range(n):
                yield (z, ti)

    def route(self, x):
        # (z, i) = t_i · (z, 0) and (z, 0) = l · root for l ∈ L acting as u
        z, ti = x
        if self.sub.from_acting is None:
            return None
        u = self.inducing.route(z)
        if u is None:
            return None
        g = self.group
        return g.mul(self.sub.transversal[ti], self.sub.from_acting(u))


def induced_action(group: Group, sub: SubgroupTransversal, z: Action) -> InducedAction:
    return InducedAction(group, sub, z)


# ---------------------------------------------------------------------------
# Pullbacks


class FreeProductHom:
    """Homomorphism out of a free product, given by generator images."""

    def __init__(self, source: FreeProduct, target: Group, images: Sequence[Sequence]):
        if len(images) != len(source.factors):
            raise FactorMismatchError("one image list per factor is required")
        self.source, self.target = source, target
        self._letter_images = []
        for f, gens in zip(source.factors, images):
            if len(gens) != len(f.generators):
                raise FactorMismatchError(f"{f.name}: expected {len(f.generators)} generator images")
            imgs = []
            for g, im in zip(f.generators, gens):
                imgs.append(im)
                if f.inv(g) != g:
                    imgs.append(target.inv(im))
            self._letter_images.append(imgs)
        self._cache: dict = {}

    def syllable_image(self, factor: int, payload):
        key = (factor, payload)
        hit = self._cache.get(key)
        if hit is None:
            f = self.source.factors[factor]
            imgs = self._letter_images[factor]
            hit = self.target.identity
            for li in f.as_word(payload):
                hit = self.target.mul(hit, imgs[li])
            self._cache[key] = hit
        return hit

    def __call__(self, w):
        out = self.target.identity
        for s in w:
            out = self.target.mul(out, self.syllable_image(s.factor, s.payload))
        return out


class PullbackAction(Action):
    """``g·x := q(g)·x`` for a homomorphism ``q`` into the acting group."""

    name = "pullback"

    def __init__(self, source: Group, q: Callable, a: Action, lift: Callable | None = None):
        super().__init__(source, root=a.root)
        self.q, self.base = q, a
        self.size = a.size
        self.lift = lift

    def act(self, g, x):
        if isinstance(self.group, FreeProduct) and isinstance(self.q, FreeProductHom):
            for s in reversed(g):
                x = self.base.act(self.q.syllable_image(s.factor, s.payload), x)
            return x
        return self.base.act(self.q(g), x)

    def act_syllable(self, factor, payload, x):
        return self.base.act(self.q.syllable_image(factor, payload), x)

    def points(self):
        return self.base.points()

    def orbit_key(self, x):
        return None

    def route(self, x):
        if self.lift is None:
            return None
        u = self.base.route(x)
        return None if u is None else self.lift(u)

    def point_to_json(self, x):
        return self.base.point_to_json(x)

    def point_from_json(self, doc):
        return self.base.point_from_json(doc)


def pullback(q: Callable, a: Action, source: Group | None = None, lift: Callable | None = None) -> PullbackAction:
    """Pull ``a`` back along ``q``; ``lift`` (a section of ``q``) enables routing."""
    if source is None:
        source = getattr(q, "source", a.group)
    return PullbackAction(source, q, a, lift)


# ---------------------------------------------------------------------------
# Coset actions of free products


class TableCosetAction(Action):
    """Free product acting on the cosets of a finite-index kernel table."""

    name = "table-cosets"

    def __init__(self, table: CosetTable):
        super().__init__(table.group, root=0)
        self.table = table
        self.size = table.index

    def act_syllable(self, factor, payload, x):
        return self.table.rows[(factor, payload)][x]

    def points(self):
        return iter(range(self.table.index))

    def route(self, x):
        return self.table.transversal[x]


@dataclass(frozen=True)
class CyclicSubgroup:
    """The subgroup ``⟨g0·h0⟩`` of a two-factor free product."""

    generator: ReducedWord


class CyclicCosetAction(Action):
    """``G*H`` acting on ``G*H/⟨g0h0⟩``; points are canonical representatives.

    The representative of ``u⟨c⟩`` is the key-minimal element among
    ``u·c^k`` for ``|k| ≤ len(u) + 1``; beyond that range ``u·c^k`` is
    strictly longer than ``u``.
    """

    name = "cyclic-cosets"

    def __init__(self, group: FreeProduct, generator: ReducedWord):
        check_cyclic_generator(group, generator)
        super().__init__(group, root=group.identity)
        self.c = generator
        self._powers: dict[int, ReducedWord] = {0: group.identity}
        self._canon: dict[ReducedWord, ReducedWord] = {}
        self._step: dict = {}
        self._bfs: list = [group.identity]
        self._bfs_seen: set = {group.identity}
        self._bfs_pos = 0

    def _power(self, k: int) -> ReducedWord:
        p = self._powers.get(k)
        if p is None:
            p = self.group.power(self.c, k)
            self._powers[k] = p
        return p

    def canonical(self, u: ReducedWord) -> ReducedWord:
        hit = self._canon.get(u)
        if hit is not None:
            return hit
        g = self.group
        m = len(u) + 1
        best = u
        best_key = g.key(u)
        for k in range(-m, m + 1):
            if k == 0:
                continue
            v = g.mul(u, self._power(k))
            kv = g.key(v)
            if kv < best_key:
                best, best_key = v, kv
        self._canon[u] = best
        return best

    def act_syllable(self, factor, payload, x):
        key = (factor, payload, x)
        hit = self._step.get(key)
        if hit is None:
            hit = self.canonical(self.group.mul(self.group.syllable(factor, payload), x))
            self._step[key] = hit
        return hit

    def act(self, g, x):
        for s in reversed(g):
            x = self.act_syllable(s.factor, s.payload, x)
        return x

    def points(self):
        i = 0
        letters = self.group.letters
        while True:
            while i >= len(self._bfs):
                if self._bfs_pos >= len(self._bfs):
                    return
                y = self._bfs[self._bfs_pos]
                self._bfs_pos += 1
                for s in letters:
                    z = self.act(s, y)
                    if z not in self._bfs_seen:
                        self._bfs_seen.add(z)
                        self._bfs.append(z)
            yield self._bfs[i]
            i += 1

    def route(self, x):
        return x

    def fixed_points(self, w: ReducedWord, candidates: Iterable) -> list:
        return [z for z in candidates if self.act(w, z) == z]


def coset_action(group: FreeProduct, t: CosetTable | CyclicSubgroup) -> Action:
    if isinstance(t, CosetTable):
        if t.group is not group:
            group.check_same(t.group)
        return TableCosetAction(t)
    if isinstance(t, CyclicSubgroup):
        return CyclicCosetAction(group, t.generator)
    raise TypeError(f"unsupported subgroup description {t!r}")
