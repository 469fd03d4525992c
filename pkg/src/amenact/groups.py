"""Exact arithmetic for the groups used by the constructions.

Every group kind exposes the same small protocol: ``identity``, ``mul``,
``inv``, ``validate``, ``key`` (a total order used for canonical choices),
``letters`` (generators followed by their inverses) and a deterministic
enumeration ``element_at`` / ``index_of``.

Enumeration conventions (fixed, since the diagonal constructions depend on
them):

* finite tables: table order ``0, 1, ..., n-1``;
* integers: ``0, 1, -1, 2, -2, ...``;
* free groups, free products, wreath and direct products: shortlex over
  ``letters``, i.e. breadth-first from the identity appending letters on
  the right;
* direct sums: by the largest occupied coordinate, then lexicographically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    FactorMismatchError,
    InvalidGroupError,
    MalformedElementError,
    NoEnumerationError,
)

MAX_TABLE_ORDER = 1000


@dataclass(frozen=True)
class Flags:
    """User-asserted classification flags (``None`` means unknown).

    Never computed by the library; property (F) is not decidable from a
    descriptor.
    """

    is_amenable: bool | None = None
    has_F: bool | None = None
    virtually_F: bool | None = None

    def normalized(self) -> "Flags":
        # has_F implies virtually_F; not virtually_F implies not has_F
        has_F, virt = self.has_F, self.virtually_F
        if has_F is True:
            virt = True
        if virt is False:
            has_F = False
        return Flags(self.is_amenable, has_F, virt)

    def to_dict(self) -> dict:
        return {
            "is_amenable": self.is_amenable,
            "has_F": self.has_F,
            "virtually_F": self.virtually_F,
        }


class ElementList(list):
    """A list of elements that remembers whether the request was truncated."""

    truncated: bool = False


class Group:
    """Base class; subclasses provide the arithmetic."""

    kind = "abstract"
    finitely_generated = True

    def __init__(self, name: str | None = None, flags: Flags | None = None):
        self.name = name or self.kind
        self.flags = flags or Flags()
        self._bfs_elems: list = []
        self._bfs_index: dict = {}
        self._bfs_depth: list[int] = []
        self._bfs_parent: list[tuple[int, int]] = []
        self._bfs_level_start: list[int] = []
        self._bfs_closed = False

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    # -- arithmetic -------------------------------------------------------
    identity: Any = None

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_identity(self, a) -> bool:
        return a == self.identity

    def validate(self, a) -> None:
        raise NotImplementedError

    def key(self, a):
        return a

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def product(self, elements: Iterable):
        result = self.identity
        for e in elements:
            result = self.mul(result, e)
        return result

    @property
    def order(self) -> int | None:
        return None

    # -- generators -------------------------------------------------------
    @property
    def generators(self) -> list:
        raise NotImplementedError

    @property
    def letters(self) -> list:
        """Generators interleaved with their inverses (involutions once)."""
        out = []
        for g in self.generators:
            out.append(g)
            gi = self.inv(g)
            if gi != g:
                out.append(gi)
        return out

    # -- word metric via shortlex breadth-first search --------------------
    def _bfs_init(self):
        if self._bfs_elems:
            return
        e = self.identity
        self._bfs_elems = [e]
        self._bfs_index = {e: 0}
        self._bfs_depth = [0]
        self._bfs_parent = [(-1, -1)]
        self._bfs_level_start = [0, 1]

    def _bfs_grow_level(self) -> bool:
        """Add one more sphere; return False once the group is exhausted."""
        self._bfs_init()
        if self._bfs_closed:
            return False
        letters = self.letters
        lo, hi = self._bfs_level_start[-2], self._bfs_level_start[-1]
        depth = self._bfs_depth[lo] + 1 if lo < hi else 0
        for i in range(lo, hi):
            w = self._bfs_elems[i]
            for li, letter in enumerate(letters):
                v = self.mul(w, letter)
                if v not in self._bfs_index:
                    self._bfs_index[v] = len(self._bfs_elems)
                    self._bfs_elems.append(v)
                    self._bfs_depth.append(depth)
                    self._bfs_parent.append((i, li))
        self._bfs_level_start.append(len(self._bfs_elems))
        if self._bfs_level_start[-1] == self._bfs_level_start[-2]:
            self._bfs_closed = True
            return False
        return True

    def _bfs_ensure_count(self, n: int) -> None:
        self._bfs_init()
        while len(self._bfs_elems) < n and self._bfs_grow_level():
            pass

    def _bfs_ensure_radius(self, radius: int) -> None:
        self._bfs_init()
        while len(self._bfs_level_start) - 2 < radius and self._bfs_grow_level():
            pass

    def word_length(self, a) -> int:
        self.validate(a)
        self._bfs_init()
        while a not in self._bfs_index:
            if not self._bfs_grow_level():
                raise MalformedElementError(f"{a!r} not reachable in {self.name}")
        return self._bfs_depth[self._bfs_index[a]]

    def as_word(self, a) -> list[int]:
        """Shortlex-minimal word for ``a`` as a list of indices into ``letters``."""
        self.word_length(a)
        i = self._bfs_index[a]
        word = []
        while i:
            i, li = self._bfs_parent[i]
            word.append(li)
        return word[::-1]

    def ball(self, radius: int) -> list:
        """All elements of word length at most ``radius``, in shortlex order."""
        self._bfs_ensure_radius(radius)
        stop = (
            self._bfs_level_start[radius + 1]
            if radius + 1 < len(self._bfs_level_start)
            else len(self._bfs_elems)
        )
        return list(self._bfs_elems[:stop])

    # -- enumeration ------------------------------------------------------
    def element_at(self, i: int):
        self._bfs_ensure_count(i + 1)
        if i >= len(self._bfs_elems):
            raise IndexError(f"{self.name} has only {len(self._bfs_elems)} elements")
        return self._bfs_elems[i]

    def index_of(self, a) -> int:
        self.word_length(a)
        return self._bfs_index[a]

    def iter_elements(self) -> Iterator:
        i = 0
        while True:
            try:
                yield self.element_at(i)
            except IndexError:
                return
            i += 1

    def enumerate(self, n: int) -> ElementList:
        return enumerate_elements(self, n)

    # -- serialization ----------------------------------------------------
    def payload_to_json(self, a):
        return a

    def payload_from_json(self, doc):
        self.validate(doc)
        return doc

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name, "flags": self.flags.to_dict()}


def enumerate_elements(group: Group, n: int) -> ElementList:
    """First ``n`` elements of the fixed enumeration, identity first.

    For a finite group and ``n > |G|`` the whole group is returned and the
    result's ``truncated`` attribute is set.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    out = ElementList()
    order = group.order
    take = n if order is None else min(n, order)
    for i in range(take):
        out.append(group.element_at(i))
    out.truncated = take < n
    return out


# ---------------------------------------------------------------------------
# Finite tables


class FiniteGroup(Group):
    """A group given by its multiplication table (row-major, 0 = identity)."""

    kind = "finite"
    identity = 0

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        generators: Sequence[int] | None = None,
        name: str | None = None,
        flags: Flags | None = None,
        validate: bool = True,
    ):
        super().__init__(name, flags)
        t = np.asarray(table, dtype=np.int64)
        if validate:
            _check_table(t)
        self.table = t
        self._rows = [list(map(int, row)) for row in t]
        n = len(self._rows)
        self._inverse = [row.index(0) for row in self._rows]
        if generators is None:
            generators = _greedy_generators(self)
        else:
            generators = [int(g) for g in generators]
            for g in generators:
                self.validate(g)
            if validate and len(_closure(self, generators)) != n:
                raise InvalidGroupError(f"generators {generators} do not generate {self.name}")
        self._generators = list(generators)

    @classmethod
    def cyclic(cls, n: int, flags: Flags | None = None) -> "FiniteGroup":
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, generators=[1] if n > 1 else [], name=f"Z/{n}", flags=flags, validate=False)

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], name: str | None = None) -> "FiniteGroup":
        """Closure of the given permutations as a table, identity first."""
        degree = len(perms[0])
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        gens = [tuple(p) for p in perms]
        i = 0
        while i < len(elems):
            for g in gens:
                # g acts after elems[i]
                c = tuple(g[x] for x in elems[i])
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
            i += 1
        table = [[index[tuple(a[x] for x in b)] for b in elems] for a in elems]
        return cls(table, generators=[index[g] for g in gens if g != ident], name=name, validate=False)

    @classmethod
    def symmetric(cls, k: int) -> "FiniteGroup":
        if k < 2:
            return cls([[0]], generators=[], name=f"S{k}")
        transposition = list(range(k))
        transposition[0], transposition[1] = 1, 0
        cycle = list(range(1, k)) + [0]
        gens = [transposition] if k == 2 else [transposition, cycle]
        return cls.from_permutations(gens, name=f"S{k}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        rotation = [(i + 1) % n for i in range(n)]
        reflection = [(-i) % n for i in range(n)]
        return cls.from_permutations([rotation, reflection], name=f"D{n}")

    @classmethod
    def direct_product(cls, a: "FiniteGroup", b: "FiniteGroup") -> "FiniteGroup":
        na, nb = a.order, b.order
        table = [
            [a._rows[x // nb][y // nb] * nb + b._rows[x % nb][y % nb] for y in range(na * nb)]
            for x in range(na * nb)
        ]
        return cls(table, name=f"{a.name}x{b.name}", validate=False)

    @property
    def order(self) -> int:
        return len(self._rows)

    def mul(self, a, b):
        return self._rows[a][b]

    def inv(self, a):
        return self._inverse[a]

    def validate(self, a) -> None:
        if not isinstance(a, (int, np.integer)) or isinstance(a, bool) or not 0 <= a < self.order:
            raise MalformedElementError(f"{a!r} is not an element of {self.name}")

    @property
    def generators(self) -> list[int]:
        return list(self._generators)

    def element_at(self, i: int):
        if not 0 <= i < self.order:
            raise IndexError(f"{self.name} has order {self.order}")
        return i

    def index_of(self, a) -> int:
        self.validate(a)
        return int(a)

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def describe(self) -> dict:
        out = super().describe()
        out["table"] = self.table.tolist()
        out["generators"] = self.generators
        return out


def _check_table(t: np.ndarray) -> None:
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise InvalidGroupError("multiplication table must be a non-empty square matrix")
    n = t.shape[0]
    if n > MAX_TABLE_ORDER:
        raise InvalidGroupError(f"finite tables are limited to {MAX_TABLE_ORDER} elements")
    if t.min() < 0 or t.max() >= n:
        raise InvalidGroupError("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
        raise InvalidGroupError("element 0 must be the identity")
    srt = np.sort(t, axis=1)
    if not (srt == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
        raise InvalidGroupError("table is not a Latin square (inverses fail)")
    # associativity, chunked over the left factor: (ab)c == a(bc)
    for a in range(n):
        left = t[t[a]]  # row b -> (ab)c over c
        right = t[a][t]  # [b, c] -> a(bc)
        if not np.array_equal(left, right):
            raise InvalidGroupError("table is not associative")


def _closure(group: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _greedy_generators(group: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {0}
    for x in range(group.order):
        if x not in span:
            gens.append(x)
            span = _closure(group, gens)
    return gens


class FiniteSubgroup(Group):
    """A subgroup of a finite table whose elements are the parent's indices."""

    kind = "finite-subgroup"
    identity = 0

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], name: str | None = None):
        super().__init__(name or f"subgroup of {parent.name}")
        self.parent = parent
        self.elements = sorted(set(int(x) for x in elements) | {0})
        self._set = set(self.elements)
        for a in self.elements:
            for b in self.elements:
                if parent.mul(a, b) not in self._set:
                    raise InvalidGroupError("element set is not closed under multiplication")
        self._generators = []
        span = {0}
        for x in self.elements:
            if x not in span:
                self._generators.append(x)
                span = _closure(parent, self._generators)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def validate(self, a) -> None:
        if a not in self._set:
            raise MalformedElementError(f"{a!r} is not in {self.name}")

    @property
    def generators(self) -> list[int]:
        return list(self._generators)

    def element_at(self, i: int):
        return self.elements[i]

    def index_of(self, a) -> int:
        self.validate(a)
        return self.elements.index(a)

    def contains(self, a) -> bool:
        return a in self._set


# ---------------------------------------------------------------------------
# Integers and free groups


class Integers(Group):
    kind = "integers"
    identity = 0

    def __init__(self, name: str = "Z", flags: Flags | None = None):
        super().__init__(name, flags)

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def power(self, a, k):
        return a * k

    def validate(self, a) -> None:
        if not isinstance(a, (int, np.integer)) or isinstance(a, bool):
            raise MalformedElementError(f"{a!r} is not an integer")

    @property
    def generators(self) -> list[int]:
        return [1]

    def word_length(self, a) -> int:
        self.validate(a)
        return abs(a)

    def as_word(self, a) -> list[int]:
        return [0 if a > 0 else 1] * abs(a)

    def ball(self, radius: int) -> list[int]:
        return [self.element_at(i) for i in range(2 * radius + 1)]

    def element_at(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        k = (i + 1) // 2
        return k if i % 2 else -k

    def index_of(self, a) -> int:
        self.validate(a)
        return 2 * a - 1 if a > 0 else -2 * a


class FreeGroup(Group):
    """Free group; elements are tuples of nonzero ints, ``±(i+1)`` for letter i."""

    kind = "free"
    identity: tuple = ()

    def __init__(self, rank: int, name: str | None = None, flags: Flags | None = None):
        if rank < 0:
            raise InvalidGroupError("rank must be non-negative")
        super().__init__(name or f"F{rank}", flags)
        self.rank = rank

    @staticmethod
    def _reduce(word: Iterable[int]) -> tuple:
        out: list[int] = []
        for x in word:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def mul(self, a, b):
        k = 0
        n = min(len(a), len(b))
        while k < n and a[len(a) - 1 - k] == -b[k]:
            k += 1
        return a[: len(a) - k] + b[k:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def validate(self, a) -> None:
        if not isinstance(a, tuple):
            raise MalformedElementError(f"{a!r} is not a free-group word (tuple)")
        for x in a:
            if not isinstance(x, (int, np.integer)) or x == 0 or abs(x) > self.rank:
                raise MalformedElementError(f"bad letter {x!r} for {self.name}")
        for x, y in zip(a, a[1:]):
            if x == -y:
                raise MalformedElementError(f"{a!r} is not freely reduced")

    def key(self, a):
        return (len(a), tuple(self._letter_pos(x) for x in a))

    @property
    def generators(self) -> list[tuple]:
        return [(i + 1,) for i in range(self.rank)]

    # letter order a, a^-1, b, b^-1, ...
    @staticmethod
    def _letter_pos(x: int) -> int:
        return 2 * (abs(x) - 1) + (x < 0)

    @staticmethod
    def _pos_letter(p: int) -> int:
        i, neg = divmod(p, 2)
        return -(i + 1) if neg else i + 1

    def word_length(self, a) -> int:
        self.validate(a)
        return len(a)

    def as_word(self, a) -> list[int]:
        return [self._letter_pos(x) for x in a]

    def _sphere(self, length: int) -> int:
        if length == 0:
            return 1
        m = 2 * self.rank
        return m * (m - 1) ** (length - 1)

    def element_at(self, i: int):
        if i < 0:
            raise IndexError(i)
        if self.rank == 0:
            if i:
                raise IndexError("trivial group")
            return ()
        if self.rank == 1:
            # spheres have two elements: e, a, a^-1, a^2, a^-2, ...
            if i == 0:
                return ()
            length, neg = divmod(i + 1, 2)
            return (-1,) * length if neg else (1,) * length
        length = 0
        while i >= self._sphere(length):
            i -= self._sphere(length)
            length += 1
        m = 2 * self.rank
        word: list[int] = []
        for p in range(length):
            rest = (m - 1) ** (length - p - 1)
            allowed = [q for q in range(m) if not word or self._pos_letter(q) != -word[-1]]
            q_idx, i = divmod(i, rest)
            word.append(self._pos_letter(allowed[q_idx]))
        return tuple(word)

    def index_of(self, a) -> int:
        self.validate(a)
        if self.rank == 1:
            return 0 if not a else 2 * len(a) - (a[0] > 0)
        m = 2 * self.rank
        idx = sum(self._sphere(k) for k in range(len(a)))
        for p, x in enumerate(a):
            rest = (m - 1) ** (len(a) - p - 1)
            pos = self._letter_pos(x)
            smaller = sum(
                1 for q in range(pos) if p == 0 or self._pos_letter(q) != -a[p - 1]
            )
            idx += smaller * rest
        return idx

    def payload_to_json(self, a):
        return list(a)

    def payload_from_json(self, doc):
        a = tuple(doc)
        self.validate(a)
        return a

    def describe(self) -> dict:
        out = super().describe()
        out["rank"] = self.rank
        return out


# ---------------------------------------------------------------------------
# Restricted direct sums and lamplighters


def _config_mul(q: FiniteGroup, f: tuple, g: tuple, shift: int = 0) -> tuple:
    """Pointwise product f * (g shifted by ``shift``) of finitely supported maps."""
    d = dict(f)
    for c, x in g:
        c += shift
        y = q.mul(d.get(c, 0), x)
        if y:
            d[c] = y
        else:
            d.pop(c, None)
    return tuple(sorted(d.items()))


def _config_inv(q: FiniteGroup, f: tuple, shift: int = 0) -> tuple:
    return tuple((c + shift, q.inv(x)) for c, x in f)


def _validate_config(q: FiniteGroup, f, name: str, nonnegative: bool) -> None:
    if not isinstance(f, tuple):
        raise MalformedElementError(f"{f!r} is not a configuration tuple in {name}")
    prev = None
    for item in f:
        if not (isinstance(item, tuple) and len(item) == 2):
            raise MalformedElementError(f"bad configuration entry {item!r} in {name}")
        c, x = item
        if not isinstance(c, (int, np.integer)) or (nonnegative and c < 0):
            raise MalformedElementError(f"bad coordinate {c!r} in {name}")
        if prev is not None and c <= prev:
            raise MalformedElementError(f"configuration in {name} not strictly sorted")
        q.validate(x)
        if x == 0:
            raise MalformedElementError(f"configuration in {name} lists a trivial entry")
        prev = c


class DirectSum(Group):
    """Restricted direct sum of copies of a finite group over ℕ or ℤ.

    Elements are sorted tuples of ``(coordinate, nontrivial element)`` pairs.
    Not finitely generated: ``generators`` is unavailable; use
    ``coordinate_element`` for the standard generating family.
    """

    kind = "direct-sum"
    finitely_generated = False
    identity: tuple = ()

    def __init__(self, factor: FiniteGroup, index: str = "N", name: str | None = None, flags: Flags | None = None):
        if index not in ("N", "Z"):
            raise InvalidGroupError("direct-sum index set must be 'N' or 'Z'")
        super().__init__(name or f"sum_{index} {factor.name}", flags)
        self.factor = factor
        self.index_set = index
        self._coords = Integers() if index == "Z" else None

    def mul(self, a, b):
        return _config_mul(self.factor, a, b)

    def inv(self, a):
        return _config_inv(self.factor, a)

    def validate(self, a) -> None:
        _validate_config(self.factor, a, self.name, nonnegative=self.index_set == "N")

    @property
    def generators(self):
        raise NoEnumerationError(f"{self.name} is not finitely generated")

    def coordinate(self, j: int) -> int:
        """The j-th coordinate in the enumeration of the index set."""
        return j if self._coords is None else self._coords.element_at(j)

    def coordinate_rank(self, c: int) -> int:
        return c if self._coords is None else self._coords.index_of(c)

    def coordinate_element(self, j: int, q: int) -> tuple:
        """The element equal to ``q`` at the j-th coordinate, trivial elsewhere."""
        return ((self.coordinate(j), q),) if q else ()

    def coordinate_generators(self, k: int) -> list[tuple]:
        return [self.coordinate_element(j, q) for j in range(k) for q in self.factor.generators]

    def element_at(self, i: int):
        n = self.factor.order
        if i == 0:
            return ()
        i -= 1
        k = 1
        while True:
            block = (n - 1) * n ** (k - 1)
            if i < block:
                break
            i -= block
            k += 1
        top, rest = divmod(i, n ** (k - 1))
        cfg = {k - 1: top + 1}
        for r in range(k - 1):
            rest, digit = divmod(rest, n)
            if digit:
                cfg[r] = digit
        return tuple(sorted((self.coordinate(r), v) for r, v in cfg.items()))

    def index_of(self, a) -> int:
        self.validate(a)
        if not a:
            return 0
        n = self.factor.order
        ranks = {self.coordinate_rank(c): x for c, x in a}
        k = max(ranks) + 1
        idx = 1 + sum((n - 1) * n ** (j - 1) for j in range(1, k))
        rest = 0
        for r in range(k - 2, -1, -1):
            rest = rest * n + ranks.get(r, 0)
        return idx + (ranks[k - 1] - 1) * n ** (k - 1) + rest

    def payload_to_json(self, a):
        return [list(p) for p in a]

    def payload_from_json(self, doc):
        a = tuple(tuple(p) for p in doc)
        self.validate(a)
        return a

    def describe(self) -> dict:
        out = super().describe()
        out["index"] = self.index_set
        out["factor"] = self.factor.describe()
        return out


class Wreath(Group):
    """Lamplighter ``(⊕_ℤ Q) ⋊ ℤ``; elements are ``(configuration, shift)``.

    Product: ``(f, n)(g, m) = (f · σⁿg, n + m)`` with ``(σⁿg)(i) = g(i - n)``.
    Generators: each Q-generator placed at coordinate 0, then the shift.
    """

    kind = "wreath"
    identity = ((), 0)

    def __init__(self, factor: FiniteGroup, name: str | None = None, flags: Flags | None = None):
        super().__init__(name or f"{factor.name} wr Z", flags)
        self.factor = factor

    def mul(self, a, b):
        (f, n), (g, m) = a, b
        return (_config_mul(self.factor, f, g, shift=n), n + m)

    def inv(self, a):
        f, n = a
        return (_config_inv(self.factor, f, shift=-n), -n)

    def validate(self, a) -> None:
        if not (isinstance(a, tuple) and len(a) == 2):
            raise MalformedElementError(f"{a!r} is not a (configuration, shift) pair")
        _validate_config(self.factor, a[0], self.name, nonnegative=False)
        if not isinstance(a[1], (int, np.integer)):
            raise MalformedElementError(f"bad shift {a[1]!r}")

    def key(self, a):
        return (a[1], a[0])

    @property
    def generators(self) -> list:
        lamps = [(((0, q),), 0) for q in self.factor.generators]
        return lamps + [((), 1)]

    def payload_to_json(self, a):
        return {"config": [list(p) for p in a[0]], "shift": a[1]}

    def payload_from_json(self, doc):
        a = (tuple(tuple(p) for p in doc["config"]), doc["shift"])
        self.validate(a)
        return a

    def describe(self) -> dict:
        out = super().describe()
        out["factor"] = self.factor.describe()
        return out


class DirectProduct(Group):
    """Direct product of two groups; elements are pairs."""

    kind = "direct-product"

    def __init__(self, left: Group, right: Group, name: str | None = None):
        super().__init__(name or f"{left.name} x {right.name}")
        self.left, self.right = left, right
        self.identity = (left.identity, right.identity)

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def validate(self, a) -> None:
        if not (isinstance(a, tuple) and len(a) == 2):
            raise MalformedElementError(f"{a!r} is not a pair")
        self.left.validate(a[0])
        self.right.validate(a[1])

    def key(self, a):
        return (self.left.key(a[0]), self.right.key(a[1]))

    @property
    def order(self):
        lo, ro = self.left.order, self.right.order
        return lo * ro if lo is not None and ro is not None else None

    @property
    def generators(self) -> list:
        return [(g, self.right.identity) for g in self.left.generators] + [
            (self.left.identity, h) for h in self.right.generators
        ]


# ---------------------------------------------------------------------------
# Free products


class FactorElement(NamedTuple):
    factor: int
    payload: Any


class ReducedWord(tuple):
    """Normal form of a free-product element: alternating nontrivial syllables.

    Build these through :meth:`FreeProduct.reduce`; the empty word is the
    identity. Syllables are listed left to right, so the rightmost syllable
    acts first.
    """

    __slots__ = ()

    @property
    def syllables(self) -> tuple:
        return tuple(self)

    def __repr__(self):
        inner = " ".join(f"{s.factor}:{s.payload!r}" for s in self)
        return f"ReducedWord({inner})"


IDENTITY_WORD = ReducedWord()


class FreeProduct(Group):
    kind = "free-product"
    identity = IDENTITY_WORD

    def __init__(self, factors: Sequence[Group], name: str | None = None, flags: Flags | None = None):
        if len(factors) < 1:
            raise InvalidGroupError("a free product needs at least one factor")
        super().__init__(name or "*".join(f.name for f in factors), flags)
        self.factors = list(factors)
        self._syllables: dict = {}

    def _syllable(self, s) -> FactorElement:
        if not (isinstance(s, tuple) and len(s) == 2):
            raise MalformedElementError(f"{s!r} is not a (factor, payload) syllable")
        f, p = s
        if not isinstance(f, (int, np.integer)) or not 0 <= f < len(self.factors):
            raise MalformedElementError(f"factor index {f!r} out of range for {self.name}")
        self.factors[f].validate(p)
        return FactorElement(int(f), p)

    def reduce(self, raw: Iterable) -> ReducedWord:
        """Normal form of a raw syllable list.

        Merges adjacent same-factor syllables and deletes identities, one
        sweep at a time, until a sweep changes nothing.
        """
        syl = [self._syllable(s) for s in raw]
        changed = True
        while changed:
            changed = False
            out: list[FactorElement] = []
            i = 0
            while i < len(syl):
                cur = syl[i]
                fac = self.factors[cur.factor]
                if fac.is_identity(cur.payload):
                    changed = True
                    i += 1
                    continue
                if i + 1 < len(syl) and syl[i + 1].factor == cur.factor:
                    out.append(FactorElement(cur.factor, fac.mul(cur.payload, syl[i + 1].payload)))
                    changed = True
                    i += 2
                    continue
                out.append(cur)
                i += 1
            syl = out
        return ReducedWord(syl)

    def mul(self, u, v):
        if not u:
            return v
        if not v:
            return u
        left = list(u)
        j = 0
        while left and j < len(v) and left[-1].factor == v[j].factor:
            f = v[j].factor
            p = self.factors[f].mul(left[-1].payload, v[j].payload)
            left.pop()
            j += 1
            if not self.factors[f].is_identity(p):
                left.append(FactorElement(f, p))
                break
        return ReducedWord(left + list(v[j:]))

    def inv(self, w):
        return ReducedWord(FactorElement(s.factor, self.factors[s.factor].inv(s.payload)) for s in reversed(w))

    def validate(self, w) -> None:
        if not isinstance(w, tuple):
            raise MalformedElementError(f"{w!r} is not a reduced word")
        prev = None
        for s in w:
            s = self._syllable(s)
            if self.factors[s.factor].is_identity(s.payload):
                raise MalformedElementError("reduced words contain no trivial syllables")
            if prev == s.factor:
                raise MalformedElementError("adjacent syllables from the same factor")
            prev = s.factor

    def check_same(self, other: "FreeProduct") -> None:
        if other is not self and other.factors != self.factors:
            raise FactorMismatchError(f"{other.name} and {self.name} differ")

    def key(self, w):
        return (len(w), tuple((s.factor, self.factors[s.factor].key(s.payload)) for s in w))

    def syllable(self, factor: int, payload) -> ReducedWord:
        key = (factor, payload)
        try:
            return self._syllables[key]
        except KeyError:
            pass
        except TypeError:  # unhashable payload; reduce will reject it
            return self.reduce([key])
        w = self.reduce([key])
        if len(self._syllables) < 100_000:
            self._syllables[key] = w
        return w

    @property
    def order(self):
        nontrivial = [f for f in self.factors if f.order != 1]
        if not nontrivial:
            return 1
        if len(nontrivial) == 1:
            return nontrivial[0].order
        return None

    @property
    def generators(self) -> list[ReducedWord]:
        return [self.syllable(i, g) for i, f in enumerate(self.factors) for g in f.generators]

    @property
    def letters(self) -> list[ReducedWord]:
        return [self.syllable(i, g) for i, f in enumerate(self.factors) for g in f.letters]

    def _letter_offsets(self) -> list[int]:
        offs, acc = [], 0
        for f in self.factors:
            offs.append(acc)
            acc += len(f.letters)
        return offs

    def word_length(self, w) -> int:
        self.validate(w)
        return sum(self.factors[s.factor].word_length(s.payload) for s in w)

    def as_word(self, w) -> list[int]:
        offs = self._letter_offsets()
        out = []
        for s in w:
            out.extend(offs[s.factor] + li for li in self.factors[s.factor].as_word(s.payload))
        return out

    def index_of(self, w) -> int:
        self.validate(w)
        self._bfs_init()
        while w not in self._bfs_index:
            if not self._bfs_grow_level():
                raise MalformedElementError(f"{w!r} not reachable")
        return self._bfs_index[w]

    def word(self, *syllables) -> ReducedWord:
        """Convenience: ``fp.word((0, 1), (1, 2))``."""
        return self.reduce(syllables)

    def payload_to_json(self, w):
        return [[s.factor, self.factors[s.factor].payload_to_json(s.payload)] for s in w]

    def payload_from_json(self, doc):
        raw = []
        for item in doc:
            f, p = item
            if not isinstance(f, int) or not 0 <= f < len(self.factors):
                raise MalformedElementError(f"factor index {f!r} out of range")
            raw.append((f, self.factors[f].payload_from_json(p)))
        w = self.reduce(raw)
        return w

    def describe(self) -> dict:
        out = super().describe()
        out["factors"] = [f.describe() for f in self.factors]
        return out


def reduce(fp: FreeProduct, raw: Iterable) -> ReducedWord:
    return fp.reduce(raw)


def multiply(fp: FreeProduct, u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return fp.mul(u, v)


def invert(fp: FreeProduct, w: ReducedWord) -> ReducedWord:
    return fp.inv(w)


def cyclic_coset_membership(fp: FreeProduct, w: ReducedWord, g0h0: ReducedWord) -> bool:
    """Decide ``w ∈ ⟨g0h0⟩`` for ``g0h0`` a product of two nontrivial syllables.

    ``(g0h0)^k`` has exactly ``2|k|`` syllables, so only ``k = ±len(w)/2``
    needs checking.
    """
    check_cyclic_generator(fp, g0h0)
    if not w:
        return True
    if len(w) % 2:
        return False
    k = len(w) // 2
    return fp.power(g0h0, k) == w or fp.power(g0h0, -k) == w


def check_cyclic_generator(fp: FreeProduct, c: ReducedWord) -> None:
    if not isinstance(c, ReducedWord) or len(c) != 2 or c[0].factor == c[1].factor:
        raise MalformedElementError(f"{c!r} is not of the form g0·h0 with nontrivial g0, h0")
    fp.validate(c)


def element_word_product(group: Group, word: Sequence[int]):
    """Multiply letters (indices into ``group.letters``) left to right."""
    letters = group.letters
    out = group.identity
    for li in word:
        out = group.mul(out, letters[li])
    return out
