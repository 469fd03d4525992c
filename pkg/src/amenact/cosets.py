"""Coset tables for the kernel of a free product of finite groups onto the
direct product of its factors, and a free basis of that kernel.

Cosets of the kernel ``K`` of ``A_1 * ... * A_m -> A_1 x ... x A_m`` are
labelled by tuples in the direct product. The table records the *left*
translation action ``a · xK = (ax)K`` for every nontrivial syllable ``a``.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field

from .errors import ConstructionError, UnsupportedGroupError
from .groups import FactorElement, FiniteGroup, FreeProduct, ReducedWord


@dataclass
class CosetTable:
    """A finite coset table with a breadth-first transversal.

    ``rows[(factor, payload)][c]`` is the coset reached from coset ``c`` by
    left multiplication with that syllable. ``transversal[c]`` maps coset 0
    (the subgroup itself) to coset ``c``.
    """

    group: FreeProduct
    subgroup_id: str
    cosets: list[tuple]
    rows: dict[tuple[int, int], list[int]]
    transversal: list[ReducedWord]
    parent: list[tuple[int, tuple[int, int]] | None]
    _label_index: dict[tuple, int] = field(default_factory=dict, repr=False)

    @property
    def index(self) -> int:
        return len(self.cosets)

    def coset_of(self, w: ReducedWord) -> int:
        """Coset of ``w`` (its image in the direct product)."""
        label = [0] * len(self.group.factors)
        for s in w:
            fac = self.group.factors[s.factor]
            label[s.factor] = fac.mul(label[s.factor], s.payload)
        return self._label_index[tuple(label)]

    def act(self, syllable: tuple[int, int], c: int) -> int:
        return self.rows[syllable][c]

    def representative(self, c: int) -> ReducedWord:
        return self.transversal[c]

    def contains(self, w: ReducedWord) -> bool:
        return self.coset_of(w) == 0

    def is_permutation_table(self) -> bool:
        return all(sorted(row) == list(range(self.index)) for row in self.rows.values())


def _finite_factors(fp: FreeProduct) -> list[FiniteGroup]:
    for f in fp.factors:
        if not isinstance(f, FiniteGroup):
            raise UnsupportedGroupError(
                f"kernel coset tables need finite-table factors; {f.name} is {f.kind}"
            )
    return fp.factors  # type: ignore[return-value]


def kernel_coset_table(fp: FreeProduct) -> CosetTable:
    """Coset table of the kernel of ``fp`` onto the product of its factors.

    The transversal is built breadth-first from the trivial coset, trying
    factors in order and, within a factor, nontrivial elements in table
    order; each new representative is ``a · t_c``.
    """
    factors = _finite_factors(fp)
    if sum(1 for f in factors if f.order > 1) < 2:
        warnings.warn(
            f"{fp.name} has fewer than two nontrivial factors; the kernel is trivial",
            stacklevel=2,
        )
    labels: list[tuple] = [()]
    for f in factors:
        labels = [lab + (x,) for lab in labels for x in range(f.order)]
    index = {lab: i for i, lab in enumerate(labels)}
    rows: dict[tuple[int, int], list[int]] = {}
    for i, f in enumerate(factors):
        for a in range(1, f.order):
            row = []
            for lab in labels:
                new = list(lab)
                new[i] = f.mul(a, lab[i])
                row.append(index[tuple(new)])
            rows[(i, a)] = row

    # breadth-first transversal; relabel cosets in discovery order
    n = len(labels)
    order = [index[tuple([0] * len(factors))]]
    reps: dict[int, ReducedWord] = {order[0]: fp.identity}
    parent: dict[int, tuple[int, tuple[int, int]] | None] = {order[0]: None}
    queue = deque(order)
    while queue:
        c = queue.popleft()
        for i, f in enumerate(factors):
            for a in range(1, f.order):
                d = rows[(i, a)][c]
                if d not in reps:
                    reps[d] = fp.mul(fp.syllable(i, a), reps[c])
                    parent[d] = (c, (i, a))
                    order.append(d)
                    queue.append(d)
    if len(order) != n:
        raise ConstructionError("coset graph is disconnected")
    relabel = {old: new for new, old in enumerate(order)}
    new_rows = {k: [0] * n for k in rows}
    for k, row in rows.items():
        for old, tgt in enumerate(row):
            new_rows[k][relabel[old]] = relabel[tgt]
    cosets = [labels[old] for old in order]
    par = []
    for old in order:
        p = parent[old]
        par.append(None if p is None else (relabel[p[0]], p[1]))
    return CosetTable(
        group=fp,
        subgroup_id="kernel(" + fp.name + " -> " + "x".join(f.name for f in factors) + ")",
        cosets=cosets,
        rows=new_rows,
        transversal=[reps[old] for old in order],
        parent=par,
        _label_index={lab: i for i, lab in enumerate(cosets)},
    )


@dataclass
class SchreierBasis:
    """Free basis of the kernel together with a rewriting procedure.

    Generators are Schreier generators ``t_{a·c}^{-1} a t_c`` taken at one
    coset per (factor, orbit) pair: the coset from which the breadth-first
    search first entered that orbit. Only these are needed; the others are
    products of them, and the ones kept form a free basis (non-tree edges of
    the quotient of the Bass-Serre tree).
    """

    table: CosetTable
    generators: list[ReducedWord]
    # (factor, orbit id) -> discovering coset
    _anchor: dict[tuple[int, int], int]
    _orbit: dict[tuple[int, int], int]
    # (factor, coset) -> generator index or None (tree edge)
    _edge_gen: dict[tuple[int, int], int | None]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def rewrite(self, k: ReducedWord) -> list[tuple[int, int]]:
        """Express a kernel element as a free word ``[(gen index, ±1), ...]``.

        The word is read left to right as a product of generators.
        """
        t = self.table
        c = 0
        letters: list[tuple[int, int]] = []  # built right to left
        for s in reversed(k):
            d = t.rows[(s.factor, s.payload)][c]
            # crossing edge (c, factor) towards the orbit vertex, then out to d
            g_in = self._edge_gen[(s.factor, c)]
            if g_in is not None:
                letters.append((g_in, -1))
            g_out = self._edge_gen[(s.factor, d)]
            if g_out is not None:
                letters.append((g_out, 1))
            c = d
        if c != 0:
            raise ConstructionError(f"{k!r} is not in {t.subgroup_id}")
        # letters were collected in application order (rightmost first)
        word = letters[::-1]
        return _free_reduce(word)

    def evaluate(self, word: list[tuple[int, int]]) -> ReducedWord:
        fp = self.table.group
        out = fp.identity
        for i, e in word:
            g = self.generators[i]
            out = fp.mul(out, g if e > 0 else fp.inv(g))
        return out


def _free_reduce(word: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def schreier_basis(t: CosetTable) -> SchreierBasis:
    if t.index == 0:
        raise ConstructionError("empty coset table")
    fp = t.group
    factors = fp.factors
    # orbit of coset c under factor i
    orbit_of: dict[tuple[int, int], int] = {}
    for i, f in enumerate(factors):
        next_id = 0
        for c in range(t.index):
            if (i, c) in orbit_of:
                continue
            orbit_of[(i, c)] = next_id
            for a in range(1, f.order):
                orbit_of[(i, t.rows[(i, a)][c])] = next_id
            next_id += 1

    # replay the breadth-first search to find the coset discovering each orbit
    anchor: dict[tuple[int, int], int] = {}
    tree_edges: set[tuple[int, int]] = set()
    for c in range(t.index):
        for i in range(len(factors)):
            key = (i, orbit_of[(i, c)])
            if key not in anchor:
                anchor[key] = c
                tree_edges.add((i, c))
    for d, p in enumerate(t.parent):
        if p is not None:
            tree_edges.add((p[1][0], d))

    generators: list[ReducedWord] = []
    edge_gen: dict[tuple[int, int], int | None] = {}
    for i, f in enumerate(factors):
        for c in range(t.index):
            if (i, c) in tree_edges:
                edge_gen[(i, c)] = None
                continue
            # loop: tree path to the anchor, across the orbit to c, tree path back
            a_c = anchor[(i, orbit_of[(i, c)])]
            a = _syllable_between(t, i, a_c, c)
            s = fp.mul(fp.inv(t.transversal[c]), fp.mul(fp.syllable(i, a), t.transversal[a_c]))
            if not s:
                raise ConstructionError("nontrivial edge produced a trivial generator")
            edge_gen[(i, c)] = len(generators)
            generators.append(s)
    return SchreierBasis(t, generators, anchor, orbit_of, edge_gen)


def _syllable_between(t: CosetTable, factor: int, src: int, dst: int) -> int:
    for a in range(1, t.group.factors[factor].order):
        if t.rows[(factor, a)][src] == dst:
            return a
    raise ConstructionError("cosets are not in the same factor orbit")


def schreier_generators(t: CosetTable) -> list[ReducedWord]:
    """Schreier generators of the kernel w.r.t. the breadth-first transversal.

    Trivial generators are discarded; the ones returned are a free basis,
    of rank ``(|A|-1)(|B|-1)`` for two factors.
    """
    return schreier_basis(t).generators


def free_product_of_syllables(fp: FreeProduct, pairs) -> ReducedWord:
    return fp.reduce([FactorElement(f, p) for f, p in pairs])
