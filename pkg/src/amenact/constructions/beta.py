"""Faithful transitive amenable actions of ``G * H`` through an injection β.

``X = H ⊔ Y`` where ``Y`` comes from :func:`build_Y`. ``H`` acts on both
parts naturally; ``G`` acts on ``β(G)`` by transported left multiplication
``g·β(x) = β(gx)`` and trivially elsewhere.

``G`` is split by its fixed enumeration: the positions ``m²`` (``m ≥ 1``)
form ``R`` and the rest form ``D``. The ``m``-th element of ``R`` goes to
the anchor of the ``m``-th orbit of ``Y``; ``D`` is sent into the ``H``
part. ``R`` is sparse, so for each ``g`` almost every ``d ∈ D`` has
``gd ∈ D`` as well, which word processing needs. On ``D`` the
ledger pins finitely many values while processing words, each pin chosen to
force a recorded witness ``w·x₀ ≠ x₀``. Every other element of ``D`` is sent
to an ``H`` point by the order-preserving pairing of the unpinned elements
of ``D`` with the unused points of ``H``. Pinning an element to its current
paired value leaves the whole map unchanged, so the map is a bijection
``D → H`` at every stage.

Points of ``X``: ``(0, h)`` in the ``H`` part and ``(1, n, y)`` for the
point ``y`` of the ``n``-th orbit of ``Y``.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .._validation import check_count
from ..actions import Action, FreeProductHom, pullback
from ..certify import certify_faithful, certify_transitive
from ..errors import ClassificationConflict, ConstructionError, UnsupportedGroupError
from ..folner import FolnerSequence, verify_sequence
from ..groups import FreeProduct, Group, ReducedWord
from .common import ConstructionReport
from .providers import OrbitFamilyAction, build_Y


def _nth_free(used: list[int], r: int) -> int:
    """The ``r``-th non-negative integer (from 0) missing from sorted ``used``."""
    m = r
    while True:
        nxt = r + bisect_right(used, m)
        if nxt == m:
            return m
        m = nxt


def r_position(m: int) -> int:
    """Enumeration position of the ``m``-th element of ``R`` (``m ≥ 1``)."""
    return m * m


def d_position(k: int) -> int:
    """Enumeration position of the ``k``-th element of ``D`` (``k ≥ 0``)."""
    # p - isqrt(p) counts the D positions below p + 1 and rises by at most 1
    p = k + isqrt(k)
    while p - isqrt(p) < k or (p > 0 and isqrt(p) ** 2 == p):
        p += 1
    return p


def split_rank(p: int) -> tuple[str, int]:
    """``("R", m)`` or ``("D", k)`` for the enumeration position ``p``."""
    r = isqrt(p)
    if r > 0 and r * r == p:
        return "R", r
    return "D", p - r


@dataclass
class Witness:
    word: ReducedWord
    #: H-part indices visited, starting point first
    trajectory: list[int]
    #: pins with serial below this existed when the witness was recorded
    serial: int

    def start(self, ledger: "BetaLedger"):
        return (0, ledger.H.element_at(self.trajectory[0]))


@dataclass
class BetaState:
    """Frozen copy of the pinned part of β."""

    d_to_h: dict[int, int]
    h_to_d: dict[int, int]
    pinned_d: list[int]
    used_h: list[int]
    serial: dict[int, int] = field(default_factory=dict)

    def beta_d(self, k: int) -> int:
        m = self.d_to_h.get(k)
        if m is None:
            m = _nth_free(self.used_h, k - bisect_left(self.pinned_d, k))
        return m

    def beta_d_inv(self, m: int) -> int:
        k = self.h_to_d.get(m)
        if k is None:
            k = _nth_free(self.pinned_d, m - bisect_left(self.used_h, m))
        return k


class BetaLedger:
    """The partial injection ``β|_D`` with pins that only ever grow."""

    def __init__(self, G: Group, H: Group, y: OrbitFamilyAction):
        if G.order is not None:
            raise UnsupportedGroupError(f"{G.name} is finite; the split into D and R needs an infinite group")
        if H.order is not None:
            raise UnsupportedGroupError(f"{H.name} is finite; witnesses need infinitely many H points")
        self.G, self.H, self.y = G, H, y
        self.fp = FreeProduct([G, H])
        self.state = BetaState({}, {}, [], [])
        self.witnesses: list[Witness] = []
        self.processed: set = set()
        self._low_d = 0
        self._low_h = 0
        self._next_word = 1  # enumeration index of the next word to consider

    # -- bookkeeping ------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.state.d_to_h)

    def _pin(self, k: int, m: int) -> None:
        st = self.state
        if k in st.d_to_h or m in st.h_to_d:
            raise ConstructionError(f"pin ({k}, {m}) collides with the ledger")
        st.serial[k] = len(st.d_to_h)
        st.d_to_h[k] = m
        st.h_to_d[m] = k
        insort(st.pinned_d, k)
        insort(st.used_h, m)
        while self._low_d in st.d_to_h:
            self._low_d += 1
        while self._low_h in st.h_to_d:
            self._low_h += 1

    def pin_next(self) -> tuple[int, int]:
        """Pin the first unpinned element of ``D`` to its current paired value."""
        k = self._low_d
        m = self.state.beta_d(k)
        self._pin(k, m)
        return k, m

    def snapshot(self) -> BetaState:
        st = self.state
        return BetaState(dict(st.d_to_h), dict(st.h_to_d), list(st.pinned_d), list(st.used_h), dict(st.serial))

    def check_invariants(self) -> None:
        st = self.state
        if len(st.h_to_d) != len(st.d_to_h):
            raise ConstructionError("β is not injective on pinned elements")
        for k, m in st.d_to_h.items():
            if st.h_to_d.get(m) != k:
                raise ConstructionError("pin tables disagree")
        if st.pinned_d != sorted(st.d_to_h) or st.used_h != sorted(st.h_to_d):
            raise ConstructionError("sorted pin lists are stale")

    # -- word processing --------------------------------------------------
    def process(self, w: ReducedWord) -> Witness:
        """Pin fresh values so that ``w`` provably moves a recorded point.

        Reading ``w`` right to left, the trajectory visits distinct fresh
        ``H`` points. A ``G``-syllable ``g`` entered at ``p`` pins
        ``β(d) = p`` and ``β(gd) = p'`` for fresh ``d, gd ∈ D``; an
        ``H``-syllable moves the point by left multiplication. A point
        that an ``H``-syllable will move is chosen together with its image.
        """
        if not w:
            raise ValueError("only nontrivial words are processed")
        self.fp.validate(w)
        G, H = self.G, self.H
        st = self.state
        steps = list(reversed(w))
        chosen_d: set[int] = set()
        chosen_h: set[int] = set()

        def fresh_h(m):
            return m not in st.h_to_d and m not in chosen_h

        def fresh_d(k):
            return k not in st.d_to_h and k not in chosen_d

        def pick_point(next_step):
            m = self._low_h
            while True:
                if fresh_h(m):
                    if next_step is None or next_step.factor == 0:
                        chosen_h.add(m)
                        return m
                    img = H.index_of(H.mul(next_step.payload, H.element_at(m)))
                    if img != m and fresh_h(img):
                        chosen_h.update((m, img))
                        return m
                m += 1

        def pick_pair(g):
            k = self._low_d
            while True:
                if fresh_d(k):
                    part, j = split_rank(G.index_of(G.mul(g, G.element_at(d_position(k)))))
                    if part == "D" and j != k and fresh_d(j):
                        chosen_d.update((k, j))
                        return k, j
                k += 1
                if k > self._low_d + 100_000 + 10 * len(st.d_to_h):
                    raise ConstructionError(f"no fresh pair d, gd in D for g = {g!r}")

        traj = [pick_point(steps[0])]
        pins = []
        for i, s in enumerate(steps):
            nxt = steps[i + 1] if i + 1 < len(steps) else None
            if s.factor == 1:
                traj.append(H.index_of(H.mul(s.payload, H.element_at(traj[-1]))))
            else:
                d, gd = pick_pair(s.payload)
                out = pick_point(nxt)
                pins += [(d, traj[-1]), (gd, out)]
                traj.append(out)
        if len(set(traj)) != len(traj):
            raise ConstructionError(f"trajectory for {w!r} is not injective")
        for k, m in pins:
            self._pin(k, m)
        wit = Witness(w, traj, len(st.d_to_h))
        self.witnesses.append(wit)
        self.processed.add(w)
        return wit

    def process_words(self, max_len: int) -> int:
        """Process every unprocessed nontrivial word of length ≤ ``max_len`` in shortlex order."""
        check_count(max_len, "max_len", minimum=0)
        count = 0
        for w in self.fp.ball(max_len):
            if w and w not in self.processed:
                self.process(w)
                count += 1
        self._next_word = max(self._next_word, len(self.fp.ball(max_len)))
        return count

    def extend(self, assignments: int) -> int:
        """Process further words, in enumeration order, until at least
        ``assignments`` new pins were made. Returns the number of new pins."""
        start = self.size
        while self.size - start < assignments:
            w = self.fp.element_at(self._next_word)
            self._next_word += 1
            if w and w not in self.processed:
                self.process(w)
        return self.size - start


class BetaAction(Action):
    """``G * H`` on ``X = H ⊔ Y`` for a frozen β."""

    name = "beta"

    def __init__(self, ledger: BetaLedger, state: BetaState | None = None):
        super().__init__(ledger.fp)
        self.G, self.H, self.y = ledger.G, ledger.H, ledger.y
        self.state = state if state is not None else ledger.snapshot()
        self.root = self.beta(self.G.identity)

    # -- β and its inverse --------------------------------------------------
    def beta(self, g):
        part, j = split_rank(self.G.index_of(g))
        if part == "R":
            return (1, j, self.y.provider.anchor(j))
        return (0, self.H.element_at(self.state.beta_d(j)))

    def beta_inv(self, x):
        """The element of ``G`` sent to ``x``, or ``None`` off ``β(G)``."""
        if x[0] == 0:
            return self.G.element_at(d_position(self.state.beta_d_inv(self.H.index_of(x[1]))))
        _, n, y = x
        if y == self.y.provider.anchor(n):
            return self.G.element_at(r_position(n))
        return None

    def act_syllable(self, factor, payload, x):
        if factor == 0:
            pre = self.beta_inv(x)
            return x if pre is None else self.beta(self.G.mul(payload, pre))
        if x[0] == 0:
            return (0, self.H.mul(payload, x[1]))
        _, n, y = x
        return (1, n, self.y.provider.orbit(n).act(payload, y))

    def points(self):
        ys = self.y.points()
        for h in self.H.iter_elements():
            yield (0, h)
            n, y = next(ys)
            yield (1, n, y)

    def route(self, x):
        fp, H = self.group, self.H
        p = self.root[1]
        if x[0] == 0:
            u = H.mul(x[1], H.inv(p))
            return fp.syllable(1, u) if not H.is_identity(u) else fp.identity
        _, n, y = x
        u = self.y.provider.orbit(n).route(y)
        if u is None:
            return None
        r = self.G.element_at(r_position(n))
        return fp.mul(fp.syllable(1, u) if not H.is_identity(u) else fp.identity, fp.syllable(0, r))

    def orbit_sets(self, depth: int) -> dict[int, list]:
        return {n: [(1, n, y) for y in self.y.provider.orbit(n).points()] for n in range(1, depth + 1)}

    def verify_witness(self, wit: Witness) -> bool:
        """Re-evaluate a witness syllable by syllable.

        The trajectory must be reproduced exactly, the end must differ from
        the start, and every ``G``-step must only read pins made no later
        than the witness itself.
        """
        H = self.H
        x = (0, H.element_at(wit.trajectory[0]))
        visited = [wit.trajectory[0]]
        for s in reversed(wit.word):
            if s.factor == 0:
                m = H.index_of(x[1])
                k = self.state.h_to_d.get(m)
                if k is None or self.state.serial[k] >= wit.serial:
                    return False
            x = self.act_syllable(s.factor, s.payload, x)
            if x[0] != 0:
                return False
            visited.append(H.index_of(x[1]))
        return visited == wit.trajectory and visited[-1] != visited[0]


def _swap_hom(src: FreeProduct, dst: FreeProduct) -> FreeProductHom:
    """``A * B → B * A`` exchanging the factors."""
    return FreeProductHom(
        src,
        dst,
        [[dst.syllable(1, g) for g in src.factors[0].generators], [dst.syllable(0, h) for h in src.factors[1].generators]],
    )


def _swap_word(dst: FreeProduct, w: ReducedWord) -> ReducedWord:
    return dst.reduce([(1 - s.factor, s.payload) for s in w])


def build_free_product_action(
    G: Group,
    H: Group,
    depth: int = 50,
    word_budget: int = 6,
    seed: int = 0,
    point_budget: int = 500,
    search_budget: int = 2000,
) -> tuple[Action, ConstructionReport]:
    """Faithful, transitive, amenable action of ``G * H``.

    ``Y`` is built for ``H`` when possible, otherwise for ``G`` with the
    roles exchanged (the action is then pulled back along the factor swap).
    Every nontrivial word of length ≤ ``word_budget`` gets a witness.
    """
    check_count(depth, "depth")
    check_count(word_budget, "word_budget", minimum=0)
    swapped = False
    try:
        y, _ = build_Y(H, 1)
    except (ClassificationConflict, UnsupportedGroupError) as first:
        try:
            y, _ = build_Y(G, 1)
        except (ClassificationConflict, UnsupportedGroupError):
            raise first
        G, H = H, G
        swapped = True
    ledger = BetaLedger(G, H, y)
    ledger.process_words(word_budget)
    ledger.check_invariants()
    inner = BetaAction(ledger)
    fp = inner.group
    sets = inner.orbit_sets(depth)
    seq = FolnerSequence(
        sets,
        {n: inner.beta(G.element_at(r_position(n))) for n in sets},
        bound=lambda n, size: Fraction(1, n) + Fraction(4, size),
        bound_label="1/n + 4/|A_n|",
    )
    hints = {wit.word: wit.start(ledger) for wit in ledger.witnesses}
    if swapped:
        outer_fp = FreeProduct([H, G])
        q = _swap_hom(outer_fp, fp)
        action: Action = pullback(q, inner, source=outer_fp, lift=lambda u: _swap_word(outer_fp, u))
        hints = {_swap_word(outer_fp, w): x for w, x in hints.items()}
    else:
        outer_fp = fp
        action = inner
    letters = outer_fp.letters
    report = ConstructionReport(
        "free_product",
        [g.describe() for g in outer_fp.factors],
        action,
        budgets={"word_budget": word_budget, "point_budget": point_budget, "folner_depth": depth},
        seed=seed,
        sequence=seq,
    )
    report.certificates["faithfulness"] = certify_faithful(action, word_budget, search_budget, hints=hints)
    report.certificates["transitivity"] = certify_transitive(action, n=point_budget)
    report.folner = verify_sequence(action, seq, letters, [_label(outer_fp, s) for s in letters])
    report.details.update(
        {
            "ledger_pins": ledger.size,
            "words_processed": len(ledger.witnesses),
            "orbit_provider": y.provider.label,
            "swapped": swapped,
        }
    )
    report.details["ledger"] = ledger
    return action, report


def _label(fp: FreeProduct, w: ReducedWord) -> str:
    return " ".join(f"{fp.factors[s.factor].name}:{s.payload}" for s in w)
