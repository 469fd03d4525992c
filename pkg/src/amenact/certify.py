"""Budgeted certification of transitivity and faithfulness.

Both properties quantify over infinitely many points or words, so a
certificate only speaks for its budget. Faithfulness distinguishes a word
that provably acts trivially on a fully scanned finite space ("refuted")
from a word for which no moved point was found within the budget
("indeterminate").
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ._validation import check_count
from .actions import Action, orbit

PASS, REFUTED, INDETERMINATE = "pass", "refuted", "indeterminate"


@dataclass
class Certificate:
    kind: str
    status: str
    budget: dict
    witnesses: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def verify(self, a: Action) -> bool:
        """Re-evaluate every recorded witness against ``a``."""
        if self.kind == "faithfulness":
            return all(a.act(w, x) == y and y != x for w, x, y in self.witnesses)
        if self.kind == "transitivity":
            root = self.detail["root"]
            return all(a.act(w, root) == x for x, w in self.witnesses)
        raise ValueError(f"unknown certificate kind {self.kind!r}")

    def to_dict(self, a: Action) -> dict:
        g = a.group
        out: dict[str, Any] = {"kind": self.kind, "status": self.status, "budget": dict(self.budget)}
        if self.kind == "faithfulness":
            out["witnesses"] = [
                {"word": g.payload_to_json(w), "point": a.point_to_json(x), "image": a.point_to_json(y)}
                for w, x, y in self.witnesses
            ]
            out["failures"] = [
                {"word": g.payload_to_json(w), "status": st} for w, st in self.detail.get("failures", [])
            ]
            out["words_checked"] = self.detail.get("words_checked", 0)
        else:
            out["root"] = a.point_to_json(self.detail["root"])
            out["reached"] = self.detail.get("reached", 0)
            out["routed"] = self.detail.get("routed", 0)
            out["explored"] = self.detail.get("explored", 0)
            if "unreached" in self.detail:
                out["unreached"] = a.point_to_json(self.detail["unreached"])
            out["witnesses"] = [
                {"point": a.point_to_json(x), "word": g.payload_to_json(w)} for x, w in self.witnesses
            ]
        return out

    @classmethod
    def from_dict(cls, doc: dict, a: Action) -> "Certificate":
        g = a.group
        if doc["kind"] == "faithfulness":
            wit = [
                (g.payload_from_json(d["word"]), a.point_from_json(d["point"]), a.point_from_json(d["image"]))
                for d in doc["witnesses"]
            ]
            detail = {"failures": [(g.payload_from_json(d["word"]), d["status"]) for d in doc.get("failures", [])]}
        else:
            wit = [(a.point_from_json(d["point"]), g.payload_from_json(d["word"])) for d in doc["witnesses"]]
            detail = {"root": a.point_from_json(doc["root"]), "reached": doc.get("reached", 0)}
        return cls(doc["kind"], doc["status"], dict(doc["budget"]), wit, detail)


def certify_transitive(a: Action, root=None, n: int = 500, search_limit: int | None = None) -> Certificate:
    """Check that the first ``n`` enumerated points lie in the orbit of ``root``.

    Points for which the action offers a route (``a.route``) are settled by
    re-evaluating that element. The rest are looked for by breadth-first
    search from ``root``, which stops once every target is reached or
    ``search_limit`` points have been visited.
    """
    check_count(n, "n")
    if root is None:
        root = a.root
    targets = a.first_points(n)
    if search_limit is None:
        search_limit = max(50 * n, 20_000)
    words: dict = {}
    if root == a.root:
        for x in targets:
            w = a.route(x)
            if w is not None and a.act(w, root) == x:
                words[x] = w
    pending = {x for x in targets if x not in words}
    pending.discard(root)
    budget = {"points": n, "search_limit": search_limit}
    detail = {"root": root, "routed": len(words), "explored": 0}
    if pending:

        def found(x):
            pending.discard(x)
            return not pending

        res = orbit(a, root, search_limit, stop_when=found)
        detail["explored"] = len(res.points)
        for x in targets:
            if x not in words and x in res.parent:
                words[x] = res.word_to(x, a.group)
        closed = res.closed
    else:
        closed = False
    if root in set(targets) and root not in words:
        words[root] = a.group.identity
    detail["reached"] = len(targets) - len(pending)
    if pending:
        detail["unreached"] = next(t for t in targets if t in pending)
        status = REFUTED if closed else INDETERMINATE
        return Certificate("transitivity", status, budget, [], detail)
    witnesses = [(x, words[x]) for x in targets]
    return Certificate("transitivity", PASS, budget, witnesses, detail)


def nontrivial_words(a: Action, max_len: int) -> list:
    g = a.group
    return [w for w in g.ball(max_len) if not g.is_identity(w)]


def certify_faithful(
    a: Action,
    max_len: int,
    search_budget: int,
    hints: dict | None = None,
    words: list | None = None,
) -> Certificate:
    """For each nontrivial element of word length ≤ ``max_len``, find a moved point.

    ``hints`` maps words to candidate points (for instance witnesses recorded
    while the action was built); they are re-evaluated, never trusted.
    """
    check_count(max_len, "max_len", minimum=0)
    check_count(search_budget, "search_budget")
    if words is None:
        words = nontrivial_words(a, max_len)
    candidates = _LazyPoints(a, search_budget)
    witnesses = []
    failures = []
    for w in words:
        found = None
        if hints and w in hints:
            x = hints[w]
            y = a.act(w, x)
            if y != x:
                found = (w, x, y)
        if found is None:
            for x in candidates:
                y = a.act(w, x)
                if y != x:
                    found = (w, x, y)
                    break
        if found is None:
            exhaustive = a.size is not None and len(candidates.seen) >= a.size
            failures.append((w, REFUTED if exhaustive else INDETERMINATE))
        else:
            witnesses.append(found)
    if not failures:
        status = PASS
    elif any(st == REFUTED for _, st in failures):
        status = REFUTED
    else:
        status = INDETERMINATE
    budget = {"max_len": max_len, "search_budget": search_budget}
    return Certificate(
        "faithfulness", status, budget, witnesses, {"failures": failures, "words_checked": len(words)}
    )


class _LazyPoints:
    """The first ``limit`` enumerated points, materialized on demand."""

    def __init__(self, a: Action, limit: int):
        self._it = iter(a.points())
        self.limit = limit
        self.seen: list = []

    def __iter__(self):
        i = 0
        while i < self.limit:
            if i == len(self.seen):
                try:
                    self.seen.append(next(self._it))
                except StopIteration:
                    return
            yield self.seen[i]
            i += 1
