"""Dispatch a run configuration to its construction and write the report.

Reports are plain dictionaries serialized as canonical JSON (sorted keys,
exact fractions as ``"p/q"`` strings), so the same configuration produces
byte-identical output. Wall time is only recorded on request.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .certify import INDETERMINATE, PASS, REFUTED, Certificate, certify_faithful, certify_transitive
from .config import ConfigError, RunConfig
from .constructions import (
    build_free_product_action,
    build_Y,
    classify,
    component_orbit_exceeds,
    finite_quotient_route,
    kazhdan_nonfg_action,
    lamplighter_coset_action,
    regular_action,
    standard_commutators,
    thompson_near_zero,
    upgrade_to_faithful,
)
from .constructions.thompson import PLMap
from .folner import DecayReport, fraction_str, verify_sequence
from .groups import DirectSum

SCHEMA_VERSION = 1

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_INDETERMINATE, EXIT_CONSTRUCTION = 0, 1, 2, 3, 4

# Følner families whose sets grow exponentially are cut at these depths
DEPTH_CAPS = {"wreath": 6, "direct-sum": 12, "lamplighter": 12}


@dataclass
class RunResult:
    """What a run produced; ``action`` is kept for replay, never serialized."""

    config: RunConfig
    outcome: str
    certificates: dict[str, Certificate] = field(default_factory=dict)
    checks: dict[str, dict] = field(default_factory=dict)
    folner: DecayReport | None = None
    details: dict = field(default_factory=dict)
    action: Any = None
    wall_time: float | None = None

    def statuses(self) -> dict[str, str]:
        out = {k: c.status for k, c in self.certificates.items()}
        out.update({k: c["status"] for k, c in self.checks.items()})
        return out

    @property
    def exit_code(self) -> int:
        return exit_code_for(self.outcome, self.statuses())


def exit_code_for(outcome: str, statuses: dict[str, str]) -> int:
    vals = set(statuses.values())
    if REFUTED in vals:
        return EXIT_REFUTED
    if INDETERMINATE in vals or outcome == "unknown":
        return EXIT_INDETERMINATE
    return EXIT_OK


def _aggregate(statuses: dict[str, str], success: str) -> str:
    vals = set(statuses.values())
    if REFUTED in vals:
        return REFUTED
    if INDETERMINATE in vals:
        return INDETERMINATE
    return success


def _folner_check(f: DecayReport) -> dict:
    ok = f.bound_ok is not False and f.monotone
    return {"status": PASS if ok else REFUTED, "bound_ok": f.bound_ok, "monotone": f.monotone}


def _g0h0(cfg: RunConfig):
    if cfg.g0h0 is None:
        return None, None
    G, H = cfg.factors
    try:
        return G.payload_from_json(cfg.g0h0[0]), H.payload_from_json(cfg.g0h0[1])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad g0h0: {e}", path="g0h0") from e


def _capped(kind: str, depth: int, details: dict) -> int:
    cap = DEPTH_CAPS.get(kind)
    used = depth if cap is None else min(depth, cap)
    details["folner_depth_used"] = used
    return used


def _from_construction(cfg: RunConfig, a, rep) -> RunResult:
    res = RunResult(cfg, "", dict(rep.certificates), folner=rep.folner, action=a, details=dict(rep.details))
    if rep.folner is not None:
        res.checks["folner"] = _folner_check(rep.folner)
    res.outcome = _aggregate(res.statuses(), "in_A (certified at budgets)")
    return res


def _run_regular(cfg: RunConfig) -> RunResult:
    (g,) = cfg.factors
    b = cfg.budgets
    details: dict = {}
    depth = _capped(g.kind, b["folner_depth"], details)
    a, seq = regular_action(g, depth)
    if isinstance(g, DirectSum):
        words = [g.element_at(i) for i in range(1, b["point_budget"] + 1)]
        S, labels = g.coordinate_generators(1), ["coordinate 0"]
    else:
        words = [w for w in g.ball(b["word_budget"]) if not g.is_identity(w)]
        S = g.generators
        labels = [str(g.payload_to_json(s)) for s in S]
    res = RunResult(cfg, "", action=a, details=details)
    res.certificates["faithfulness"] = certify_faithful(a, b["word_budget"], b["point_budget"], words=words)
    n = b["point_budget"] if g.order is None else min(g.order, b["point_budget"])
    res.certificates["transitivity"] = certify_transitive(a, n=n)
    res.folner = verify_sequence(a, seq, S, labels)
    res.checks["folner"] = _folner_check(res.folner)
    res.outcome = _aggregate(res.statuses(), "in_A (certified at budgets)")
    return res


def _run_build_Y(cfg: RunConfig) -> RunResult:
    (h,) = cfg.factors
    depth = cfg.budgets["folner_depth"]
    y, seq = build_Y(h, depth)
    S = h.letters
    res = RunResult(cfg, "", action=y, details={"provider": y.provider.label})
    res.folner = verify_sequence(y, seq, S, [str(h.payload_to_json(s)) for s in S])
    res.checks["folner"] = _folner_check(res.folner)
    small = [n for n in seq.indices() if len(y.orbit_points(n)) <= n]
    res.checks["orbit_sizes"] = {"status": REFUTED if small else PASS, "too_small": small}
    res.outcome = _aggregate(res.statuses(), "certified at budgets")
    return res


def _run_free_product(cfg: RunConfig) -> RunResult:
    G, H = cfg.factors
    b = cfg.budgets
    a, rep = build_free_product_action(
        G, H, depth=b["folner_depth"], word_budget=b["word_budget"], seed=cfg.seed, point_budget=b["point_budget"]
    )
    return _from_construction(cfg, a, rep)


def _run_upgrade(cfg: RunConfig) -> RunResult:
    G, H = cfg.factors
    b = cfg.budgets
    g0, h0 = _g0h0(cfg)
    base, base_rep = build_free_product_action(
        G, H, depth=b["folner_depth"], word_budget=b["word_budget"], seed=cfg.seed, point_budget=b["point_budget"]
    )
    a, rep = upgrade_to_faithful(
        base, base_rep.sequence, g0, h0, word_budget=b["word_budget"], point_budget=b["point_budget"], seed=cfg.seed
    )
    return _from_construction(cfg, a, rep)


def _run_finite_quotient(cfg: RunConfig) -> RunResult:
    G, H = cfg.factors
    b = cfg.budgets
    a, rep = finite_quotient_route(
        G, H, depth=b["folner_depth"], word_budget=b["word_budget"], point_budget=b["point_budget"], seed=cfg.seed
    )
    return _from_construction(cfg, a, rep)


def _run_classify(cfg: RunConfig) -> RunResult:
    verdict = classify(cfg.factors, cfg.n)
    return RunResult(cfg, verdict, details={"verdict": verdict})


def _run_kazhdan(cfg: RunConfig) -> RunResult:
    (g,) = cfg.factors
    if not isinstance(g, DirectSum):
        raise ConfigError("kazhdan needs a direct-sum group", path="factors[0]")
    depth = 5 if cfg.depth is None else cfg.depth
    a, certify = kazhdan_nonfg_action(g, depth)
    limit = cfg.budgets["point_budget"]
    res = RunResult(cfg, "", action=a, details={"depth": depth})
    eps = Fraction(1, limit)
    for k in range(1, depth + 1):
        c = certify(g.coordinate_generators(k), eps)
        res.checks[f"folner_k{k}"] = {
            "status": PASS if c.ok else REFUTED,
            "point": a.point_to_json(c.A[0]),
            "max_defect": fraction_str(c.max_defect),
            "eps": fraction_str(eps),
        }
        orb = component_orbit_exceeds(a, k, limit)
        # a closed orbit would be a finite orbit
        res.checks[f"infinite_orbit_k{k}"] = {
            "status": REFUTED if orb.closed else PASS,
            "explored": len(orb),
        }
    res.outcome = _aggregate(res.statuses(), "in_A (certified at budgets)")
    return res


def _run_lamplighter(cfg: RunConfig) -> RunResult:
    (q,) = cfg.factors
    b = cfg.budgets
    details: dict = {}
    depth = _capped("lamplighter", b["folner_depth"], details)
    a, rep = lamplighter_coset_action(
        q, word_budget=b["word_budget"], point_budget=b["point_budget"], depth=depth, seed=cfg.seed
    )
    res = _from_construction(cfg, a, rep)
    res.details.update(details)
    return res


def _run_thompson(cfg: RunConfig) -> RunResult:
    depth = 40 if cfg.depth is None else cfg.depth
    if cfg.maps is None:
        maps = standard_commutators()
    else:
        try:
            maps = [PLMap.from_dyadic_pairs(m) for m in cfg.maps]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad PL map: {e}", path="maps") from e
    rep = thompson_near_zero(maps, depth)
    res = RunResult(cfg, "", details={"near_zero": rep.to_dict(), "maps": [m.to_dyadic_pairs() for m in maps]})
    for r in rep.rows:
        res.checks[f"map_{r.index}"] = {"status": PASS if r.ok else INDETERMINATE, "threshold": r.threshold}
    res.outcome = _aggregate(res.statuses(), "eventually invariant near 0 (certified to depth)")
    return res


RUNNERS = {
    "regular": _run_regular,
    "build_Y": _run_build_Y,
    "free_product": _run_free_product,
    "upgrade": _run_upgrade,
    "finite_quotient": _run_finite_quotient,
    "classify": _run_classify,
    "kazhdan": _run_kazhdan,
    "lamplighter": _run_lamplighter,
    "thompson": _run_thompson,
}


def run(cfg: RunConfig, timing: bool = False) -> RunResult:
    start = time.perf_counter()
    res = RUNNERS[cfg.construction](cfg)
    if timing:
        res.wall_time = time.perf_counter() - start
    return res


def _plain(x):
    """Keep JSON-representable data; exact fractions become strings, objects are dropped."""
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, dict):
        out = {}
        for k, v in x.items():
            v = _plain(v)
            if v is not _DROP:
                out[str(k)] = v
        return out
    if isinstance(x, (list, tuple)):
        return [v for v in map(_plain, x) if v is not _DROP]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return _DROP


_DROP = object()


def to_report(res: RunResult) -> dict:
    a = res.action
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": res.config.echo(),
        "outcome": res.outcome,
        "exit_code": res.exit_code,
        "statuses": res.statuses(),
        "certificates": {k: c.to_dict(a) for k, c in res.certificates.items()},
        "checks": _plain(res.checks),
        "details": _plain(res.details),
        "folner_table": None,
    }
    if res.folner is not None:
        f = res.folner
        doc["folner_table"] = {
            "generators": list(f.generator_labels),
            "bound": f.bound_label,
            "bound_ok": f.bound_ok,
            "monotone": f.monotone,
            "strictly_decreasing": f.strictly_decreasing,
            "rows": f.to_rows(),
        }
    if res.wall_time is not None:
        doc["wall_time"] = round(res.wall_time, 3)
    return doc


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


CSV_HEADER = "n,size,defect_max"


def to_csv(res: RunResult) -> str:
    if res.folner is None:
        return CSV_HEADER + "\n"
    return res.folner.to_csv()


def emit(res: RunResult, fmt: str = "json", path: str | Path | None = None) -> str:
    """Serialize and, given a path, write the report; returns the text."""
    if fmt == "json":
        text = dumps(to_report(res))
    elif fmt == "csv":
        text = to_csv(res)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def replay(res: RunResult, stored: dict) -> dict[str, bool]:
    """Re-evaluate the certificates of a stored report against a rebuilt action."""
    out = {}
    for name, doc in stored.get("certificates", {}).items():
        cert = Certificate.from_dict(doc, res.action)
        out[name] = cert.status != PASS or cert.verify(res.action)
    return out


__all__ = [
    "EXIT_CONSTRUCTION",
    "EXIT_INDETERMINATE",
    "EXIT_OK",
    "EXIT_REFUTED",
    "EXIT_USAGE",
    "RunResult",
    "SCHEMA_VERSION",
    "dumps",
    "emit",
    "replay",
    "run",
    "to_report",
]
