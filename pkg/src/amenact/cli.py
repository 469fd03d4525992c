"""Command line entry point.

Exit codes: 0 every certificate passed, 1 something was refuted, 2 usage
or configuration error, 3 a certificate stayed indeterminate at its budget
(or the classification is unknown), 4 the construction itself failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .errors import AmenactError
from .report import EXIT_CONSTRUCTION, EXIT_REFUTED, EXIT_USAGE, emit, replay, run


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amenact", description="Build and certify amenable actions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json"):
        sp.add_argument("--config", required=True, help="YAML or JSON run configuration")
        sp.add_argument("--budget-words", type=int, help="maximal word length for faithfulness")
        sp.add_argument("--budget-points", type=int, help="points covered by transitivity")
        sp.add_argument("--folner-depth", type=int, help="number of Følner sets")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--format", choices=["json", "csv"], default=None)
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identity)")
        sp.set_defaults(fmt_default=fmt_default)
        return sp

    common(sub.add_parser("build", help="run the configured construction and write its report"))
    certify = common(sub.add_parser("certify", help="re-verify a stored report against a rebuilt action"))
    certify.add_argument("--report", required=True, help="stored JSON report")
    common(sub.add_parser("folner", help="write the Følner decay table"), fmt_default="csv")
    common(sub.add_parser("classify", help="decide membership from flags"))
    return p


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    for flag, key in (("budget_words", "word_budget"), ("budget_points", "point_budget"), ("folner_depth", "folner_depth")):
        v = getattr(args, flag)
        if v is not None:
            if v < 1:
                raise ConfigError(f"--{flag.replace('_', '-')} must be at least 1", path=f"budgets.{key}")
            cfg.budgets[key] = v
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _fail(e: AmenactError, code: int) -> int:
    print(json.dumps({"error": e.to_dict()}, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as e:
        return _fail(e, EXIT_USAGE)
    if args.command == "classify" and cfg.construction != "classify":
        return _fail(ConfigError("classify needs construction: classify", path="construction"), EXIT_USAGE)
    fmt = args.format or (cfg.output_format if args.command == "build" else args.fmt_default)
    out = args.out or (cfg.output_path if args.command == "build" else None)
    try:
        res = run(cfg, timing=args.timing)
    except ConfigError as e:
        return _fail(e, EXIT_USAGE)
    except AmenactError as e:
        return _fail(e, EXIT_CONSTRUCTION)
    if args.command == "certify":
        try:
            stored = json.loads(Path(args.report).read_text())
        except (OSError, json.JSONDecodeError) as e:
            return _fail(ConfigError(f"cannot read report: {e}", path="--report"), EXIT_USAGE)
        checks = replay(res, stored)
        print(json.dumps({"replayed": checks}, sort_keys=True))
        if not all(checks.values()):
            return EXIT_REFUTED
        return res.exit_code
    text = emit(res, fmt, out)
    if out is None:
        sys.stdout.write(text)
    return res.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
