"""Run configurations and group descriptor documents.

A configuration is a YAML (or JSON) mapping::

    construction: free_product
    factors:
      - {kind: integers}
      - {kind: integers}
    budgets: {word_budget: 6, point_budget: 500, folner_depth: 50}
    seed: 0
    output: {path: report.json, format: json}

Group descriptors use ``kind`` in ``finite`` (``table`` as an integer matrix
with 0 the identity, or ``cyclic: n``), ``integers``, ``free`` (``rank``),
``direct-sum`` (``factor``, ``index``), ``wreath`` (``factor``) and
``free-product`` (``factors``). ``{file: path}`` loads a descriptor from a
file. Optional ``flags`` hold ``is_amenable``, ``has_F`` and ``virtually_F``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import AmenactError
from .groups import DirectSum, FiniteGroup, Flags, FreeGroup, FreeProduct, Group, Integers, Wreath

CONSTRUCTIONS = (
    "regular",
    "build_Y",
    "free_product",
    "upgrade",
    "finite_quotient",
    "classify",
    "kazhdan",
    "lamplighter",
    "thompson",
)
FORMATS = ("json", "csv")
DEFAULT_BUDGETS = {"word_budget": 6, "point_budget": 500, "folner_depth": 50}

# number of factors each construction takes
ARITY = {
    "regular": 1,
    "build_Y": 1,
    "free_product": 2,
    "upgrade": 2,
    "finite_quotient": 2,
    "kazhdan": 1,
    "lamplighter": 1,
    "thompson": 0,
}


class ConfigError(AmenactError, ValueError):
    code = "config-error"


def _flags(doc, path: str) -> Flags:
    if doc is None:
        return Flags()
    if not isinstance(doc, dict):
        raise ConfigError("flags must be a mapping", path=path)
    unknown = set(doc) - {"is_amenable", "has_F", "virtually_F"}
    if unknown:
        raise ConfigError(f"unknown flags {sorted(unknown)}", path=path)
    for k, v in doc.items():
        if v is not None and not isinstance(v, bool):
            raise ConfigError(f"flag {k} must be true, false or null", path=f"{path}.{k}")
    return Flags(doc.get("is_amenable"), doc.get("has_F"), doc.get("virtually_F"))


def _count(doc: dict, key: str, path: str, minimum: int = 1, default=None) -> int:
    v = doc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{key} must be an integer ≥ {minimum}", path=f"{path}.{key}")
    return v


def parse_group(doc: Any, path: str = "group", base: Path | None = None) -> Group:
    """Build a group from a descriptor document; errors name the offending path."""
    if isinstance(doc, dict) and set(doc) == {"file"}:
        p = Path(doc["file"])
        if base is not None and not p.is_absolute():
            p = base / p
        try:
            loaded = yaml.safe_load(p.read_text())
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot read descriptor file {p}: {e}", path=path) from e
        return parse_group(loaded, path, p.parent)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("group descriptor must be a mapping with a 'kind'", path=path)
    kind = doc["kind"]
    flags = _flags(doc.get("flags"), f"{path}.flags")
    name = doc.get("name")
    try:
        if kind == "finite":
            if "cyclic" in doc:
                n = _count(doc, "cyclic", path)
                g = FiniteGroup.cyclic(n, flags=flags)
                if name:
                    g.name = name
                return g
            if "table" not in doc:
                raise ConfigError("finite group needs 'table' or 'cyclic'", path=path)
            return FiniteGroup(doc["table"], generators=doc.get("generators"), name=name, flags=flags)
        if kind == "integers":
            return Integers(name or "Z", flags=flags)
        if kind == "free":
            return FreeGroup(_count(doc, "rank", path, minimum=0), name=name, flags=flags)
        if kind == "direct-sum":
            factor = parse_group(doc.get("factor"), f"{path}.factor", base)
            return DirectSum(_finite(factor, f"{path}.factor"), doc.get("index", "N"), name=name, flags=flags)
        if kind == "wreath":
            factor = parse_group(doc.get("factor"), f"{path}.factor", base)
            return Wreath(_finite(factor, f"{path}.factor"), name=name, flags=flags)
        if kind == "free-product":
            subs = doc.get("factors")
            if not isinstance(subs, list) or not subs:
                raise ConfigError("free-product needs a non-empty 'factors' list", path=path)
            return FreeProduct(
                [parse_group(s, f"{path}.factors[{i}]", base) for i, s in enumerate(subs)], name=name, flags=flags
            )
    except ConfigError:
        raise
    except AmenactError as e:
        raise ConfigError(str(e), path=e.path or path) from e
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e), path=path) from e
    raise ConfigError(f"unknown group kind {kind!r}", path=f"{path}.kind")


def _finite(g: Group, path: str) -> FiniteGroup:
    if not isinstance(g, FiniteGroup):
        raise ConfigError("expected a finite table group", path=path)
    return g


@dataclass
class RunConfig:
    construction: str
    factors: list[Group] = field(default_factory=list)
    factor_docs: list = field(default_factory=list)
    budgets: dict = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    g0h0: list | None = None
    seed: int = 0
    output_path: str | None = None
    output_format: str = "json"
    #: classify: number of factors, an integer or ``inf``
    n: int | float | None = None
    #: thompson: maps as lists of dyadic breakpoint pairs (defaults to commutators)
    maps: list | None = None
    depth: int | None = None

    def echo(self) -> dict:
        """The configuration as plain data, for reports."""
        out = {
            "construction": self.construction,
            "factors": [f.describe() for f in self.factors],
            "budgets": dict(self.budgets),
            "seed": self.seed,
        }
        if self.g0h0 is not None:
            out["g0h0"] = self.g0h0
        if self.n is not None:
            out["n"] = "inf" if self.n == math.inf else self.n
        if self.maps is not None:
            out["maps"] = self.maps
        if self.depth is not None:
            out["depth"] = self.depth
        return out


def parse_config(doc: Any, base: Path | None = None) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping", path="$")
    unknown = set(doc) - {"construction", "factors", "budgets", "g0h0", "seed", "output", "n", "maps", "depth"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path="$")
    c = doc.get("construction")
    if c not in CONSTRUCTIONS:
        raise ConfigError(f"construction must be one of {', '.join(CONSTRUCTIONS)}", path="construction")
    fdocs = doc.get("factors", [])
    if not isinstance(fdocs, list):
        raise ConfigError("factors must be a list", path="factors")
    factors = [parse_group(d, f"factors[{i}]", base) for i, d in enumerate(fdocs)]
    if c == "classify":
        if len(factors) < 1:
            raise ConfigError("classify needs at least one listed factor", path="factors")
    elif len(factors) != ARITY[c]:
        raise ConfigError(f"{c} takes {ARITY[c]} factor(s), got {len(factors)}", path="factors")
    budgets = dict(DEFAULT_BUDGETS)
    bdoc = doc.get("budgets") or {}
    if not isinstance(bdoc, dict):
        raise ConfigError("budgets must be a mapping", path="budgets")
    for k in bdoc:
        if k not in DEFAULT_BUDGETS:
            raise ConfigError(f"unknown budget {k!r}", path=f"budgets.{k}")
        budgets[k] = _count(bdoc, k, "budgets")
    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer", path="seed")
    out = doc.get("output") or {}
    if not isinstance(out, dict):
        raise ConfigError("output must be a mapping", path="output")
    fmt = out.get("format", "json")
    if fmt not in FORMATS:
        raise ConfigError("output format must be json or csv", path="output.format")
    n = doc.get("n")
    if c == "classify":
        if n is None:
            n = len(factors)
        elif n in ("inf", "infinite", math.inf):
            n = math.inf
        elif isinstance(n, bool) or not isinstance(n, int) or n < 2 or n < len(factors):
            raise ConfigError("n must be an integer ≥ 2 (and ≥ the listed factors) or 'inf'", path="n")
    g0h0 = doc.get("g0h0")
    if g0h0 is not None and not (isinstance(g0h0, list) and len(g0h0) == 2):
        raise ConfigError("g0h0 must be a pair [g0, h0]", path="g0h0")
    depth = doc.get("depth")
    if depth is not None:
        depth = _count(doc, "depth", "$", minimum=0)
    maps = doc.get("maps")
    if maps is not None and not isinstance(maps, list):
        raise ConfigError("maps must be a list of breakpoint lists", path="maps")
    return RunConfig(
        construction=c,
        factors=factors,
        factor_docs=fdocs,
        budgets=budgets,
        g0h0=g0h0,
        seed=seed,
        output_path=out.get("path"),
        output_format=fmt,
        n=n,
        maps=maps,
        depth=depth,
    )


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    try:
        doc = yaml.safe_load(p.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read {p}: {e}", path="$") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {p}: {e}", path="$") from e
    return parse_config(doc, p.parent)
