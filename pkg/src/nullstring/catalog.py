"""Machine-readable registry of the explicit Einstein metrics.

Every record carries a chart, exact parameters, named expression definitions,
a null coframe, the declared null-string distributions, the expected
two-sided type symbol, optional closed-form cross-check data (printed metric
components, connection forms, curvature coefficients), an optional generating
function with its own chart, and a sample domain.  The file format is a JSON
array of records; expressions are strings in the package grammar.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from .errors import CatalogSchemaError, ConstraintViolationError, SamplingError
from .exprlang import Expr, ParamEnv, Scope, eval_value, parse
from .frame import FrameField
from .pdes import GeneratorSpec
from .strings import Distribution2, parse_type_symbol

_EXPR = {"type": "string", "minLength": 1}
_DEFS = {"type": "array", "items": {"type": "array",
                                    "prefixItems": [{"type": "string"}, _EXPR],
                                    "minItems": 2, "maxItems": 2}}
_DOMAIN = {
    "type": "object",
    "required": ["box"],
    "properties": {
        "box": {"type": "object",
                "additionalProperties": {"type": "array", "minItems": 2, "maxItems": 2,
                                         "items": {"type": "number"}}},
        "excluded": {"type": "array", "items": _EXPR},
        "exclusion_radius": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

RECORD_SCHEMA = {
    "type": "object",
    "required": ["id", "paper_anchor", "quote", "chart", "params", "tetrad",
                 "declared_distributions", "expected_type", "sample_domain"],
    "properties": {
        "id": {"type": "string", "pattern": r"^[a-z0-9][a-z0-9\-\.]*$"},
        "family": {"type": "string"},
        "paper_anchor": {"type": "string"},
        "quote": {"type": "string"},
        "notes": {"type": "string"},
        "chart": {"type": "array", "items": {"type": "string"}, "minItems": 4, "maxItems": 4},
        "params": {"type": "object", "additionalProperties": {"type": "string"}},
        "param_constraints": {"type": "array", "items": {
            "type": "object", "required": ["expr", "kind"],
            "properties": {"expr": _EXPR,
                           "kind": {"enum": ["nonzero", "positive"]},
                           "note": {"type": "string"}},
            "additionalProperties": False}},
        "defs": _DEFS,
        "tetrad": {"type": "array", "minItems": 4, "maxItems": 4,
                   "items": {"type": "array", "items": _EXPR,
                             "minItems": 4, "maxItems": 4}},
        "metric_check": {"type": "object", "additionalProperties": _EXPR},
        "connection_check": {"type": "object", "additionalProperties": {
            "type": "array", "items": _EXPR, "minItems": 4, "maxItems": 4}},
        "expected_curvature": {"type": "object", "additionalProperties": _EXPR},
        "generators": {
            "type": "object",
            "required": ["kind", "chart"],
            "properties": {
                "kind": {"enum": ["przanowski-q", "para-kahler-m", "hyperheavenly-theta",
                                  "hh-split", "liouville-split"]},
                "chart": {"type": "array", "items": {"type": "string"},
                          "minItems": 4, "maxItems": 4},
                "defs": _DEFS,
                "names": {"type": "object", "additionalProperties": {"type": "string"}},
                "domain": _DOMAIN,
            },
            "additionalProperties": False,
        },
        "declared_distributions": {"type": "array", "items": {
            "type": "object", "required": ["side", "span"],
            "properties": {"side": {"enum": ["SD", "ASD"]},
                           "span": {"type": "array", "items": {"type": "integer",
                                                               "minimum": 1, "maximum": 4},
                                    "minItems": 2, "maxItems": 2}},
            "additionalProperties": False}},
        "expected_type": {"type": "string"},
        "sample_domain": _DOMAIN,
        "coordinate_change": {
            "type": "object", "required": ["target", "map"],
            "properties": {"target": {"type": "string"},
                           "map": {"type": "object", "additionalProperties": _EXPR}},
            "additionalProperties": False},
    },
    "additionalProperties": False,
}

CATALOG_SCHEMA = {"type": "array", "items": RECORD_SCHEMA}

DEFAULT_CATALOG_ENV = "NULLSTRING_CATALOG"


@dataclass
class MetricRecord:
    raw: dict
    scope: Scope = field(init=False)
    frame: FrameField = field(init=False)
    distributions: list[Distribution2] = field(init=False)
    generator: GeneratorSpec | None = field(init=False, default=None)

    def __post_init__(self):
        raw = self.raw
        rid = raw["id"]
        params = ParamEnv({k: Fraction(v) for k, v in raw.get("params", {}).items()})
        defs: dict[str, Expr] = {}
        scope = Scope(tuple(raw["chart"]), params, defs)
        for name, src in raw.get("defs", []):
            e = _parse_field(src, rid, f"defs[{name}]")
            defs[name] = e
            scope.validate(e)
        tetrad = [[_parse_field(src, rid, f"tetrad[{a}][{m}]")
                   for m, src in enumerate(row)] for a, row in enumerate(raw["tetrad"])]
        for row in tetrad:
            for e in row:
                scope.validate(e)
        self.scope = scope
        self.frame = FrameField(scope, tetrad, name=rid)
        self.distributions = [Distribution2(tuple(d["span"]))
                              for d in raw["declared_distributions"]]
        for d, spec in zip(self.distributions, raw["declared_distributions"]):
            if d.side != spec["side"]:
                raise CatalogSchemaError(
                    f"span {spec['span']} is {d.side}, not {spec['side']}",
                    rid, "declared_distributions")
        try:
            parse_type_symbol(raw["expected_type"])
        except ValueError as exc:
            raise CatalogSchemaError(str(exc), rid, "expected_type") from None
        for check in ("metric_check", "expected_curvature"):
            for key, src in raw.get(check, {}).items():
                scope.validate(_parse_field(src, rid, f"{check}[{key}]"))
        for key, row in raw.get("connection_check", {}).items():
            for src in row:
                scope.validate(_parse_field(src, rid, f"connection_check[{key}]"))
        self._check_param_constraints()
        gen = raw.get("generators")
        if gen is not None:
            gdefs: dict[str, Expr] = {}
            gscope = Scope(tuple(gen["chart"]), params, gdefs)
            for name, src in gen.get("defs", []):
                e = _parse_field(src, rid, f"generators.defs[{name}]")
                gdefs[name] = e
                gscope.validate(e)
            self.generator = GeneratorSpec(gen["kind"], gscope,
                                           {k: gdefs[v] for k, v in
                                            gen.get("names", {}).items()},
                                           gen.get("domain"))

    def _check_param_constraints(self):
        rid = self.raw["id"]
        probe = {c: 1.0 for c in self.scope.coords}
        for con in self.raw.get("param_constraints", []):
            e = parse(con["expr"])
            self.scope.validate(e)
            if set(self.scope.free_coords(e)):
                raise CatalogSchemaError("parameter constraint may not involve coordinates",
                                         rid, f"param_constraints[{con['expr']}]")
            v = eval_value(e, self.scope, probe)
            ok = abs(v) > 1e-12 if con["kind"] == "nonzero" else v > 0.0
            if not ok:
                raise ConstraintViolationError(
                    f"record {rid!r}: constraint {con['expr']} ({con['kind']}) violated "
                    f"(value {v!r}){': ' + con['note'] if con.get('note') else ''}")

    # -- convenience accessors ------------------------------------------------

    @property
    def id(self) -> str:
        return self.raw["id"]

    @property
    def expected_type(self) -> str:
        return self.raw["expected_type"]

    @property
    def lambda_value(self) -> float:
        return float(self.scope.params["Lambda"]) if "Lambda" in self.scope.params else 0.0

    def expr(self, src_or_name: str) -> Expr:
        if src_or_name in self.scope.defs:
            return self.scope.defs[src_or_name]
        e = parse(src_or_name)
        self.scope.validate(e)
        return e

    def sample_domain(self) -> dict:
        return self.raw["sample_domain"]


def _parse_field(src: str, rid: str, path: str) -> Expr:
    try:
        return parse(src)
    except Exception as exc:
        raise CatalogSchemaError(f"bad expression: {exc}", rid, path) from None


def default_catalog_path() -> Path:
    env = os.environ.get(DEFAULT_CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("nullstring").joinpath("data/catalog.json")))


def load_catalog(path: str | Path | None = None) -> list[MetricRecord]:
    """Load and validate the catalog; raises CatalogSchemaError with the record
    id and field path on the first violation."""
    p = Path(path) if path is not None else default_catalog_path()
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CatalogSchemaError(f"catalog file not found: {p}") from None
    except json.JSONDecodeError as exc:
        raise CatalogSchemaError(f"catalog is not valid JSON: {exc}") from None
    if jsonschema is not None:
        validator = jsonschema.Draft202012Validator(CATALOG_SCHEMA)
        for err in validator.iter_errors(data):
            rid = None
            if err.absolute_path:
                first = err.absolute_path[0]
                if isinstance(first, int) and isinstance(data, list) \
                        and isinstance(data[first], dict):
                    rid = data[first].get("id")
            raise CatalogSchemaError(err.message, rid,
                                     "/".join(str(x) for x in err.absolute_path))
    records = [MetricRecord(raw) for raw in data]
    seen: set[str] = set()
    for r in records:
        if r.id in seen:
            raise CatalogSchemaError("duplicate record id", r.id, "id")
        seen.add(r.id)
    return records


def select_records(records: Sequence[MetricRecord], selector: str | None
                   ) -> list[MetricRecord]:
    import fnmatch
    if selector in (None, "", "--all", "all"):
        return list(records)
    out = [r for r in records if fnmatch.fnmatchcase(r.id, selector)]
    return out


def sample_points(rec_or_domain, n: int, seed: int,
                  scope: Scope | None = None,
                  exclusion_radius: float | None = None) -> list[dict[str, float]]:
    """Deterministic points inside the sample box, rejecting any point whose
    excluded-expression magnitude falls below the exclusion radius (the
    |expr| value is the distance proxy for the hypersurface expr = 0)."""
    if isinstance(rec_or_domain, MetricRecord):
        domain = rec_or_domain.sample_domain()
        scope = rec_or_domain.scope
    else:
        domain = rec_or_domain
        if scope is None:
            raise ValueError("sampling a bare domain needs a scope")
    if n < 1:
        raise ValueError("n must be >= 1")
    box = domain["box"]
    radius = exclusion_radius if exclusion_radius is not None \
        else domain.get("exclusion_radius", 0.05)
    excluded = [parse(s) for s in domain.get("excluded", [])]
    for e in excluded:
        scope.validate(e)
    coords = scope.coords
    rng = np.random.default_rng(seed)
    points: list[dict[str, float]] = []
    attempts = 0
    max_attempts = 10000 * n
    while len(points) < n:
        if attempts >= max_attempts:
            raise SamplingError(
                f"could not place {n} points after {max_attempts} attempts "
                f"(domain too constrained)")
        attempts += 1
        pt = {}
        for c in coords:
            lo, hi = box.get(c, (0.0, 1.0))
            pt[c] = float(rng.uniform(lo, hi))
        ok = True
        for e in excluded:
            if abs(eval_value(e, scope, pt)) < radius:
                ok = False
                break
        if ok:
            points.append(pt)
    return points
