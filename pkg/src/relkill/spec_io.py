"""JSON metric specifications.

Format (unknown fields are rejected)::

    {"schema": "relkill/1",            # optional
     "dim": 2, "coords": ["x", "y"],
     "conformal_factor": "x^2+4*y^2"}  # or "inverse_metric": [[...], ...]

or ``{"fixture_id": "bessel-ex3"}`` for a built-in numeric Hamiltonian.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .fixtures import NUMERIC_FIXTURES
from .geometry import Metric, SingularMetricError
from .numeric import NumericHamiltonian, bessel_hamiltonian
from .parser import ParseError
from .phasefn import PhaseSpace

__all__ = ["SCHEMA_ID", "METRIC_SCHEMA", "SpecError", "LoadedMetric", "load_metric_spec", "parse_metric_spec"]

SCHEMA_ID = "relkill/1"

_IDENT = "^[A-Za-z_][A-Za-z0-9_]*$"

METRIC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "dim": {"type": "integer", "minimum": 1},
        "coords": {
            "type": "array",
            "items": {"type": "string", "pattern": _IDENT},
            "minItems": 1,
            "uniqueItems": True,
        },
        "inverse_metric": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "string", "minLength": 1}},
        },
        "conformal_factor": {"type": "string", "minLength": 1},
        "fixture_id": {"enum": sorted(NUMERIC_FIXTURES)},
    },
    "oneOf": [
        {
            "required": ["fixture_id"],
            "not": {"anyOf": [{"required": ["inverse_metric"]}, {"required": ["conformal_factor"]}]},
        },
        {"required": ["dim", "coords", "inverse_metric"], "not": {"required": ["conformal_factor"]}},
        {"required": ["dim", "coords", "conformal_factor"], "not": {"required": ["inverse_metric"]}},
    ],
}


class SpecError(ValueError):
    """Invalid metric specification; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


@dataclass(frozen=True)
class LoadedMetric:
    metric: Metric | None = None
    numeric: NumericHamiltonian | None = None
    fixture_id: str | None = None

    @property
    def is_symbolic(self) -> bool:
        return self.metric is not None


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_metric_spec(doc) -> LoadedMetric:
    validator = jsonschema.Draft202012Validator(METRIC_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        if err.validator == "oneOf" and isinstance(doc, dict):
            msg = "need fixture_id, or dim + coords + exactly one of inverse_metric / conformal_factor"
        else:
            msg = err.message
        raise SpecError(msg, _path(err.absolute_path))
    if "fixture_id" in doc:
        fid = doc["fixture_id"]
        if fid == "bessel-ex3":
            return LoadedMetric(numeric=bessel_hamiltonian(), fixture_id=fid)
        raise SpecError(f"unknown fixture {fid!r}", "$.fixture_id")  # pragma: no cover
    dim, coords = doc["dim"], doc["coords"]
    if len(coords) != dim:
        raise SpecError(f"{len(coords)} coordinates given for dim {dim}", "$.coords")
    try:
        space = PhaseSpace.for_coords(coords)
    except ValueError as exc:
        raise SpecError(str(exc), "$.coords") from None

    def parse(text, where):
        try:
            return space.parse_coord(text)
        except ParseError as exc:
            raise SpecError(f"cannot parse {text!r}: {exc.reason} at offset {exc.position}", where) from None
        except ValueError as exc:
            raise SpecError(str(exc), where) from None

    try:
        if "conformal_factor" in doc:
            if dim != 2:
                raise SpecError("conformal_factor is only accepted for dim 2", "$.conformal_factor")
            metric = Metric.conformal(space, parse(doc["conformal_factor"], "$.conformal_factor"))
        else:
            rows = doc["inverse_metric"]
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise SpecError(f"inverse_metric must be {dim}x{dim}", "$.inverse_metric")
            mat = [[parse(e, f"$.inverse_metric[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(rows)]
            for i in range(dim):
                for j in range(i + 1, dim):
                    if mat[i][j] != mat[j][i]:
                        raise SpecError("inverse_metric is not symmetric", f"$.inverse_metric[{i}][{j}]")
            metric = Metric(space, mat)
    except (SingularMetricError, ZeroDivisionError) as exc:
        raise SpecError(f"singular metric: {exc}", "$") from None
    return LoadedMetric(metric=metric)


def load_metric_spec(path) -> LoadedMetric:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    return parse_metric_spec(doc)
