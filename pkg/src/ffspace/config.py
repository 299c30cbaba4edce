"""Space configuration files (JSON, schema v1) and their ingestion.

A configuration either lists the full symmetric coefficient table or asks
for a warped product; expression strings use the coefficient language of
:mod:`ffspace.exprlang`.
"""

from __future__ import annotations

import json

import jsonschema

from .base_space import PD, SR, SpaceDefinition
from .errors import DefinitionError, ParseError
from .exprlang import parse
from .factory import make_special_warped, make_warped

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dimension", "signature", "metric"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": "v1"},
        "name": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 3},
        "signature": {"enum": [PD, SR]},
        "charge": {"type": ["string", "number"]},
        "oneform": {"type": "array", "items": {"type": ["string", "number"]},
                    "minItems": 3},
        "domain": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"},
                      "minItems": 2, "maxItems": 2},
        },
        "metric": {
            "type": "object",
            "additionalProperties": False,
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "coefficients": {
                    "type": "array",
                    "items": {"type": "array",
                              "items": {"type": ["string", "number"]}},
                },
                "warped": {
                    "type": "object",
                    "required": ["phi", "base_p"],
                    "additionalProperties": False,
                    "properties": {
                        "phi": {"type": "string"},
                        "base_p": {
                            "type": "array",
                            "items": {"type": "array",
                                      "items": {"type": ["string",
                                                         "number"]}},
                        },
                        "charge": {"type": "number"},
                    },
                },
            },
        },
    },
}


def _expr(value, dimension, where):
    src = str(value)
    try:
        return parse(src, dimension)
    except ParseError as exc:
        raise DefinitionError(f"{where}: {exc}") from exc


def space_from_dict(doc, name=None):
    """Build a SpaceDefinition from a decoded configuration document."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DefinitionError(
            f"configuration rejected at {exc.json_path}: {exc.message}"
        ) from exc
    n = doc["dimension"]
    sig = doc["signature"]
    label = doc.get("name", name or "config-space")
    domain = tuple(tuple(map(float, pair)) for pair in doc.get("domain", ()))

    if "warped" in doc["metric"]:
        if sig != PD:
            raise DefinitionError(
                "metric.warped: warped construction is defined for the "
                "positive-definite signature")
        wdoc = doc["metric"]["warped"]
        charge = wdoc.get("charge", doc.get("charge"))
        if charge is None:
            raise DefinitionError(
                "metric.warped: a constant charge is required (either "
                "metric.warped.charge or top-level charge)")
        phi = _expr(wdoc["phi"], n, "metric.warped.phi")
        base_p = wdoc["base_p"]
        if len(base_p) != n - 1 or any(len(r) != n - 1 for r in base_p):
            raise DefinitionError(
                f"metric.warped.base_p must be {n - 1} x {n - 1}")
        p = [[_expr(e, n, f"metric.warped.base_p[{i}][{j}]")
              for j, e in enumerate(row)] for i, row in enumerate(base_p)]
        try:
            space = make_special_warped(
                phi, [[p[i][j] for j in range(n - 1)] for i in range(n - 1)],
                float(charge), name=label, domain=domain or None, n=n)
        except DefinitionError:
            space = make_warped(
                n, phi, p, float(charge), name=label, domain=domain or None)
        return space

    table = doc["metric"]["coefficients"]
    if len(table) != n or any(len(row) != n for row in table):
        raise DefinitionError(f"metric.coefficients must be {n} x {n}")
    metric = [[_expr(table[i][j], n, f"metric.coefficients[{i}][{j}]")
               for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if metric[i][j] != metric[j][i]:
                raise DefinitionError(
                    f"metric.coefficients[{i}][{j}] differs from "
                    f"[{j}][{i}]; the table must be symmetric")
    if "oneform" not in doc:
        raise DefinitionError("oneform is required with metric.coefficients")
    if len(doc["oneform"]) != n:
        raise DefinitionError(f"oneform must have {n} entries")
    if "charge" not in doc:
        raise DefinitionError("charge is required with metric.coefficients")
    oneform = tuple(_expr(e, n, f"oneform[{i}]")
                    for i, e in enumerate(doc["oneform"]))
    charge = _expr(doc["charge"], n, "charge")
    return SpaceDefinition(
        n=n, signature=sig, metric=tuple(tuple(row) for row in metric),
        oneform=oneform, charge=charge, name=label,
        domain=domain)


def load_space(path):
    """Load a configuration file into a SpaceDefinition."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DefinitionError(f"{path}: not valid JSON: {exc}") from exc
    return space_from_dict(doc, name=str(path))


def space_to_dict(space):
    """Serialize a SpaceDefinition back to the configuration shape."""
    from .exprlang import pretty

    return {
        "schema": "v1",
        "name": space.name,
        "dimension": space.n,
        "signature": space.signature,
        "charge": pretty(space.charge),
        "oneform": [pretty(e) for e in space.oneform],
        "metric": {"coefficients": [[pretty(space.metric[i][j])
                                     for j in range(space.n)]
                                    for i in range(space.n)]},
        "domain": [list(pair) for pair in space.domain],
    }
