"""JSON Schema for case files."""

from __future__ import annotations

from jsonschema import Draft202012Validator

_dims = {
    "type": "array",
    "items": {
        "oneOf": [
            {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            {"type": "object", "required": ["degree", "twist"],
             "properties": {"degree": {"type": "integer"}, "twist": {"type": "integer"},
                            "dim": {"type": "integer", "minimum": 0}}},
        ]
    },
}

_space = {"oneOf": [{"const": "point"}, {"type": "object", "minProperties": 1, "maxProperties": 1}]}

_script = {
    "type": "object",
    "required": ["steps"],
    "properties": {
        "steps": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {"type": "object", "required": ["declare", "dims", "citation"],
                     "properties": {"declare": {"type": "string"}, "dims": _dims,
                                    "citation": {"type": "string", "minLength": 1},
                                    "from_inference": {"type": "string"}}},
                    {"type": "object", "required": ["let", "space"],
                     "properties": {"let": {"type": "string"}, "space": _space}},
                ]
            },
        },
        "result": {"type": "string"},
    },
}

_label = {"type": "string", "pattern": r"^d[0-9]+\(-?[0-9]+,-?[0-9]+\)$"}

_constraint = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["forbidden_total_degrees", "prescribed_totals", "bounded_totals", "vanishing_bound"]},
        "degrees": {"type": "array", "items": {"type": "integer"}},
        "p_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "totals": _dims,
        "totals_space": _space,
        "totals_from": {"type": "string"},
        "totals_e1": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "totals_expected": {"type": "boolean"},
        "cone_shift": {"type": "integer", "minimum": 0},
    },
}

_column_page = {
    "type": "object",
    "required": ["p"],
    "properties": {"p": {"type": "integer"}, "space": _space, "script": _script, "dims": _dims},
}

CASE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "ambient_dim", "strata", "columns", "e1", "differentials", "status"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "title": {"type": "string"},
        "ambient_dim": {"type": "integer", "minimum": 1},
        "vanishing_bound": {"type": ["integer", "null"]},
        "status": {"enum": ["complete", "incomplete-reference"]},
        "notes": {"type": "array", "items": {"type": "string"}},
        "strata": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "name", "d"],
                "properties": {
                    "index": {"type": "integer", "minimum": 1},
                    "name": {"type": "string"},
                    "d": {"type": "integer", "minimum": 0},
                    "contains": {"type": "array", "items": {
                        "oneOf": [{"type": "integer"},
                                  {"type": "object", "required": ["index"],
                                   "properties": {"index": {"type": "integer"}, "proper": {"type": "boolean"}}}]}},
                    "geom": {"type": "array", "items": {
                        "type": "object", "required": ["class", "target"],
                        "properties": {"class": {"type": "string"}, "target": {"type": "integer"},
                                       "implies": {"type": "array", "items": {"type": "integer"}},
                                       "member_of": {"type": ["integer", "null"]},
                                       "unique": {"type": "boolean"}}}},
                    "finite": {"type": "integer", "minimum": 1},
                    "subsets": {"type": "array", "items": {
                        "type": "object", "required": ["size", "home"],
                        "properties": {"size": {"type": "integer"}, "home": {"type": "integer"}}}},
                },
            },
        },
        "columns": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["p", "d"],
                "properties": {"p": {"type": "integer", "minimum": 1}, "d": {"type": "integer", "minimum": 0},
                               "space": _space, "script": _script, "note": {"type": "string"}},
                "oneOf": [{"required": ["space"]}, {"required": ["script"]}],
            },
        },
        "e1": {
            "type": "array",
            "items": {"type": "object", "required": ["p", "q", "twist"],
                      "properties": {"p": {"type": "integer"}, "q": {"type": "integer"},
                                     "twist": {"type": "integer"}, "dim": {"type": "integer", "minimum": 1}}},
        },
        "differentials": {
            "type": "array",
            "items": {"type": "object", "required": ["r", "p", "q", "status"],
                      "properties": {"r": {"type": "integer", "minimum": 1}, "p": {"type": "integer"},
                                     "q": {"type": "integer"},
                                     "status": {"enum": ["nonzero", "zero", "unknown"]},
                                     "note": {"type": "string"}}},
        },
        "inference": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {
                    "name": {"type": "string"},
                    "description": {"type": "string"},
                    "page": {"type": "object", "properties": {
                        "from_e1": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                        "columns": {"type": "array", "items": _column_page},
                        "entries": {"type": "array"}}},
                    "unknowns": {"type": "array", "items": _label},
                    "constraints": {"type": "array", "items": _constraint},
                    "expect": {"type": "object", "additionalProperties": {"enum": ["nonzero", "zero", "undetermined"]}},
                    "export": {"type": "boolean"},
                    "chern_criterion": {"type": "object", "required": ["computation", "direction"]},
                    "implies_nonzero": {"type": "array", "items": _label},
                },
                "oneOf": [{"required": ["page", "unknowns"]}, {"required": ["chern_criterion", "implies_nonzero"]}],
            },
        },
        "expected": {"type": ["string", "null"]},
    },
}

VALIDATOR = Draft202012Validator(CASE_SCHEMA)


def schema_errors(obj) -> list[str]:
    """Human-readable errors, each prefixed by the JSON pointer of the offending node."""
    out = []
    for err in sorted(VALIDATOR.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path))):
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        out.append(f"{pointer}: {err.message}")
    return out
