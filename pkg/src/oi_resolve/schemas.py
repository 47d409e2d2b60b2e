"""JSON schemas for the input files, checked with ``jsonschema``."""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema

SCHEMA_TAG = "oi-resolve/1"


class InputError(ValueError):
    """Bad input file; carries a list of ``pointer: message`` diagnostics."""

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


_MONOMIAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*(1|x\d+(_\d+)?(\^\d+)?(\s*\*\s*x\d+(_\d+)?(\^\d+)?)*)\s*$"},
        {
            "type": "object",
            "required": ["width", "exps"],
            "properties": {
                "width": {"type": "integer", "minimum": 0},
                "exps": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
                },
            },
        },
    ]
}

_SIGNATURE = {
    "type": "object",
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "prime": {"type": "integer", "minimum": 2},
    },
    "additionalProperties": False,
}

IDEAL_SCHEMA = {
    "type": "object",
    "required": ["gen_width", "generators"],
    "properties": {
        "schema": {"const": SCHEMA_TAG},
        "description": {"type": "string"},
        "signature": _SIGNATURE,
        "gen_width": {"type": "integer", "minimum": 0},
        "generators": {"type": "array", "minItems": 1, "items": _MONOMIAL},
    },
    "additionalProperties": False,
}

_MORPHISM = {
    "type": "object",
    "required": ["source", "target", "values"],
    "properties": {
        "source": {"type": "integer", "minimum": 0},
        "target": {"type": "integer", "minimum": 0},
        "values": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
    "additionalProperties": False,
}

_COEFFICIENT = {
    "type": "array",
    "items": {
        "type": "array",
        "prefixItems": [
            {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]},
            _MONOMIAL,
        ],
        "minItems": 2,
        "maxItems": 2,
    },
}

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["levels"],
    "properties": {
        "schema": {"const": SCHEMA_TAG},
        "description": {"type": "string"},
        "signature": _SIGNATURE,
        "levels": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["width"],
                    "properties": {
                        "width": {"type": "integer", "minimum": 0},
                        "degree": {"type": "integer"},
                    },
                    "additionalProperties": False,
                },
            },
        },
        "maps": {
            "type": "object",
            "patternProperties": {
                r"^[1-9]\d*$": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["source", "target", "epsilon", "coefficient"],
                        "properties": {
                            "source": {"type": "integer", "minimum": 0},
                            "target": {"type": "integer", "minimum": 0},
                            "epsilon": _MORPHISM,
                            "coefficient": _COEFFICIENT,
                        },
                        "additionalProperties": False,
                    },
                }
            },
            "additionalProperties": False,
        },
        "augmentation": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/ideal"}]},
    },
    "additionalProperties": False,
    "$defs": {"ideal": IDEAL_SCHEMA},
}


def _pointer(err: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in err.absolute_path)


def validate(obj, schema) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        diags = [f"{_pointer(e)}: {e.message}" for e in errors]
        raise InputError(f"{len(errors)} schema error(s)", diags)


def load_json(path: str | Path, schema) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON", [f"line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc
    validate(obj, schema)
    return obj
