"""Model files: JSON documents with a versioned schema.

Every file has ``schema_version``, ``kind``, ``name``, an optional
``description`` and ``cap`` (degree cap), and a kind-specific ``body``::

    cdga-table        {"basis": {"0": ["1"], "1": [...]}, "products": {"a*b": "c"},
                       "differential": {"b": "a1*a2"}}
    cdga-semifree     {"generators": [{"name": "a", "degree": 1}], "differential": {...},
                       "relations": ["a*e"]}
    lie-presentation  {"generators": ["x1", "x2"], "relations": ["[x1,[x1,x2]]"],
                       "weights": [1, 1]}
    lie-structure     {"basis": ["e1", "e2", "e3"], "brackets": {"e1,e2": "e3"}}
    threeform         {"n": 3, "form": [[1, 2, 3, "1"]], "alexander": "t1 - 1"}

Scalars are written as ``"num/den"`` strings; integers are accepted on input.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import jsonschema

from ..cdga.algebra import validate
from ..cdga.build import semifree
from ..cdga.liealg import LieStructure
from ..exprparse import ExpressionError, parse_fraction
from ..lie.presentation import LiePresentation
from ..polyalg import parse_poly
from ..threemfd import ThreeForm

SCHEMA_VERSION = 1
KINDS = ("cdga-table", "cdga-semifree", "lie-presentation", "lie-structure", "threeform")

_scalar = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_literal = {"anyOf": [{"type": "string"}, {"type": "integer"}]}
_name = {"type": "string", "pattern": r"^[A-Za-z_][A-Za-z_0-9]*$"}
_basis_name = {"type": "string", "pattern": r"^(1|[A-Za-z_][A-Za-z_0-9]*)$"}

_BODIES = {
    "cdga-table": {
        "type": "object",
        "required": ["basis"],
        "additionalProperties": False,
        "properties": {
            "basis": {
                "type": "object",
                "propertyNames": {"pattern": r"^(0|[1-9][0-9]*)$"},
                "additionalProperties": {"type": "array", "items": _basis_name},
            },
            "products": {"type": "object", "additionalProperties": _literal},
            "differential": {"type": "object", "additionalProperties": _literal},
        },
    },
    "cdga-semifree": {
        "type": "object",
        "required": ["generators"],
        "additionalProperties": False,
        "properties": {
            "generators": {"type": "array", "items": {
                "type": "object", "required": ["name", "degree"], "additionalProperties": False,
                "properties": {"name": _name, "degree": {"type": "integer", "minimum": 1}}}},
            "differential": {"type": "object", "additionalProperties": _literal},
            "relations": {"type": "array", "items": {"type": "string"}},
        },
    },
    "lie-presentation": {
        "type": "object",
        "required": ["generators"],
        "additionalProperties": False,
        "properties": {
            "generators": {"type": "array", "items": _name},
            "relations": {"type": "array", "items": {"type": "string"}},
            "weights": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        },
    },
    "lie-structure": {
        "type": "object",
        "required": ["basis"],
        "additionalProperties": False,
        "properties": {
            "basis": {"type": "array", "items": _name},
            "brackets": {"type": "object", "propertyNames": {"pattern": r"^\s*\w+\s*,\s*\w+\s*$"},
                         "additionalProperties": _literal},
        },
    },
    "threeform": {
        "type": "object",
        "required": ["n"],
        "additionalProperties": False,
        "properties": {
            "n": {"type": "integer", "minimum": 0},
            "form": {"type": "array", "items": {
                "type": "array", "minItems": 4, "maxItems": 4,
                "prefixItems": [{"type": "integer", "minimum": 1}] * 3 + [_scalar],
                "items": False}},
            "alexander": {"type": "string"},
        },
    },
}

SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "body"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "cap": {"type": "integer", "minimum": 0},
        "body": {"type": "object"},
    },
}


class ModelFileError(Exception):
    exit_code = 1


class ModelSyntaxError(ModelFileError):
    exit_code = 3


class ModelSchemaError(ModelFileError):
    exit_code = 4


class ModelEngineError(ModelFileError):
    exit_code = 1


@dataclass
class ModelFile:
    kind: str
    body: dict
    name: str = ""
    description: str = ""
    cap: Optional[int] = None
    source: str = field(default="", compare=False)

    def to_tree(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "kind": self.kind}
        if self.name:
            out["name"] = self.name
        if self.description:
            out["description"] = self.description
        if self.cap is not None:
            out["cap"] = self.cap
        out["body"] = self.body
        return out


def _path(err) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def _check(tree, schema, prefix, where):
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(tree), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ModelSchemaError(f"{where}: schema violation at {prefix}{_path(e)}: {e.message}")


def _normalize(kind: str, body: dict) -> dict:
    """Canonical spelling of scalars so that serialization round-trips."""
    if kind == "threeform" and "form" in body:
        body = dict(body)
        body["form"] = [[int(i), int(j), int(k), _scalar_text(parse_fraction(c))]
                        for i, j, k, c in body["form"]]
    return body


def _scalar_text(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def load_tree(tree, where: str = "<input>") -> ModelFile:
    _check(tree, SCHEMA, "", where)
    kind = tree["kind"]
    body = tree["body"]
    _check(body, _BODIES[kind], "body/", where)
    return ModelFile(kind, _normalize(kind, body), tree.get("name", ""), tree.get("description", ""),
                     tree.get("cap"), where)


def loads(text: str, where: str = "<input>") -> ModelFile:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return load_tree(tree, where)


def read_model(path: str) -> ModelFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelSyntaxError(f"{path}: cannot read file: {exc.strerror}") from None
    return loads(text, path)


def dumps(model: ModelFile) -> str:
    return json.dumps(model.to_tree(), indent=2, ensure_ascii=False) + "\n"


@dataclass
class ThreeFormModel:
    form: ThreeForm
    alexander: object = None  # MultiPoly or None


def build(model: ModelFile):
    """The engine object a model file describes; failures become ModelEngineError."""
    b = model.body
    try:
        if model.kind == "cdga-table":
            raw = {"basis": b["basis"], "products": b.get("products", {}),
                   "differential": b.get("differential", {}), "name": model.name}
            if model.cap is not None:
                raw["top_degree"] = model.cap
            return validate(raw)
        if model.kind == "cdga-semifree":
            gens = [(g["name"], g["degree"]) for g in b["generators"]]
            return semifree(gens, b.get("differential", {}), b.get("relations", []),
                            cap=model.cap, name=model.name)
        if model.kind == "lie-presentation":
            return LiePresentation.parse(b["generators"], b.get("relations", []), b.get("weights"))
        if model.kind == "lie-structure":
            return LieStructure.from_literals(b["basis"], b.get("brackets", {}))
        form = ThreeForm.from_rows(b["n"], b.get("form", []))
        alex = b.get("alexander")
        poly = parse_poly(alex, nvars=b["n"]) if alex is not None else None
        return ThreeFormModel(form, poly)
    except ExpressionError as exc:
        raise ModelSyntaxError(f"{model.source or model.name}: {exc}") from None
    except (ValueError, KeyError, ArithmeticError) as exc:
        msg = exc.args[0] if exc.args else exc
        raise ModelEngineError(f"{model.source or model.name}: {type(exc).__name__}: {msg}") from None


def parse_model(path: str):
    model = read_model(path)
    return model, build(model)
