"""JSON documents for structures, pairs, reports, decompositions and triples.

Rationals are strings "p/q", Gaussian rationals "p/q+r/si", matrices
row-major arrays of such strings. Shapes are checked with JSON Schema;
anything malformed raises :class:`ParseError`.
"""
from __future__ import annotations

import json

import jsonschema

from . import linalg as la
from .exact import Gaussian, format_gaussian, format_rational, parse_scalar
from .fstructures import FQuatTriple, GroupElement
from .models import FactorSpec
from .pencil import Pair, SheafReport
from .quaternion import format_quaternion, parse_quaternion
from .structures import HypercomplexStructure
from .subspace import Subspace, span


class ParseError(ValueError):
    """Input does not match the expected document schema."""


_SCALAR = {"type": ["string", "integer"]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _SCALAR}}
_QUAT = {"type": "string", "pattern": "^[^,]+,[^,]+,[^,]+,[^,]+$"}

STRUCTURE_SCHEMA = {
    "type": "object",
    "required": ["dim", "I", "J", "K"],
    "properties": {"dim": {"type": "integer", "minimum": 4}, "I": _MATRIX, "J": _MATRIX, "K": _MATRIX},
}
PAIR_SCHEMA = {
    "type": "object",
    "required": ["structure", "subspace"],
    "properties": {"structure": STRUCTURE_SCHEMA, "subspace": _MATRIX},
}
TRIPLE_SCHEMA = {
    "type": "object",
    "required": ["structure", "u", "v"],
    "properties": {"structure": STRUCTURE_SCHEMA, "u": _MATRIX, "v": _MATRIX},
}
REPORT_SCHEMA = {
    "type": "object",
    "required": ["cr", "cocr", "minus", "plus"],
    "properties": {
        "cr": {"type": "boolean"},
        "cocr": {"type": "boolean"},
        "minus": {"type": "array", "items": {"type": "integer"}},
        "plus": {
            "oneOf": [
                {"type": "array", "items": {"type": "integer"}},
                {
                    "type": "object",
                    "required": ["torsion"],
                    "properties": {"torsion": {"type": "array", "items": {"type": "string"}}},
                },
            ]
        },
    },
}
DECOMPOSITION_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["tag", "k"],
        "properties": {"tag": {"enum": ["CoV", "CoVp", "CrV", "CrVp"]}, "k": {"type": "integer"}},
    },
}
GROUP_ELEMENT_SCHEMA = {
    "type": "object",
    "required": ["A", "q", "B"],
    "properties": {
        "A": _MATRIX,
        "q": _QUAT,
        "B": {"type": "array", "items": {"type": "array", "items": _QUAT}},
    },
}
CONJUGATION_SCHEMA = {
    "type": "object",
    "required": ["structure", "tau1", "tau2"],
    "properties": {"structure": STRUCTURE_SCHEMA, "tau1": _MATRIX, "tau2": _MATRIX},
}


def validate(doc, schema, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise ParseError(f"{what}: {exc.message}") from None


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def dumps(doc) -> str:
    """Canonical text: sorted keys, fixed separators, so output is byte-stable."""
    return json.dumps(doc, sort_keys=True, separators=(", ", ": "))


# ------------------------------------------------------------ scalars


def scalar(s, real: bool = True):
    try:
        x = parse_scalar(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad scalar {s!r}") from None
    if real and isinstance(x, Gaussian):
        if x.im:
            raise ParseError(f"expected a rational, got {s!r}")
        return x.re
    return x


def format_scalar(x) -> str:
    return format_gaussian(x) if isinstance(x, Gaussian) else format_rational(x)


def matrix_to_json(m) -> list:
    return [[format_scalar(x) for x in row] for row in m]


def matrix_from_json(rows, ncols: int | None = None, real: bool = True) -> la.Matrix:
    out = tuple(tuple(scalar(x, real) for x in row) for row in rows)
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise ParseError("ragged matrix")
    if ncols is not None and out and widths != {ncols}:
        raise ParseError(f"expected {ncols} columns, got {widths.pop()}")
    return out


# --------------------------------------------------------- structures


def structure_to_json(s: HypercomplexStructure) -> dict:
    return {"dim": s.dim, "I": matrix_to_json(s.I), "J": matrix_to_json(s.J), "K": matrix_to_json(s.K)}


def structure_from_json(d) -> HypercomplexStructure:
    validate(d, STRUCTURE_SCHEMA, "structure")
    n = d["dim"]
    gens = [matrix_from_json(d[x], n) for x in "IJK"]
    if any(len(g) != n for g in gens):
        raise ParseError(f"structure matrices must be {n}x{n}")
    return HypercomplexStructure(n, *gens)


def subspace_to_json(u: Subspace) -> list:
    return matrix_to_json(u.basis)


def subspace_from_json(rows, ambient: int) -> Subspace:
    return span(matrix_from_json(rows, ambient), ambient)


def pair_to_json(p: Pair) -> dict:
    return {"structure": structure_to_json(p.e), "subspace": subspace_to_json(p.u)}


def pair_from_json(d) -> Pair:
    validate(d, PAIR_SCHEMA, "pair")
    e = structure_from_json(d["structure"])
    return Pair(e, subspace_from_json(d["subspace"], e.dim))


def report_to_json(r: SheafReport) -> dict:
    return r.to_json()


def report_from_json(d) -> SheafReport:
    validate(d, REPORT_SCHEMA, "report")
    return SheafReport.from_json(d)


def decomposition_to_json(fs) -> list:
    return [f.to_json() for f in fs]


def decomposition_from_json(d) -> list[FactorSpec]:
    validate(d, DECOMPOSITION_SCHEMA, "decomposition")
    try:
        return sorted(FactorSpec(x["tag"], x["k"]) for x in d)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def triple_to_json(t: FQuatTriple) -> dict:
    return {"structure": structure_to_json(t.e), "u": subspace_to_json(t.u), "v": subspace_to_json(t.v)}


def triple_from_json(d) -> FQuatTriple:
    validate(d, TRIPLE_SCHEMA, "triple")
    e = structure_from_json(d["structure"])
    return FQuatTriple(e, subspace_from_json(d["u"], e.dim), subspace_from_json(d["v"], e.dim))


def group_element_to_json(g: GroupElement) -> dict:
    return {
        "A": matrix_to_json(g.a),
        "q": format_quaternion(g.q),
        "B": [[format_quaternion(x) for x in row] for row in g.b],
    }


def group_element_from_json(d) -> GroupElement:
    validate(d, GROUP_ELEMENT_SCHEMA, "group element")
    try:
        b = tuple(tuple(parse_quaternion(x) for x in row) for row in d["B"])
        q = parse_quaternion(d["q"])
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from None
    return GroupElement(matrix_from_json(d["A"]), q, b)


def conjugation_input_from_json(d):
    """(structure, tau1, tau2)."""
    validate(d, CONJUGATION_SCHEMA, "conjugation input")
    s = structure_from_json(d["structure"])
    return s, matrix_from_json(d["tau1"], s.dim), matrix_from_json(d["tau2"], s.dim)
