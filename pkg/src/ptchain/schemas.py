"""JSON schemas for the reports written by the command-line tool."""

from __future__ import annotations

import jsonschema

EXACT = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
EXACT_LIST = {"type": "array", "items": EXACT}
NUMBER_LIST = {"type": "array", "items": {"type": "number"}}
VERDICT = {"enum": ["RealSimple", "RealDegenerate", "Complex"]}

_conversion = {
    "type": "object",
    "required": ["field", "input", "value", "error"],
    "properties": {
        "field": {"type": "string"},
        "input": {"type": "string"},
        "value": EXACT,
        "error": EXACT,
    },
}

_model = {
    "type": "object",
    "required": ["family", "N"],
    "properties": {
        "family": {"enum": ["Symmetrized", "GeneralPT", "GeneralTridiagonal"]},
        "N": {"type": "integer", "minimum": 2},
        "couplings": EXACT_LIST,
        "squared": {"type": "boolean"},
        "squaredCentralFirst": EXACT_LIST,
        "diag": EXACT_LIST,
        "super": EXACT_LIST,
        "sub": EXACT_LIST,
    },
}


def _report(command: str, required: list, properties: dict) -> dict:
    return {
        "type": "object",
        "required": ["tool", "version", "command", *required],
        "properties": {
            "tool": {"const": "ptchain"},
            "version": {"type": "string"},
            "command": {"const": command},
            "conversions": {"type": "array", "items": _conversion},
            **properties,
        },
    }


_poly = {
    "type": "object",
    "required": ["variable", "coefficients"],
    "properties": {"variable": {"type": "string"}, "coefficients": EXACT_LIST},
}

_root = {
    "type": "object",
    "required": ["lo", "hi", "exact", "approx"],
    "properties": {
        "lo": EXACT,
        "hi": EXACT,
        "exact": {"anyOf": [EXACT, {"type": "null"}]},
        "approx": {"type": "number"},
    },
}

SCHEMAS = {
    "spectrum": _report(
        "spectrum",
        ["model", "energies", "charPolyE", "class"],
        {
            "model": _model,
            "energies": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["re", "im"],
                    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
                },
            },
            "charPolyE": _poly,
            "sPoly": _poly,
            "class": VERDICT,
        },
    ),
    "classify": _report(
        "classify",
        ["model", "class", "realRootCount", "certificate"],
        {
            "model": _model,
            "class": VERDICT,
            "realRootCount": {"type": "integer", "minimum": 0},
            "certificate": _poly,
        },
    ),
    "boundary": _report(
        "boundary",
        ["N", "family", "axes", "window", "resolution", "tolerance", "points", "empty"],
        {
            "N": {"type": "integer"},
            "family": {"type": "string"},
            "axes": {"type": "array", "items": {"type": "string"}},
            "fixed": {"type": "object", "additionalProperties": EXACT},
            "window": {"type": "array", "items": {"type": "array", "items": EXACT}},
            "resolution": {"type": "integer"},
            "tolerance": {"type": "number"},
            "direction": {"enum": ["rows", "columns", "both"]},
            "points": {"type": "array", "items": NUMBER_LIST},
            "empty": {"type": "boolean"},
            "diagnostic": {"type": ["string", "null"]},
        },
    ),
    "eep-verify": _report(
        "eep-verify",
        [
            "N",
            "squaredCouplings",
            "boundValue",
            "residuals",
            "degeneracyConfirmed",
            "boundIdentityHolds",
            "numericEigenvalueMaxModulus",
            "passed",
        ],
        {
            "N": {"type": "integer"},
            "halfDim": {"type": "integer"},
            "signChoices": {"type": "integer"},
            "squaredCouplings": EXACT_LIST,
            "boundValue": EXACT,
            "norm": EXACT,
            "residuals": EXACT_LIST,
            "degeneracyConfirmed": {"type": "boolean"},
            "boundIdentityHolds": {"type": "boolean"},
            "numericEigenvalueMaxModulus": {"type": "number"},
            "highPrecisionEigenvalueMaxModulus": {"type": ["number", "null"]},
            "method": {"enum": ["symbolic", "recurrence"]},
            "failures": {"type": "array", "items": {"type": "string"}},
            "passed": {"type": "boolean"},
        },
    ),
    "eep-eliminate": _report(
        "eep-eliminate",
        ["N", "variable", "polynomial", "realRoots", "branches", "solutions", "passed"],
        {
            "N": {"type": "integer"},
            "variable": {"type": "string"},
            "polynomial": _poly,
            "realRoots": {"type": "array", "items": _root},
            "branches": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["values", "exact", "spurious", "reason"],
                    "properties": {
                        "values": {"type": "object", "additionalProperties": {"type": "string"}},
                        "exact": {"type": "boolean"},
                        "spurious": {"type": "boolean"},
                        "reason": {"type": "string"},
                    },
                },
            },
            "solutions": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "expected": EXACT_LIST,
            "steps": {"type": "array", "items": {"type": "string"}},
            "passed": {"type": "boolean"},
            "message": {"type": "string"},
            "crossCheck": {"type": "array"},
        },
    ),
    "metric": _report(
        "metric",
        ["model", "energies", "theta", "weights", "residual", "minEigenvalue", "symmetric"],
        {
            "model": _model,
            "energies": NUMBER_LIST,
            "theta": {"type": "array", "items": NUMBER_LIST},
            "weights": NUMBER_LIST,
            "weightsConvention": {"enum": ["unit-default", "user"]},
            "residual": {"type": "number"},
            "thetaNorm": {"type": "number"},
            "minEigenvalue": {"type": "number"},
            "symmetric": {"type": "boolean"},
            "conditionIndicators": NUMBER_LIST,
        },
    ),
    "bound-check": _report(
        "bound-check",
        ["model", "norm", "bound", "inside"],
        {"model": _model, "norm": EXACT, "bound": EXACT, "inside": {"type": "boolean"}},
    ),
}

BOUNDARY_METADATA = {
    "type": "object",
    "required": ["tool", "version", "N", "axes", "window", "resolution", "tolerance", "fixed", "columns"],
    "properties": {
        "tool": {"const": "ptchain"},
        "version": {"type": "string"},
        "N": {"type": "integer"},
        "family": {"type": "string"},
        "axes": {"type": "array", "items": {"type": "string"}},
        "window": {"type": "array"},
        "resolution": {"type": "integer"},
        "tolerance": {"type": "number"},
        "fixed": {"type": "object"},
        "direction": {"type": "string"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {"type": "integer"},
        "empty": {"type": "boolean"},
        "diagnostic": {"type": ["string", "null"]},
    },
}


def validate_report(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` unless ``report`` matches its command's schema."""
    jsonschema.validate(report, SCHEMAS[report["command"]])


def validate_boundary_metadata(meta: dict) -> None:
    jsonschema.validate(meta, BOUNDARY_METADATA)
