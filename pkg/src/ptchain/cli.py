"""Command-line front end: ``ptchain <command> [--config job.json] [flags]``.

Exit codes: 0 on success, 2 when ``eep-verify`` or ``eep-eliminate`` finds a
failed check, 1 on usage errors (bad flags, malformed config, refused
inputs).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .chain import ChainSpec, Family, char_poly, build_chain, secular_in_s
from .domain import classify_point, trace_boundary
from .eep import circumscribed_bound_check, eliminate_eep_system, n6_quartic_crosscheck, verify_eep
from .errors import NotDiagonalizableError, UsageError
from .exactpoly import UniPoly
from .metric import biorthogonal_decomposition, build_metric, eigen_numeric
from .schemas import validate_boundary_metadata, validate_report

COMMANDS = ("spectrum", "classify", "boundary", "eep-verify", "eep-eliminate", "metric", "bound-check")
VERIFY_COMMANDS = ("eep-verify", "eep-eliminate")
CSV_COMMANDS = ("boundary", "spectrum")

FAMILY_ALIASES = {
    "symmetrized": Family.SYMMETRIZED,
    "general-pt": Family.GENERAL_PT,
    "generalpt": Family.GENERAL_PT,
    "general-tridiagonal": Family.GENERAL_TRIDIAGONAL,
    "generaltridiagonal": Family.GENERAL_TRIDIAGONAL,
}


class _JsonFloat(float):
    """A JSON number with a fractional part; keeps its source text."""

    text: str

    def __new__(cls, text):
        obj = super().__new__(cls, text)
        obj.text = text
        return obj


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class JobConfig:
    command: str
    family: Family = Family.SYMMETRIZED
    N: int | None = None
    couplings: list | None = None
    squares: list | None = None
    diag: list | None = None
    super: list | None = None
    sub: list | None = None
    axes: list | None = None
    window: list | None = None
    resolution: int = 200
    fixed: dict = field(default_factory=dict)
    tol: float = 1e-9
    direction: str = "rows"
    weights: list | None = None
    method: str = "auto"
    out: str | None = None
    format: str = "json"
    inexact: bool = False
    conversions: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return str(Fraction(x))


def _exact(value, name: str, inexact: bool, conversions: list) -> Fraction:
    """Parse one exact input.  Binary floats need ``inexact``."""
    if isinstance(value, bool):
        raise UsageError(f"{name}: expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        text = value.text if isinstance(value, _JsonFloat) else repr(value)
        if not inexact:
            raise UsageError(f"{name}: floating value {text} needs --inexact (or write it as a string)")
        dyadic = Fraction(float(value))
        err = abs(Fraction(text) - dyadic)
        conversions.append({"field": name, "input": text, "value": _fmt(dyadic), "error": _fmt(err)})
        return dyadic
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{name}: cannot parse {value!r} as an exact rational") from None
    raise UsageError(f"{name}: expected a number, got {type(value).__name__}")


def _exact_list(values, name, inexact, conversions):
    if not isinstance(values, (list, tuple)):
        raise UsageError(f"{name}: expected a list")
    return [_exact(v, f"{name}[{i}]", inexact, conversions) for i, v in enumerate(values)]


def _window_pairs(values, name):
    flat = []
    for v in values:
        flat.extend(v if isinstance(v, (list, tuple)) else [v])
    if len(flat) not in (2, 4):
        raise UsageError(f"{name}: expected 2 or 4 bounds, got {len(flat)}")
    # windows are scan ranges, so decimals are read exactly from their text
    nums = [
        Fraction(v.text) if isinstance(v, _JsonFloat) else _exact(v, name, True, [])
        for v in flat
    ]
    return [nums[i : i + 2] for i in range(0, len(nums), 2)]


def build_parser() -> _Parser:
    parser = _Parser(prog="ptchain", description="PT-symmetric chain spectra, domains and EEPs.")
    # let negative rationals such as -1/2 through as values
    parser._negative_number_matcher = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+)$")
    parser.add_argument("--version", action="version", version=f"ptchain {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON job file; flags override its fields")
    parser.add_argument(
        "--family",
        help="symmetrized (default), general-pt or general-tridiagonal",
    )
    parser.add_argument("--N", type=int, dest="N")
    parser.add_argument(
        "--couplings",
        nargs="+",
        help="exact couplings in storage order (symmetrized: outermost first)",
    )
    parser.add_argument(
        "--squares",
        nargs="+",
        help="squared couplings; symmetrized: central first (A, B, ...)",
    )
    parser.add_argument("--diag", nargs="+")
    parser.add_argument("--super", nargs="+")
    parser.add_argument("--sub", nargs="+")
    parser.add_argument("--axes", nargs="+", help="boundary axes, e.g. a b")
    parser.add_argument("--window", nargs="+", help="x0 x1 [y0 y1] in coupling units")
    parser.add_argument("--resolution", type=int)
    parser.add_argument("--fixed", nargs="+", metavar="KEY=VALUE", help="pin other couplings")
    parser.add_argument("--tol", type=float, help="boundary bisection tolerance")
    parser.add_argument("--direction", choices=("rows", "columns", "both"))
    parser.add_argument("--weights", nargs="+", type=float, help="metric weights s_n > 0")
    parser.add_argument("--method", choices=("auto", "symbolic", "recurrence"))
    parser.add_argument("--inexact", action="store_true", default=None,
                        help="accept floating couplings, rounding to dyadic rationals")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"))
    return parser


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text, parse_float=_JsonFloat)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise UsageError("config: top level must be an object")
    return data


_FIELDS = {
    "command", "family", "N", "couplings", "squares", "diag", "super", "sub", "axes",
    "window", "resolution", "fixed", "tol", "direction", "weights", "method", "out",
    "format", "inexact",
}


def parse_config(raw: dict) -> JobConfig:
    """Validate a raw job dictionary; every offending field gets its own line."""
    errors = []
    unknown = sorted(set(raw) - _FIELDS)
    for k in unknown:
        errors.append(f"{k}: unknown field")
    command = raw.get("command")
    if command not in COMMANDS:
        errors.append(f"command: expected one of {', '.join(COMMANDS)}, got {command!r}")
        raise UsageError("\n".join(errors))
    job = JobConfig(command)
    job.inexact = bool(raw.get("inexact") or False)

    def attempt(name, fn):
        if name not in raw or raw[name] is None:
            return
        try:
            setattr(job, name, fn(raw[name]))
        except UsageError as exc:
            errors.append(str(exc) if str(exc).startswith(name) else f"{name}: {exc}")
        except (TypeError, ValueError) as exc:
            errors.append(f"{name}: {exc}")

    def family(v):
        key = str(v).lower()
        if key not in FAMILY_ALIASES:
            raise UsageError(f"unknown family {v!r}")
        return FAMILY_ALIASES[key]

    def positive_int(v):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise UsageError(f"expected a positive integer, got {v!r}")
        return v

    def choice(options):
        def check(v):
            if v not in options:
                raise UsageError(f"expected one of {', '.join(options)}, got {v!r}")
            return v
        return check

    def exact_list(name):
        return lambda v: _exact_list(v, name, job.inexact, job.conversions)

    def fixed(v):
        if isinstance(v, (list, tuple)):
            pairs = {}
            for item in v:
                if "=" not in str(item):
                    raise UsageError(f"expected KEY=VALUE, got {item!r}")
                k, val = str(item).split("=", 1)
                pairs[k.strip()] = val.strip()
            v = pairs
        if not isinstance(v, dict):
            raise UsageError("expected an object of coupling values")
        return {k: _exact(x, f"fixed.{k}", job.inexact, job.conversions) for k, x in v.items()}

    def floats(v):
        return [float(x) for x in v]

    def positive_float(v):
        x = float(v)
        if not x > 0:
            raise UsageError(f"must be positive, got {v!r}")
        return x

    attempt("family", family)
    attempt("N", positive_int)
    for name in ("couplings", "squares", "diag", "super", "sub"):
        attempt(name, exact_list(name))
    attempt("axes", lambda v: [str(x) for x in v])
    attempt("window", lambda v: _window_pairs(v, "window"))
    attempt("resolution", positive_int)
    attempt("fixed", fixed)
    attempt("tol", positive_float)
    attempt("direction", choice(("rows", "columns", "both")))
    attempt("weights", floats)
    attempt("method", choice(("auto", "symbolic", "recurrence")))
    attempt("out", str)
    attempt("format", choice(("json", "csv")))
    if job.format == "csv" and job.command not in CSV_COMMANDS:
        errors.append(f"format: csv output is available for {', '.join(CSV_COMMANDS)} only")
    if job.command in ("eep-verify", "eep-eliminate", "boundary") and job.N is None:
        errors.append("N: required")
    if errors:
        raise UsageError("\n".join(errors))
    return job


def _merge(args: argparse.Namespace) -> dict:
    raw = load_config(args.config) if args.config else {}
    if "command" in raw and raw["command"] != args.command:
        raise UsageError(f"command: config says {raw['command']!r} but {args.command!r} was given")
    raw["command"] = args.command
    for name in sorted(_FIELDS - {"command"}):
        value = getattr(args, name, None)
        if value is not None:
            raw[name] = value
    return raw


# ---------------------------------------------------------------------------
# Model construction and serialisation helpers
# ---------------------------------------------------------------------------


def make_spec(job: JobConfig) -> ChainSpec:
    fam = job.family
    if fam is Family.GENERAL_TRIDIAGONAL:
        if job.diag is None or job.super is None or job.sub is None:
            raise UsageError("general-tridiagonal needs --diag, --super and --sub")
        spec = ChainSpec.general_tridiagonal(job.diag, job.super, job.sub)
    else:
        if (job.couplings is None) == (job.squares is None):
            raise UsageError("give exactly one of couplings or squares")
        if fam is Family.GENERAL_PT:
            values = job.couplings if job.couplings is not None else job.squares
            spec = ChainSpec.general_pt(values, squared=job.squares is not None)
        else:
            if job.N is None:
                raise UsageError("N: required for the symmetrized family")
            if job.couplings is not None:
                spec = ChainSpec.symmetrized(job.N, job.couplings)
            else:
                spec = ChainSpec.from_squares(job.N, job.squares)
    if job.N is not None and spec.N != job.N:
        raise UsageError(f"N={job.N} does not match the {spec.N}-dimensional input")
    return spec


def _model_dict(spec: ChainSpec) -> dict:
    out = {"family": spec.family.value, "N": spec.N}
    if spec.family is Family.GENERAL_TRIDIAGONAL:
        out.update(diag=[_fmt(x) for x in spec.diag], super=[_fmt(x) for x in spec.super],
                   sub=[_fmt(x) for x in spec.sub])
        return out
    out["couplings"] = [_fmt(x) for x in spec.couplings]
    out["squared"] = spec.squared
    if spec.family is Family.SYMMETRIZED:
        out["squaredCentralFirst"] = [_fmt(x) for x in spec.central_first_squares()]
    return out


def _poly_dict(p: UniPoly) -> dict:
    return {"variable": p.var, "coefficients": [_fmt(c) for c in p.coeffs]}


def _envelope(job: JobConfig) -> dict:
    out = {"tool": "ptchain", "version": __version__, "command": job.command}
    if job.conversions:
        out["conversions"] = job.conversions
    return out


def _num(x) -> float:
    return float(f"{float(x):.12g}")


def _value_text(x) -> str:
    if isinstance(x, Fraction):
        return _fmt(x)
    return mpmath.nstr(x, 20)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _spectrum(job):
    spec = make_spec(job)
    energies = eigen_numeric(spec)
    verdict = classify_point(spec)
    report = _envelope(job)
    report["model"] = _model_dict(spec)
    report["energies"] = [{"re": float(e.real), "im": float(e.imag)} for e in energies]
    if spec.squared:
        # exact E-polynomial from the s-form: only squares are known
        if spec.family is Family.SYMMETRIZED:
            form = secular_in_s(spec)
            report["charPolyE"] = _poly_dict(form.char_poly_E)
            report["sPoly"] = _poly_dict(form.s_poly)
        else:
            report["charPolyE"] = _poly_dict(verdict.certificate)
    else:
        report["charPolyE"] = _poly_dict(char_poly(build_chain(spec)))
        if spec.family is Family.SYMMETRIZED:
            report["sPoly"] = _poly_dict(secular_in_s(spec).s_poly)
    report["class"] = verdict.verdict.value
    rows = [["index", "re", "im"]]
    rows += [[i, f"{e.real:.12g}", f"{e.imag:.12g}"] for i, e in enumerate(energies)]
    return 0, report, rows, None


def _classify(job):
    spec = make_spec(job)
    v = classify_point(spec)
    report = _envelope(job)
    report.update(
        model=_model_dict(spec),
        **{"class": v.verdict.value},
        realRootCount=v.real_root_count,
        certificate=_poly_dict(v.certificate),
    )
    return 0, report, None, None


def _boundary(job):
    if not job.axes or not job.window:
        raise UsageError("boundary needs --axes and --window")
    if len(job.window) != len(job.axes):
        raise UsageError("window: need one (lo, hi) pair per axis")
    curve = trace_boundary(
        job.N,
        job.axes,
        job.window,
        job.resolution,
        job.fixed,
        family=job.family,
        diag=job.diag,
        tol=job.tol,
        direction=job.direction,
    )
    meta = _envelope(job)
    meta.update(
        N=curve.N,
        family=curve.family,
        axes=list(curve.axes),
        fixed=dict(curve.fixed),
        window=[list(w) for w in curve.window],
        resolution=curve.resolution,
        tolerance=curve.tolerance,
        direction=curve.direction,
    )
    report = dict(meta)
    report["points"] = [[_num(x) for x in p] for p in curve.points]
    report["empty"] = curve.empty
    report["diagnostic"] = curve.diagnostic
    rows = [list(curve.axes)] + [[f"{float(x):.12g}" for x in p] for p in curve.points]
    sidecar = {k: v for k, v in meta.items() if k != "command"}
    sidecar.update(columns=list(curve.axes), rows=len(curve.points), empty=curve.empty,
                   diagnostic=curve.diagnostic)
    return 0, report, rows, sidecar


def _eep_verify(job):
    r = verify_eep(job.N, job.method)
    report = _envelope(job)
    report.update(
        N=r.N,
        halfDim=r.solution.half_dim,
        signChoices=r.solution.sign_choices,
        squaredCouplings=[_fmt(x) for x in r.solution.squared_couplings],
        boundValue=_fmt(r.solution.bound_value),
        norm=_fmt(r.norm),
        residuals=[_fmt(x) for x in r.insertion_zeros],
        degeneracyConfirmed=r.degeneracy_confirmed,
        boundIdentityHolds=r.bound_identity_holds,
        numericEigenvalueMaxModulus=r.numeric_eigenvalue_max_modulus,
        highPrecisionEigenvalueMaxModulus=r.high_precision_max_modulus,
        method=r.method,
        failures=r.failures,
        passed=r.passed,
    )
    return (0 if r.passed else 2), report, None, None


def _eep_eliminate(job):
    e = eliminate_eep_system(job.N)
    report = _envelope(job)
    report.update(
        N=e.N,
        variable=e.variable,
        polynomial=_poly_dict(e.polynomial),
        realRoots=[
            {"lo": _fmt(r.lo), "hi": _fmt(r.hi),
             "exact": None if r.exact is None else _fmt(r.exact), "approx": r.approx}
            for r in e.real_roots
        ],
        branches=[
            {
                "values": {k: _value_text(v) for k, v in b.values.items()},
                "exact": all(isinstance(v, Fraction) for v in b.values.values()),
                "spurious": b.spurious,
                "reason": b.reason,
            }
            for b in e.branches
        ],
        solutions=[[_value_text(x) for x in s] for s in e.solutions],
        expected=[_fmt(x) for x in e.expected],
        steps=e.steps,
        passed=e.passed,
        message=e.message,
    )
    if e.N == 6:
        report["crossCheck"] = n6_quartic_crosscheck()
    return (0 if e.passed else 2), report, None, None


def _metric(job):
    spec = make_spec(job)
    try:
        basis = biorthogonal_decomposition(spec)
    except NotDiagonalizableError as exc:
        raise UsageError(f"metric: {exc}") from None
    m = build_metric(basis, job.weights)
    report = _envelope(job)
    report.update(
        model=_model_dict(spec),
        energies=[float(x) for x in basis.energies],
        theta=m.theta.tolist(),
        weights=m.weights.tolist(),
        weightsConvention=m.weights_convention,
        residual=m.residual,
        thetaNorm=m.theta_norm,
        minEigenvalue=m.min_eigenvalue,
        symmetric=m.symmetric,
        conditionIndicators=basis.condition.tolist(),
    )
    return 0, report, None, None


def _bound_check(job):
    spec = make_spec(job)
    norm, bound, inside = circumscribed_bound_check(spec)
    report = _envelope(job)
    report.update(model=_model_dict(spec), norm=_fmt(norm), bound=_fmt(bound), inside=inside)
    return 0, report, None, None


_DISPATCH = {
    "spectrum": _spectrum,
    "classify": _classify,
    "boundary": _boundary,
    "eep-verify": _eep_verify,
    "eep-eliminate": _eep_eliminate,
    "metric": _metric,
    "bound-check": _bound_check,
}


def _sidecar_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".meta.json")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def run_job(job: JobConfig | dict, stdout=None) -> int:
    """Execute one job and write its output; returns the exit code.

    Usage errors propagate as :class:`UsageError`; :func:`main` maps them to
    exit code 1.
    """
    if isinstance(job, dict):
        job = parse_config(job)
    stdout = stdout or sys.stdout
    code, report, rows, sidecar = _DISPATCH[job.command](job)
    validate_report(report)
    if job.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        text = buf.getvalue()
    else:
        text = _dump_json(report)
    if job.out:
        Path(job.out).write_text(text)
        if job.format == "csv" and sidecar is not None:
            validate_boundary_metadata(sidecar)
            _sidecar_path(job.out).write_text(_dump_json(sidecar))
    else:
        stdout.write(text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        job = parse_config(_merge(args))
        return run_job(job)
    except UsageError as exc:
        for line in str(exc).splitlines() or ["usage error"]:
            print(f"ptchain: error: {line}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
