"""Exact membership in the reality domain, closed-form spectra and boundary tracing."""

from __future__ import annotations

import cmath
import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chain import ChainSpec, Family, TridiagonalMatrix, _charpoly_coeffs, _reduce_to_s
from .errors import ConsistencyError, UsageError
from .exactpoly import UniPoly, as_rational, int_squarefree, int_sturm_sequence, int_variations

__all__ = [
    "Verdict",
    "MembershipVerdict",
    "ClosedForm",
    "BoundaryCurve",
    "classify_point",
    "classify_matrix",
    "closed_form_check",
    "trace_boundary",
]

DEFAULT_TOLERANCE = 1e-9


class Verdict(str, enum.Enum):
    REAL_SIMPLE = "RealSimple"
    REAL_DEGENERATE = "RealDegenerate"
    COMPLEX = "Complex"


@dataclass(frozen=True)
class MembershipVerdict:
    """Exact classification of a coupling point.

    ``real_root_count`` counts distinct real roots of the squarefree
    certificate: roots in ``[0, inf)`` of the s-polynomial for the
    Symmetrized family, all real roots of the E-polynomial otherwise.
    """

    verdict: Verdict
    real_root_count: int
    certificate: UniPoly

    @property
    def in_closure(self) -> bool:
        return self.verdict is not Verdict.COMPLEX

    @property
    def is_simple(self) -> bool:
        return self.verdict is Verdict.REAL_SIMPLE


def _scaled_charpoly(diag, products):
    """Integer characteristic polynomial of the rescaled matrix ``L*H``.

    With ``L`` the lcm of all denominators, ``L*d_k`` and ``L**2 * p_k`` are
    integers and ``det(L*H - E') = L**N det(H - E'/L)``.  Roots scale by the
    positive factor ``L``, so reality, multiplicities and signs carry over.
    """
    L = 1
    for x in (*diag, *products):
        L = L * x.denominator // math.gcd(L, x.denominator)
    idiag = [int(d * L) for d in diag]
    iprod = [int(p * L * L) for p in products]
    return _charpoly_coeffs(idiag, iprod, 0, 1), L


def _unscale(coeffs: list, L: int, step: int, var: str) -> UniPoly:
    """Undo ``x' = L**step * x`` on a monic polynomial."""
    d = len(coeffs) - 1
    return UniPoly([Fraction(c, L ** (step * (d - j))) for j, c in enumerate(coeffs)], var)


def _verdict_from_counts(count: int, sf_degree: int, degree: int, extra_degeneracy: bool) -> Verdict:
    if count < sf_degree:
        return Verdict.COMPLEX
    if sf_degree == degree and not extra_degeneracy:
        return Verdict.REAL_SIMPLE
    return Verdict.REAL_DEGENERATE


def _classify_s_int(s_int: list) -> tuple[Verdict, int]:
    zero_root = s_int[0] == 0
    seq = int_sturm_sequence(s_int)
    if len(seq[-1]) > 1:
        seq = int_sturm_sequence(int_squarefree(s_int, seq))
    sf_degree = len(seq[0]) - 1
    count = int_variations(seq, 0) - int_variations(seq, math.inf) + zero_root
    return _verdict_from_counts(count, sf_degree, len(s_int) - 1, zero_root), count


def _classify_e_int(e_int: list) -> tuple[Verdict, int]:
    seq = int_sturm_sequence(e_int)
    if len(seq[-1]) > 1:
        seq = int_sturm_sequence(int_squarefree(e_int, seq))
    sf_degree = len(seq[0]) - 1
    count = int_variations(seq, -math.inf) - int_variations(seq, math.inf)
    return _verdict_from_counts(count, sf_degree, len(e_int) - 1, False), count


def classify_point(spec: ChainSpec) -> MembershipVerdict:
    """Classify ``spec`` as RealSimple, RealDegenerate or Complex, exactly.

    The Symmetrized family is decided on the s-polynomial: every root must be
    real and nonnegative; a repeated root or a root at ``s = 0`` makes the
    point degenerate.  The odd-N level ``E = 0`` is factored out beforehand
    and does not count as a degeneracy by itself.  Other families are
    decided on the E-polynomial with the same Sturm machinery.
    """
    coeffs, L = _scaled_charpoly(spec.diagonal(), spec.products())
    if spec.family is Family.SYMMETRIZED:
        _, s_int = _reduce_to_s(coeffs, spec.N)
        verdict, count = _classify_s_int(s_int)
        return MembershipVerdict(verdict, count, _unscale(s_int, L, 2, "s"))
    return _classify_e(coeffs, L)


def _classify_e(coeffs: list, L: int) -> MembershipVerdict:
    verdict, count = _classify_e_int(coeffs)
    sign = 1 if coeffs[-1] > 0 else -1
    monic = _unscale([sign * c for c in coeffs], L, 1, "E")
    return MembershipVerdict(verdict, count, monic * sign)


def classify_matrix(T: TridiagonalMatrix) -> MembershipVerdict:
    """E-polynomial classification of an explicit exact tridiagonal matrix."""
    coeffs, L = _scaled_charpoly(T.diag, T.products())
    return _classify_e(coeffs, L)


# ---------------------------------------------------------------------------
# Closed forms for N <= 5
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    """Explicit spectrum and reality conditions for small Symmetrized chains.

    ``conditions`` maps a readable inequality to its slack (left minus right
    side); the point is real iff every slack is nonnegative.  Slacks are exact
    when the inputs are rationals.
    """

    N: int
    energies: list[complex]
    conditions: dict
    real: bool
    degenerate: bool

    @property
    def verdict(self) -> Verdict:
        if not self.real:
            return Verdict.COMPLEX
        return Verdict.REAL_DEGENERATE if self.degenerate else Verdict.REAL_SIMPLE


def _num(x):
    if isinstance(x, float):
        return x
    return as_rational(x)


def closed_form_check(N: int, squares: Sequence) -> ClosedForm:
    """Closed-form energies and reality conditions for ``N`` in 2..5.

    ``squares`` are the central-first squared couplings ``(A, B)``.  Energies
    are evaluated in complex floating point; conditions in the arithmetic of
    the inputs.
    """
    if N not in (2, 3, 4, 5):
        raise UsageError(f"closed forms exist for N in 2..5 only, got N={N}")
    sq = [_num(x) for x in squares]
    if len(sq) != N // 2:
        raise UsageError(f"N={N} needs {N // 2} squared couplings, got {len(sq)}")
    csqrt = lambda x: cmath.sqrt(complex(float(x)))
    if N == 2:
        (A,) = sq
        slack = 1 - A
        r = csqrt(slack)
        return ClosedForm(N, [-r, r], {"1 - A >= 0": slack}, slack >= 0, slack == 0)
    if N == 3:
        (A,) = sq
        slack = 4 - 2 * A
        r = csqrt(slack)
        return ClosedForm(N, [-r, 0j, r], {"4 - 2A >= 0": slack}, slack >= 0, slack == 0)
    if N == 4:
        A, B = sq
        radicand = 64 - 64 * B + 16 * A + 4 * B * A + A * A
        total = 10 - A - 2 * B
        product = 9 + 6 * B - 9 * A + B * B
        root = csqrt(radicand)
        mid = 5 - float(B) - float(A) / 2
        s_plus, s_minus = mid + root / 2, mid - root / 2
        energies = []
        for s in (s_plus, s_minus):
            e = cmath.sqrt(s)
            energies += [-e, e]
        conditions = {
            "64 - 64B + 16A + 4AB + A^2 >= 0": radicand,
            "10 - A - 2B >= 0": total,
            "9 + 6B - 9A + B^2 >= 0": product,
        }
        real = radicand >= 0 and total >= 0 and product >= 0
        return ClosedForm(N, energies, conditions, real, real and (radicand == 0 or product == 0))
    A, B = sq
    simplex = 10 - A - B
    parabola = 36 + 12 * A + A * A - 36 * B
    hyperbola = (8 + B) ** 2 - (32 - 2 * B) * A
    inner = csqrt(parabola)
    base = 10 - float(A) - float(B)
    e1, e2 = cmath.sqrt(base - inner), cmath.sqrt(base + inner)
    conditions = {
        "10 >= A + B": simplex,
        "36 + 12A + A^2 >= 36B": parabola,
        "(8 + B)^2 >= (32 - 2B)A": hyperbola,
    }
    real = simplex >= 0 and parabola >= 0 and hyperbola >= 0
    degenerate = real and (parabola == 0 or hyperbola == 0)
    return ClosedForm(N, [-e2, -e1, 0j, e1, e2], conditions, real, degenerate)


# ---------------------------------------------------------------------------
# Boundary tracing
# ---------------------------------------------------------------------------


@dataclass
class BoundaryCurve:
    """Boundary points of a planar (or linear) slice of the domain.

    ``points`` are in coupling coordinates.  ``brackets[i]`` holds the exact
    scan-space probes ``(real_side, complex_side)`` that straddle
    ``points[i]``; for the PT families the scan coordinates are squared
    couplings.
    """

    N: int
    family: str
    axes: tuple
    fixed: dict
    window: tuple
    resolution: int
    tolerance: float
    direction: str
    points: list = field(default_factory=list)
    brackets: list = field(default_factory=list)
    empty: bool = False
    diagnostic: str | None = None


@dataclass(frozen=True)
class _Scanner:
    """Picklable mapping from scan coordinates to a ChainSpec."""

    N: int
    family: Family
    axes: tuple          # parameter keys varied by the scan
    base: tuple          # ((key, value), ...) for everything else
    squared: bool
    diag: tuple = ()

    def spec_at(self, coords: Sequence[Fraction]) -> ChainSpec:
        values = dict(self.base)
        values.update(zip(self.axes, coords))
        if self.family is Family.GENERAL_TRIDIAGONAL:
            sup = [values.get(f"a{k}", Fraction(0)) for k in range(self.N - 1)]
            sub = [values.get(f"b{k}", Fraction(0)) for k in range(self.N - 1)]
            return ChainSpec.general_tridiagonal(self.diag, sup, sub)
        if self.family is Family.GENERAL_PT:
            return ChainSpec.general_pt([values[f"a{k}"] for k in range(self.N - 1)], squared=True)
        names = _sym_letters(self.N)
        return ChainSpec.from_squares(self.N, [values[n] for n in names])

    def is_real(self, coords) -> bool:
        return classify_point(self.spec_at(coords)).in_closure

    def report(self, coords) -> tuple:
        if self.squared:
            return tuple(math.sqrt(float(c)) for c in coords)
        return tuple(float(c) for c in coords)


def _sym_letters(N: int) -> tuple:
    return tuple("abcdefghijklmnopqrstuvwxyz"[: N // 2]) if N // 2 <= 26 else tuple(
        f"a{j}" for j in range(N // 2)
    )


def _axis_keys(N: int, family: Family) -> tuple:
    if family is Family.SYMMETRIZED:
        return _sym_letters(N)
    if family is Family.GENERAL_PT:
        return tuple(f"a{k}" for k in range(N - 1))
    return tuple(f"a{k}" for k in range(N - 1)) + tuple(f"b{k}" for k in range(N - 1))


def _distance(scanner: _Scanner, p, q) -> float:
    return math.dist(scanner.report(p), scanner.report(q))


def _bisect(scanner: _Scanner, inside, outside, tol: float):
    while _distance(scanner, inside, outside) > tol:
        mid = tuple((x + y) / 2 for x, y in zip(inside, outside))
        if scanner.is_real(mid):
            inside = mid
        else:
            outside = mid
    return inside, outside


def _scan_ray(job):
    scanner, start, stop, samples, tol = job
    probes = [
        tuple(s + (e - s) * Fraction(i, samples) for s, e in zip(start, stop))
        for i in range(samples + 1)
    ]
    flags = [scanner.is_real(p) for p in probes]
    found = []
    for i in range(samples):
        if flags[i] == flags[i + 1]:
            continue
        inside, outside = (probes[i], probes[i + 1]) if flags[i] else (probes[i + 1], probes[i])
        inside, outside = _bisect(scanner, inside, outside, tol)
        if scanner.is_real(outside) or not scanner.is_real(inside):
            raise ConsistencyError("boundary bracket does not straddle a verdict change")
        a, b = scanner.report(inside), scanner.report(outside)
        found.append((tuple((x + y) / 2 for x, y in zip(a, b)), (inside, outside)))
    return flags, found


def _workers(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("PTCHAIN_THREADS")
    return max(1, int(env)) if env else 1


def trace_boundary(
    N: int,
    axes: Sequence[str],
    window: Sequence[Sequence],
    resolution: int,
    fixed: dict | None = None,
    *,
    family: Family | str = Family.SYMMETRIZED,
    diag: Sequence | None = None,
    tol: float = DEFAULT_TOLERANCE,
    direction: str = "rows",
    workers: int | None = None,
) -> BoundaryCurve:
    """Locate boundary points of the reality domain on a planar slice.

    ``axes`` name the varied couplings: central-first letters ``a, b, ...``
    for the Symmetrized family, ``a0, a1, ...`` for GeneralPT, and
    ``a<k>``/``b<k>`` (super/sub diagonal entry ``k``) for GeneralTridiagonal,
    which also needs ``diag``.  ``window`` gives one ``(lo, hi)`` pair per
    axis in coupling units; ``fixed`` sets the remaining couplings (lowercase
    key: coupling value, uppercase key: its square).

    Rays are grid lines of the window: ``resolution + 1`` rows (constant
    second coordinate), columns, or both.  Each ray carries
    ``resolution + 1`` exact probes.  For the PT families the grid is uniform
    in the squared couplings, which are what the exact classifier consumes.
    Wherever adjacent probes disagree, the pair is bisected on exact dyadic
    rationals until the bracket is shorter than ``tol`` in coupling units.
    """
    family = Family(family)
    if resolution < 2:
        raise UsageError("resolution must be at least 2")
    if direction not in ("rows", "columns", "both"):
        raise UsageError(f"direction must be rows, columns or both, got {direction!r}")
    axes = tuple(axes)
    if len(axes) not in (1, 2):
        raise UsageError("trace_boundary scans one or two axes")
    if len(window) != len(axes):
        raise UsageError("window needs one (lo, hi) pair per axis")
    keys = _axis_keys(N, family)
    for ax in axes:
        if ax not in keys:
            raise UsageError(f"unknown axis {ax!r}; expected one of {keys}")
    squared = family is not Family.GENERAL_TRIDIAGONAL
    if family is Family.GENERAL_TRIDIAGONAL:
        if diag is None or len(diag) != N:
            raise UsageError(f"GeneralTridiagonal tracing needs a diagonal of length {N}")
        diag = tuple(as_rational(d) for d in diag)
    else:
        diag = ()

    win = []
    for lo, hi in window:
        lo, hi = as_rational(lo), as_rational(hi)
        if hi <= lo:
            raise UsageError("window intervals need lo < hi")
        if squared and lo < 0:
            raise UsageError("PT-family windows must lie in the nonnegative quadrant")
        win.append((lo * lo, hi * hi) if squared else (lo, hi))

    base = {}
    for k, v in (fixed or {}).items():
        lower = k.lower() if squared else k
        if lower not in keys or lower in axes:
            raise UsageError(f"cannot fix {k!r}")
        v = as_rational(v)
        if squared:
            base[lower] = v if k != lower else v * v
        else:
            base[lower] = v
    for k in keys:
        if k not in axes and k not in base:
            base[k] = Fraction(0)
    scanner = _Scanner(N, family, axes, tuple(sorted(base.items())), squared, diag)

    jobs = []
    if len(axes) == 1:
        (lo, hi), = win
        jobs.append((scanner, (lo,), (hi,), resolution, tol))
    else:
        (x0, x1), (y0, y1) = win
        if direction in ("rows", "both"):
            for k in range(resolution + 1):
                y = y0 + (y1 - y0) * Fraction(k, resolution)
                jobs.append((scanner, (x0, y), (x1, y), resolution, tol))
        if direction in ("columns", "both"):
            for k in range(resolution + 1):
                x = x0 + (x1 - x0) * Fraction(k, resolution)
                jobs.append((scanner, (x, y0), (x, y1), resolution, tol))

    n_workers = _workers(workers)
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_scan_ray, jobs, chunksize=max(1, len(jobs) // (4 * n_workers))))
    else:
        results = [_scan_ray(job) for job in jobs]

    curve = BoundaryCurve(
        N=N,
        family=family.value,
        axes=axes,
        fixed={k: str(v) for k, v in scanner.base},
        window=tuple((str(lo), str(hi)) for lo, hi in window),
        resolution=resolution,
        tolerance=tol,
        direction=direction,
    )
    any_real = any_complex = False
    for flags, found in results:
        any_real |= any(flags)
        any_complex |= not all(flags)
        for point, bracket in found:
            curve.points.append(point)
            curve.brackets.append(bracket)
    if not curve.points:
        curve.empty = True
        if any_real and not any_complex:
            curve.diagnostic = "window lies inside the reality domain"
        elif any_complex and not any_real:
            curve.diagnostic = "window lies outside the reality domain"
        else:
            curve.diagnostic = "no verdict change between adjacent probes"
    return curve
