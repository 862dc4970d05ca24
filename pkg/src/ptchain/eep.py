"""Extreme exceptional points of the symmetrized chain.

Closed-form coordinates, exact verification by insertion, the circumscribed
bound, and small-N resultant elimination with spurious-root rejection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .chain import ChainSpec, Family, coupling_names, secular_from_squares, symbolic_secular_coeffs
from .errors import UsageError
from .exactpoly import MultiPoly, RealRoot, UniPoly, poly_gcd, real_roots, resultant, ring_eval
from .metric import eigen_numeric

__all__ = [
    "EEPSolution",
    "VerificationReport",
    "Branch",
    "Eliminant",
    "eep_closed_form",
    "bound_value",
    "verify_eep",
    "circumscribed_bound_check",
    "eliminate_eep_system",
    "high_precision_max_modulus",
    "ELIMINATION_RANGE",
    "SYMBOLIC_MAX_N",
]

# symbolic coefficients grow roughly sixfold per four dimensions; past this
# the same recurrence is evaluated over the integers at the point instead
SYMBOLIC_MAX_N = 20
ELIMINATION_RANGE = (4, 5, 6, 7)
NUMERIC_DPS = 80
# double precision cannot resolve an N-fold Jordan block much below
# eps**(1/N) * |H|; a 50-digit solve is added for moderate N
HIGH_PRECISION_DPS = 50
HIGH_PRECISION_MAX_N = 12


def _check_n(N) -> None:
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise UsageError(f"N must be an integer >= 2, got {N!r}")


def bound_value(N: int) -> Fraction:
    """Right-hand side of the circumscribed ellipsoid (even N) or sphere (odd N)."""
    _check_n(N)
    if N % 2 == 0:
        K = N // 2
        return Fraction(4 * K**3 - K, 3)
    M = N // 2
    return Fraction(2 * M**3 + 3 * M**2 + M, 3)


@dataclass(frozen=True)
class EEPSolution:
    """Squared couplings (central first) at the extreme exceptional point.

    The couplings themselves are ``+-sqrt`` of these, so there are
    ``2**half_dim`` sign choices, all with the same spectrum.
    """

    N: int
    half_dim: int
    squared_couplings: tuple[int, ...]
    bound_value: Fraction

    @property
    def sign_choices(self) -> int:
        return 2**self.half_dim

    @property
    def names(self) -> tuple[str, ...]:
        return coupling_names(self.half_dim)

    def spec(self) -> ChainSpec:
        return ChainSpec.from_squares(self.N, self.squared_couplings)


def eep_closed_form(N: int) -> EEPSolution:
    _check_n(N)
    h = N // 2
    if N % 2 == 0:
        sq = tuple(h * h - j * j for j in range(h))
    else:
        sq = tuple(h * (h + 1) - j * (j + 1) for j in range(h))
    return EEPSolution(N, h, sq, bound_value(N))


@dataclass
class VerificationReport:
    """Outcome of inserting the closed-form EEP into the secular coefficients.

    ``insertion_zeros`` lists the exact values of ``P_{d-1}, ..., P_0`` at
    the EEP.  ``method`` says whether they came from the symbolic
    coefficients or from the recurrence evaluated at the point; both are
    exact.
    """

    N: int
    solution: EEPSolution
    insertion_zeros: list[Fraction]
    degeneracy_confirmed: bool
    norm: Fraction
    bound_identity_holds: bool
    numeric_eigenvalue_max_modulus: float
    method: str
    failures: list[str] = field(default_factory=list)
    high_precision_max_modulus: float | None = None

    @property
    def passed(self) -> bool:
        return self.degeneracy_confirmed and self.bound_identity_holds and not self.failures


def _weighted_norm(N: int, squares_central_first) -> Fraction:
    sq = [Fraction(x) for x in squares_central_first]
    if N % 2 == 0:
        return sq[0] + 2 * sum(sq[1:], Fraction(0))
    return sum(sq, Fraction(0))


def high_precision_max_modulus(spec: ChainSpec, dps: int = HIGH_PRECISION_DPS) -> float:
    """Largest eigenvalue modulus from an mpmath solve with couplings at ``dps`` digits."""
    N = spec.N
    with mpmath.workdps(dps):
        pos = [mpmath.sqrt(_mp(x)) for x in spec.position_squares()]
        H = mpmath.matrix(N, N)
        for k, d in enumerate(spec.diagonal()):
            H[k, k] = _mp(d)
        for k, a in enumerate(pos):
            H[k, k + 1] = a
            H[k + 1, k] = -a
        ev = mpmath.eig(H, left=False, right=False)
        return float(max(abs(e) for e in ev))


def verify_eep(N: int, method: str = "auto") -> VerificationReport:
    """Check the closed-form EEP at dimension ``N`` exactly.

    ``method`` is ``"symbolic"`` (insert into the symbolic P_j), ``"recurrence"``
    (run the determinant recurrence over the integers at the point) or
    ``"auto"`` (symbolic up to SYMBOLIC_MAX_N).  Nonzero residuals are
    reported in ``failures``, never raised.
    """
    _check_n(N)
    if method == "auto":
        method = "symbolic" if N <= SYMBOLIC_MAX_N else "recurrence"
    sol = eep_closed_form(N)
    point = dict(zip(sol.names, sol.squared_couplings))
    if method == "symbolic":
        residuals = [ring_eval(p, point) for p in symbolic_secular_coeffs(N)]
        s_poly = None
    elif method == "recurrence":
        s_poly = secular_from_squares(N, sol.squared_couplings)
        residuals = list(reversed(s_poly.coeffs[:-1]))
    else:
        raise UsageError(f"unknown method {method!r}")
    d = N // 2
    failures = []
    for k, r in enumerate(residuals):
        if r != 0:
            failures.append(f"P_{d - 1 - k} = {r} at the EEP")
    if s_poly is None:
        s_poly = secular_from_squares(N, sol.squared_couplings)
    degenerate = s_poly == UniPoly.monomial(d, 1, s_poly.var)
    if degenerate != (not failures):
        failures.append("insertion residuals disagree with the s-polynomial")
    norm = _weighted_norm(N, sol.squared_couplings)
    holds = norm == sol.bound_value
    if not holds:
        failures.append(f"norm {norm} != bound {sol.bound_value}")
    max_mod = float(np.abs(eigen_numeric(sol.spec())).max())
    hp = high_precision_max_modulus(sol.spec()) if N <= HIGH_PRECISION_MAX_N else None
    return VerificationReport(
        N, sol, residuals, degenerate, norm, holds, max_mod, method, failures, hp
    )


def circumscribed_bound_check(spec: ChainSpec) -> tuple[Fraction, Fraction, bool]:
    """``(norm, bound, inside)`` for a symmetrized spec.

    The norm weights the central coupling once and the others twice for even
    N, and counts each free coupling once for odd N.
    """
    if spec.family is not Family.SYMMETRIZED:
        raise UsageError("the circumscribed bound applies to the symmetrized family only")
    norm = _weighted_norm(spec.N, spec.central_first_squares())
    bound = bound_value(spec.N)
    return norm, bound, norm <= bound


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


@dataclass
class Branch:
    """One back-substitution path.  ``values`` maps names to exact or approximate values."""

    values: dict
    status: str
    reason: str

    @property
    def spurious(self) -> bool:
        return self.status != "kept"

    def as_tuple(self, names) -> tuple:
        return tuple(self.values.get(n) for n in names)


@dataclass
class Eliminant:
    N: int
    variable: str
    polynomial: UniPoly
    real_roots: list[RealRoot]
    branches: list[Branch]
    solutions: list[tuple]
    expected: tuple
    steps: list[str]
    passed: bool
    message: str

    @property
    def names(self) -> tuple[str, ...]:
        return coupling_names(len(self.expected))


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return x


def _mp_eval(p: MultiPoly, values: dict):
    vals = [_mp(values[v]) if v in values else None for v in p.variables]
    total = mpmath.mpf(0)
    for e, c in p.terms.items():
        term = mpmath.mpf(c)
        for i, k in enumerate(e):
            if k:
                term *= vals[i] ** k
        total += term
    return total


def _mp_coeffs(p: MultiPoly, var: str, values: dict) -> list:
    return [_mp_eval(c, values) for c in p.coeffs_in(var)]


def _scale(coeffs, x) -> mpmath.mpf:
    return sum((abs(c) * abs(x) ** k for k, c in enumerate(coeffs)), mpmath.mpf(0)) + 1


def _root_value(r: RealRoot):
    if r.exact is not None:
        return r.exact
    with mpmath.workdps(NUMERIC_DPS):
        return _mp((r.lo + r.hi) / 2)


class _Lifter:
    def __init__(self, stages, names, tol):
        self.stages = stages
        self.names = names
        self.tol = tol
        self.branches: list[Branch] = []

    def _record(self, values, status, reason):
        self.branches.append(Branch(dict(values), status, reason))

    def _fmt(self, x):
        return str(x) if isinstance(x, Fraction) else mpmath.nstr(x, 15)

    def lift(self, level: int, values: dict, negatives=()) -> None:
        # values covers names[level+1:]; polys of stages[level] involve names[level:].
        # Negative squares are carried down so spurious branches are reported in full.
        if level < 0:
            if negatives:
                self._record(values, "spurious", "negative squared coupling " + ", ".join(negatives))
            else:
                self._record(values, "kept", "all squared couplings nonnegative and consistent")
            return
        var = self.names[level]
        polys = self.stages[level]
        exact = all(isinstance(v, Fraction) for v in values.values())
        candidates = self._exact_candidates(polys, var, values) if exact else None
        if candidates is None:
            candidates = self._numeric_candidates(polys, var, values)
        if isinstance(candidates, str):
            reason = candidates
            if negatives:
                reason = "negative squared coupling " + ", ".join(negatives) + "; " + reason
            self._record(values, "spurious", reason)
            return
        for x in candidates:
            nxt = dict(values)
            nxt[var] = x
            neg = negatives
            if x < 0 and (isinstance(x, Fraction) or x < -self.tol):
                neg = negatives + (f"{var} = {self._fmt(x)}",)
            self.lift(level - 1, nxt, neg)

    def _exact_candidates(self, polys, var, values):
        unis = [p.to_unipoly(var, values) for p in polys]
        g = None
        for u in unis:
            if u.is_zero():
                continue
            g = u if g is None else poly_gcd(g, u)
        if g is None:
            return "positive-dimensional fibre; not a point solution"
        if g.degree <= 0:
            return f"extraneous root: no common {var} solution"
        roots = real_roots(g, tol=Fraction(1, 2**200))
        if not roots:
            return f"no real common {var} solution"
        out = []
        for r in roots:
            if r.exact is not None:
                out.append(r.exact)
            else:
                return None  # irrational lift: switch to the numeric path
        return out

    def _numeric_candidates(self, polys, var, values):
        with mpmath.workdps(NUMERIC_DPS):
            lists = [_mp_coeffs(p, var, values) for p in polys]
            for cs in lists:
                if len(cs) == 1 and abs(cs[0]) > self.tol * _scale(cs, 0):
                    return f"extraneous root: constraint free of {var} is nonzero"
            solvable = []
            for cs in lists:
                while len(cs) > 1 and abs(cs[-1]) <= self.tol * _scale(cs, 1):
                    cs = cs[:-1]
                if len(cs) > 1:
                    solvable.append(cs)
            if not solvable:
                return "positive-dimensional fibre; not a point solution"
            pivot = min(solvable, key=len)
            roots = mpmath.polyroots(list(reversed(pivot)), maxsteps=400, extraprec=400)
            roots = roots if isinstance(roots, list) else [roots]
            out = []
            for z in roots:
                z = mpmath.mpc(z)
                if abs(z.imag) > self.tol * (1 + abs(z)):
                    continue
                x = z.real
                if all(
                    abs(mpmath.polyval(list(reversed(cs)), x)) <= self.tol * _scale(cs, x)
                    for cs in lists
                ):
                    out.append(x)
            if not out:
                return f"no real common {var} solution"
            return out


def _eliminate(polys: list[MultiPoly], names: tuple):
    """Pivot-resultant elimination in the order ``names[0], names[1], ...``.

    Returns the stage lists (stage i holds the polynomials involving
    ``names[i:]``) and a log of the pivots.
    """
    stages = []
    steps = []
    current = [p for p in polys if not p.is_zero()]
    for v in names[:-1]:
        stages.append(current)
        with_v = [p for p in current if not p.free_of(v)]
        without = [p for p in current if p.free_of(v)]
        pivot = min(with_v, key=lambda p: (p.degree_in(v), len(p.terms)))
        rest = [p for p in with_v if p is not pivot]
        new = [resultant(pivot, q, v) for q in rest]
        steps.append(
            f"eliminate {v}: pivot of degree {pivot.degree_in(v)}, {len(new)} resultant(s)"
        )
        current = [p for p in new + without if not p.is_zero()]
    stages.append(current)
    return stages, steps


def eliminate_eep_system(N: int) -> Eliminant:
    """Solve ``P_{d-1} = ... = P_0 = 0`` by resultants for N in 4..7.

    The central variable is eliminated first and the outermost kept.  Every
    real root of the final polynomial is lifted back through the stages;
    branches that need a negative squared coupling (an imaginary coupling)
    or that have no real common lift are marked spurious.
    """
    if N not in ELIMINATION_RANGE:
        raise UsageError(f"elimination is supported for N in {ELIMINATION_RANGE}, got {N!r}")
    polys = symbolic_secular_coeffs(N)
    names = polys[0].variables
    last = names[-1]
    stages, steps = _eliminate(polys, names)
    g = None
    for p in stages[-1]:
        u = p.to_unipoly(last)
        g = u if g is None else poly_gcd(g, u)
    eliminant = UniPoly(g.primitive().coeffs, last)
    roots = real_roots(eliminant, tol=Fraction(1, 2**200))
    lifter = _Lifter(stages, names, tol=mpmath.mpf(10) ** (-(NUMERIC_DPS // 2)))
    for r in roots:
        x = _root_value(r)
        neg = (f"{last} = {lifter._fmt(x)}",) if x < 0 else ()
        lifter.lift(len(names) - 2, {last: x}, neg)
    expected = eep_closed_form(N).squared_couplings
    kept = [b for b in lifter.branches if not b.spurious]
    solutions = [b.as_tuple(names) for b in kept]
    passed = False
    if len(kept) == 1:
        sol = solutions[0]
        if all(isinstance(x, Fraction) for x in sol) and sol == tuple(Fraction(x) for x in expected):
            passed = True
            message = "unique surviving tuple equals the closed-form EEP"
        else:
            message = f"unique surviving tuple {sol} differs from the closed form {expected}"
    elif not kept:
        message = "no surviving tuple"
    else:
        message = f"{len(kept)} surviving tuples; expected exactly one"
    return Eliminant(
        N, last, eliminant, roots, lifter.branches, solutions, expected, steps, passed, message
    )


# Side quartic for N=6 as obtained on a Groebner-basis route, together with
# the linear relation that fixes B on its C_+ branch.  Used only as an
# informative cross-check of the resultant route.
N6_SIDE_QUARTIC = (-48828125, 28734375, 22505, 20909, 416)
N6_B_RELATION = (820546875, 9654410, 1446363, 2912)  # + 22156250 B
N6_B_SCALE = 22156250


def n6_quartic_crosscheck(tol: float = 1e-6) -> list[dict]:
    """Match the real roots of the side quartic against the N=6 eliminant.

    For each root report the nearest eliminant root, the status of that
    branch, and B from the linear relation.
    """
    elim = eliminate_eep_system(6)
    quartic = UniPoly(N6_SIDE_QUARTIC, "C")
    out = []
    for r in real_roots(quartic):
        c = r.approx
        near = min(elim.real_roots, key=lambda q: abs(q.approx - c))
        match = abs(near.approx - c) <= tol
        statuses = sorted(
            {b.status for b in elim.branches if abs(float(b.values["C"]) - near.approx) <= tol}
        )
        b_rel = -sum(k * c**i for i, k in enumerate(N6_B_RELATION)) / N6_B_SCALE
        out.append(
            {
                "C": c,
                "in_eliminant": match,
                "branch_status": statuses,
                "B_from_relation": b_rel,
                "rejected": match and statuses == ["spurious"],
            }
        )
    return out
