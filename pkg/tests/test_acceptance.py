"""Acceptance criteria 1-11; the terminal summary prints one PASS/FAIL line per criterion."""

import csv
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from ptchain.chain import ChainSpec, Family, secular_in_s, symbolic_secular_coeffs
from ptchain.cli import run_job
from ptchain.domain import Verdict, classify_point, closed_form_check, trace_boundary
from ptchain.eep import (
    bound_value,
    circumscribed_bound_check,
    eep_closed_form,
    eliminate_eep_system,
    n6_quartic_crosscheck,
    verify_eep,
)
from ptchain.exactpoly import UniPoly, ring_eval
from ptchain.metric import biorthogonal_decomposition, build_metric, eigen_numeric

F = Fraction
criterion = pytest.mark.criterion


def _random_simple(rng, N, spread=100):
    eep = eep_closed_form(N).squared_couplings
    while True:
        spec = ChainSpec.from_squares(N, [F(rng.randint(0, spread * x), spread) for x in eep])
        if classify_point(spec).is_simple:
            return spec


# 1 ------------------------------------------------------------------------------------


@criterion(1)
def test_eep_insertion_two_to_forty():
    start = time.perf_counter()
    for N in range(2, 41):
        r = verify_eep(N)
        assert r.method == ("symbolic" if N <= 20 else "recurrence")
        assert r.insertion_zeros == [0] * (N // 2), N
        assert secular_in_s(r.solution.spec()).s_poly == UniPoly.monomial(N // 2, 1, "s"), N
        assert r.degeneracy_confirmed
    assert time.perf_counter() - start < 60


@criterion(1)
def test_symbolic_coefficients_vanish_directly():
    # plain evaluation of the cached symbolic P_j at the EEP, independent of verify_eep
    for N in range(2, 15):
        coeffs = symbolic_secular_coeffs(N)
        point = dict(zip(coeffs[0].variables, eep_closed_form(N).squared_couplings))
        assert [ring_eval(p, point) for p in coeffs] == [0] * len(coeffs)


# 2 ------------------------------------------------------------------------------------


@criterion(2)
@pytest.mark.parametrize(
    "N, expected",
    [(4, (4, 3)), (6, (9, 8, 5)), (8, (16, 15, 12, 7)), (5, (6, 4)), (7, (12, 10, 6)), (9, (20, 18, 14, 8))],
)
def test_named_tuples(N, expected):
    assert eep_closed_form(N).squared_couplings == expected


# 3 ------------------------------------------------------------------------------------


@criterion(3)
def test_norm_identities():
    for N in range(2, 41):
        sq = eep_closed_form(N).squared_couplings
        if N % 2 == 0:
            # ellipsoid: the central square once, every other square twice
            K = N // 2
            norm = sq[0] + 2 * sum(sq[1:])
            expected = F(4 * K**3 - K, 3)
        else:
            # sphere: each independent square once
            M = N // 2
            norm = sum(sq)
            expected = F(2 * M**3 + 3 * M**2 + M, 3)
        assert norm == expected == bound_value(N)
        assert circumscribed_bound_check(ChainSpec.from_squares(N, sq))[0] == norm
        assert norm.denominator == 1


@criterion(3)
def test_norm_spot_values():
    assert bound_value(4) == 10
    assert bound_value(6) == 35
    assert bound_value(5) == 10
    # K = 4: the linear coefficient is A + 2B + 2C + 2D - 84
    P3 = symbolic_secular_coeffs(8)[0]
    zero = dict.fromkeys(P3.variables, 0)
    assert ring_eval(P3, zero) == -84
    assert bound_value(8) == 84


# 4-6 --------------------------------------------------------------------------------


@criterion(4)
def test_elimination_four_level():
    e = eliminate_eep_system(4)
    target = UniPoly([-3, 1], "B") * UniPoly([27, 1], "B")
    assert e.polynomial * target.lead == target * e.polynomial.lead
    kept = [b for b in e.branches if not b.spurious]
    assert [(b.values["A"], b.values["B"]) for b in kept] == [(4, 3)]
    bad = [b for b in e.branches if b.values.get("B") == -27]
    assert bad and all(b.spurious for b in bad)
    assert any(b.values.get("A") == 64 for b in bad)
    assert e.passed


@criterion(5)
def test_elimination_five_level():
    e = eliminate_eep_system(5)
    target = UniPoly([256, -68, 1], "B")
    assert e.polynomial * target.lead == target * e.polynomial.lead
    assert e.solutions == [(6, 4)]
    bad = [b for b in e.branches if b.values.get("B") == 64]
    assert bad and all(b.spurious for b in bad)
    assert e.passed


@criterion(6)
def test_elimination_six_level():
    e = eliminate_eep_system(6)
    assert e.polynomial(5) == 0
    assert e.solutions == [(9, 8, 5)]
    assert e.passed
    rows = n6_quartic_crosscheck(tol=1e-6)
    roots = sorted(r["C"] for r in rows)
    assert roots == pytest.approx([-65.80360706, 1.693394621], abs=1e-6)
    assert all(r["rejected"] for r in rows)


# 7 ------------------------------------------------------------------------------------


@criterion(7)
@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_closed_form_spectra(N):
    rng = random.Random(700 + N)
    for _ in range(100):
        spec = _random_simple(rng, N)
        cf = closed_form_check(N, spec.central_first_squares())
        assert cf.verdict is Verdict.REAL_SIMPLE
        closed = np.sort(np.array([complex(e).real for e in cf.energies]))
        numeric = eigen_numeric(spec)
        assert np.abs(numeric.imag).max() <= 1e-10
        assert np.abs(closed - np.sort(numeric.real)).max() <= 1e-10


# 8 ------------------------------------------------------------------------------------


@criterion(8)
def test_five_level_grid_against_inequalities():
    start = time.perf_counter()
    nodes = [F(12 * i, 199) for i in range(200)]
    mismatches = []
    for A in nodes:
        for B in nodes:
            g = (10 - A - B, 36 + 12 * A + A * A - 36 * B, (8 + B) ** 2 - (32 - 2 * B) * A)
            holds = all(x >= 0 for x in g)
            saturated = holds and any(x == 0 for x in g)
            v = classify_point(ChainSpec.from_squares(5, [A, B])).verdict
            in_closure = v is not Verdict.COMPLEX
            if in_closure != holds or (v is Verdict.REAL_DEGENERATE) != saturated:
                mismatches.append((A, B, v, g))
    assert not mismatches, mismatches[:5]
    assert time.perf_counter() - start < 120


# 9 ------------------------------------------------------------------------------------


@criterion(9)
def test_three_level_boundary():
    curve = trace_boundary(3, ["a"], [(0, 3)], 64, tol=1e-12)
    (point,) = curve.points
    assert abs(point[0] - math.sqrt(2)) <= 1e-9
    inside = classify_point(ChainSpec.from_squares(3, [F(2) - F(1, 10**9)]))
    outside = classify_point(ChainSpec.from_squares(3, [F(2) + F(1, 10**9)]))
    assert inside.verdict is Verdict.REAL_SIMPLE and outside.verdict is Verdict.COMPLEX


@criterion(9)
def test_four_level_boundary_through_eep(tmp_path):
    out = tmp_path / "n4.csv"
    job = {"command": "boundary", "N": 4, "axes": ["a", "b"], "window": [["0", "2.5"], ["0", "2.5"]],
           "resolution": 400, "format": "csv", "out": str(out)}
    assert run_job(job) == 0
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["a", "b"]
    pts = [(float(a), float(b)) for a, b in rows[1:]]
    assert min(math.dist(p, (2.0, math.sqrt(3))) for p in pts) <= 1e-6


@criterion(9)
def test_general_two_level_hyperbola():
    curve = trace_boundary(
        2, ["a0", "b0"], [(0, 3), (-3, F(-1, 2))], 49,
        family=Family.GENERAL_TRIDIAGONAL, diag=[1, 3], tol=1e-10,
    )
    assert len(curve.points) >= 50
    assert max(abs(a * b + 1) for a, b in curve.points) <= 1e-9


# 10 ------------------------------------------------------------------------------------


@criterion(10)
@pytest.mark.parametrize("N", [2, 4, 5, 6, 8])
@pytest.mark.parametrize("weights", ["unit", "random"])
def test_metric(N, weights):
    rng = random.Random(1000 * N + (weights == "random"))
    for _ in range(20):
        basis = biorthogonal_decomposition(_random_simple(rng, N))
        w = None if weights == "unit" else [rng.uniform(0.1, 10) for _ in range(N)]
        m = build_metric(basis, w)
        assert m.residual <= 1e-8 * m.theta_norm
        assert np.array_equal(m.theta, m.theta.T)
        assert m.min_eigenvalue > 0


# 11 ------------------------------------------------------------------------------------


@criterion(11)
@pytest.mark.parametrize("N", range(2, 13))
def test_eep_degeneracy_sensitivity(N):
    sq = list(eep_closed_form(N).squared_couplings)
    assert classify_point(ChainSpec.from_squares(N, sq)).verdict is Verdict.REAL_DEGENERATE
    for j in range(len(sq)):
        bumped = sq.copy()
        bumped[j] += F(1, 100)
        assert classify_point(ChainSpec.from_squares(N, bumped)).verdict is Verdict.COMPLEX
