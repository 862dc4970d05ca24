import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptchain.chain import ChainSpec, Family, TridiagonalMatrix, secular_in_s
from ptchain.domain import (
    Verdict,
    classify_matrix,
    classify_point,
    closed_form_check,
    trace_boundary,
)
from ptchain.eep import eep_closed_form
from ptchain.errors import UsageError
from ptchain.exactpoly import discriminant
from ptchain.metric import eigen_numeric

F = Fraction


# -- classify_point ------------------------------------------------------------


def test_three_level_outside():
    assert classify_point(ChainSpec.symmetrized(3, [F(3, 2)])).verdict is Verdict.COMPLEX


def test_four_level_eep_is_degenerate():
    v = classify_point(ChainSpec.from_squares(4, [4, 3]))
    assert v.verdict is Verdict.REAL_DEGENERATE
    assert v.in_closure and not v.is_simple


def test_five_level_origin_is_simple():
    v = classify_point(ChainSpec.from_squares(5, [0, 0]))
    assert v.verdict is Verdict.REAL_SIMPLE
    assert v.real_root_count == 2


@pytest.mark.parametrize("N", range(2, 16))
def test_origin_is_simple(N):
    assert classify_point(ChainSpec.symmetrized(N, [0] * (N // 2))).is_simple


def test_three_level_interval_endpoints():
    assert classify_point(ChainSpec.from_squares(3, [2])).verdict is Verdict.REAL_DEGENERATE
    assert classify_point(ChainSpec.from_squares(3, [F(199, 100)])).verdict is Verdict.REAL_SIMPLE
    assert classify_point(ChainSpec.from_squares(3, [F(201, 100)])).verdict is Verdict.COMPLEX


def test_general_two_level_uses_e_polynomial():
    # eigenvalues 2 +- sqrt(1 + ab)
    mk = lambda a, b: ChainSpec.general_tridiagonal([1, 3], [a], [b])
    assert classify_point(mk(2, F(-1, 4))).verdict is Verdict.REAL_SIMPLE
    assert classify_point(mk(2, F(-1, 2))).verdict is Verdict.REAL_DEGENERATE
    assert classify_point(mk(2, -1)).verdict is Verdict.COMPLEX


def test_general_pt_chain():
    # diag (1, 3), PT coupling a: eigenvalues 2 +- sqrt(1 - a^2)
    assert classify_point(ChainSpec.general_pt([F(1, 2)])).is_simple
    assert classify_point(ChainSpec.general_pt([1])).verdict is Verdict.REAL_DEGENERATE
    assert classify_point(ChainSpec.general_pt([2])).verdict is Verdict.COMPLEX


def test_classify_matrix_hermitian_degenerate():
    T = TridiagonalMatrix.from_lists([1, 1], [0], [0])
    assert classify_matrix(T).verdict is Verdict.REAL_DEGENERATE


@settings(max_examples=60)
@given(
    st.integers(2, 10),
    st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=10), min_size=5, max_size=5),
    st.lists(st.booleans(), min_size=5, max_size=5),
)
def test_sign_flip_invariance(N, values, flips):
    vals = values[: N // 2]
    flipped = [-v if f else v for v, f in zip(vals, flips)]
    a = classify_point(ChainSpec.symmetrized(N, vals))
    b = classify_point(ChainSpec.symmetrized(N, flipped))
    assert a.verdict is b.verdict


def _numeric_verdict(spec):
    e = eigen_numeric(spec)
    return Verdict.COMPLEX if np.abs(e.imag).max() > 1e-8 else Verdict.REAL_SIMPLE


def _scaled(spec, factor):
    return ChainSpec.from_squares(spec.N, [x * factor for x in spec.central_first_squares()])


def test_exact_classifier_agrees_with_numeric_solver():
    rng = random.Random(2024)
    compared = 0
    for N in range(2, 11):
        eep = eep_closed_form(N).squared_couplings
        for _ in range(200):
            sq = [F(rng.randint(0, 120 * x), 100) for x in eep]
            spec = ChainSpec.from_squares(N, sq)
            exact = classify_point(spec).verdict
            # skip points within ~1e-6 of the boundary along the ray
            if {classify_point(_scaled(spec, f)).verdict for f in (1 - F(1, 10**6), 1 + F(1, 10**6))} != {exact}:
                continue
            assert exact is _numeric_verdict(spec), (N, sq)
            compared += 1
    assert compared >= 200 * 9 * 0.9


# -- closed forms --------------------------------------------------------------------


def test_closed_form_four_level_origin():
    cf = closed_form_check(4, [0, 0])
    assert sorted(e.real for e in cf.energies) == pytest.approx([-3, -1, 1, 3], abs=1e-14)
    assert cf.verdict is Verdict.REAL_SIMPLE


def test_closed_form_four_level_eep():
    cf = closed_form_check(4, [4, 3])
    assert cf.conditions["64 - 64B + 16A + 4AB + A^2 >= 0"] == 0
    assert all(abs(e) < 1e-12 for e in cf.energies)
    assert cf.verdict is Verdict.REAL_DEGENERATE


def test_closed_form_five_level_eep_saturates_all():
    cf = closed_form_check(5, [6, 4])
    assert all(v == 0 for v in cf.conditions.values())
    assert all(abs(e) < 1e-12 for e in cf.energies)
    assert cf.verdict is Verdict.REAL_DEGENERATE


@pytest.mark.parametrize("N", [1, 6])
def test_closed_form_range(N):
    with pytest.raises(UsageError):
        closed_form_check(N, [0] * max(1, N // 2))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_closed_form_membership_matches_classifier(N):
    rng = random.Random(N)
    eep = eep_closed_form(N).squared_couplings
    for _ in range(300):
        sq = [F(rng.randint(0, 150 * x), 100) for x in eep]
        assert closed_form_check(N, sq).verdict is classify_point(ChainSpec.from_squares(N, sq)).verdict


def test_degenerate_eep_discriminants_vanish():
    for N in range(2, 13):
        s = secular_in_s(eep_closed_form(N).spec()).s_poly
        if s.degree >= 2:
            assert discriminant(s) == 0


# -- boundary tracing --------------------------------------------------------------------


def test_boundary_three_level_single_axis():
    curve = trace_boundary(3, ["a"], [(0, 2)], 64)
    assert len(curve.points) == 1
    assert abs(curve.points[0][0] - math.sqrt(2)) < 1e-9


def test_boundary_four_level_through_eep():
    # B = 3 is grid row 24 of 50 in squared coordinates
    curve = trace_boundary(4, ["a", "b"], [(0, F(5, 2)), (0, F(5, 2))], 50)
    target = (2.0, math.sqrt(3))
    assert min(math.dist(p, target) for p in curve.points) < 1e-6


def test_boundary_four_level_ray_at_eep_height():
    # the ray B = 3 only touches the closure at the EEP, so both crossings sit at a = 2
    curve = trace_boundary(4, ["a"], [(0, F(5, 2))], 50, fixed={"B": 3})
    assert curve.points and all(abs(p[0] - 2) < 1e-9 for p in curve.points)


def test_boundary_brackets_straddle_verdict_change():
    curve = trace_boundary(4, ["a", "b"], [(0, 3), (0, 3)], 12, direction="both")
    assert curve.points
    for inside, outside in curve.brackets:
        vin = classify_point(ChainSpec.from_squares(4, list(inside)))
        vout = classify_point(ChainSpec.from_squares(4, list(outside)))
        assert vin.in_closure and not vout.in_closure


def test_boundary_general_two_level_hyperbola():
    curve = trace_boundary(
        2,
        ["a0", "b0"],
        [(0, 3), (-3, F(-1, 2))],
        49,
        family=Family.GENERAL_TRIDIAGONAL,
        diag=[1, 3],
        tol=1e-10,
    )
    assert len(curve.points) == 50
    assert max(abs(a * b + 1) for a, b in curve.points) <= 1e-9


def test_boundary_empty_window_has_diagnostic():
    curve = trace_boundary(4, ["a", "b"], [(0, F(1, 2)), (0, F(1, 2))], 5)
    assert curve.empty and "inside" in curve.diagnostic
    curve = trace_boundary(4, ["a", "b"], [(5, 6), (5, 6)], 5)
    assert curve.empty and "outside" in curve.diagnostic


def test_boundary_fixed_coupling_and_errors():
    curve = trace_boundary(6, ["a", "b"], [(0, 4), (0, 4)], 8, fixed={"C": 5})
    assert curve.fixed == {"c": "5"}
    with pytest.raises(UsageError):
        trace_boundary(4, ["a", "z"], [(0, 1), (0, 1)], 4)
    with pytest.raises(UsageError):
        trace_boundary(4, ["a", "b"], [(0, 1), (0, 1)], 1)
    with pytest.raises(UsageError):
        trace_boundary(4, ["a", "b"], [(-1, 1), (0, 1)], 4)


def test_boundary_parallel_matches_serial():
    kw = dict(direction="rows")
    serial = trace_boundary(4, ["a", "b"], [(0, 3), (0, 3)], 10, workers=1, **kw)
    parallel = trace_boundary(4, ["a", "b"], [(0, 3), (0, 3)], 10, workers=2, **kw)
    assert serial.points == parallel.points
