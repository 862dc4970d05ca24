import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptchain.chain import ChainSpec, secular_in_s
from ptchain.domain import Verdict, classify_point
from ptchain.eep import (
    N6_SIDE_QUARTIC,
    bound_value,
    circumscribed_bound_check,
    eep_closed_form,
    eliminate_eep_system,
    n6_quartic_crosscheck,
    verify_eep,
)
from ptchain.errors import UsageError
from ptchain.exactpoly import UniPoly

F = Fraction


# -- closed form -------------------------------------------------------------------


@pytest.mark.parametrize(
    "N, expected",
    [
        (4, (4, 3)),
        (5, (6, 4)),
        (6, (9, 8, 5)),
        (7, (12, 10, 6)),
        (8, (16, 15, 12, 7)),
        (9, (20, 18, 14, 8)),
    ],
)
def test_named_tuples(N, expected):
    assert eep_closed_form(N).squared_couplings == expected


def test_five_level_bound():
    sol = eep_closed_form(5)
    assert sol.bound_value == 10
    assert sol.sign_choices == 4


@pytest.mark.parametrize("N", [1, 0, -3])
def test_closed_form_needs_two_levels(N):
    with pytest.raises(UsageError):
        eep_closed_form(N)


@pytest.mark.parametrize("N", range(2, 41))
def test_entries_positive_and_bound_identity(N):
    sol = eep_closed_form(N)
    sq = sol.squared_couplings
    assert all(x > 0 for x in sq)
    if N % 2 == 0:
        K = N // 2
        assert sq[0] + 2 * sum(sq[1:]) == F(4 * K**3 - K, 3)
    else:
        M = N // 2
        assert sum(sq) == F(2 * M**3 + 3 * M**2 + M, 3)
    assert bound_value(N).denominator == 1


# -- verification ----------------------------------------------------------------------


def test_verify_four_level():
    r = verify_eep(4)
    assert r.insertion_zeros == [0, 0]
    assert secular_in_s(r.solution.spec()).s_poly == UniPoly([0, 0, 1], "s")
    assert r.norm == 10 and r.bound_identity_holds and r.passed


def test_verify_seven_level():
    r = verify_eep(7)
    assert r.solution.squared_couplings == (12, 10, 6)
    assert r.insertion_zeros == [0, 0, 0]
    assert r.passed


def test_verify_forty_level():
    r = verify_eep(40)
    assert r.method == "recurrence"
    assert len(r.insertion_zeros) == 20 and all(x == 0 for x in r.insertion_zeros)
    assert r.bound_identity_holds and r.passed


@pytest.mark.parametrize("N", range(2, 17))
def test_symbolic_and_recurrence_routes_agree(N):
    a = verify_eep(N, "symbolic")
    b = verify_eep(N, "recurrence")
    assert a.insertion_zeros == b.insertion_zeros == [0] * (N // 2)


@pytest.mark.parametrize("N", range(2, 13))
def test_numeric_eigenvalues_scatter_like_jordan_block(N):
    # rounding the couplings alone moves an N-fold root by ~ (eps * |H|^N)^(1/N)
    r = verify_eep(N)
    scale = 2 * N
    assert r.numeric_eigenvalue_max_modulus <= 10 * np.finfo(float).eps ** (1 / N) * scale


@pytest.mark.parametrize("N", range(2, 9))
def test_high_precision_eigenvalues_at_zero(N):
    assert verify_eep(N).high_precision_max_modulus <= 1e-2


def test_verify_reports_failures_without_raising(monkeypatch):
    import ptchain.eep as eep

    real = eep.eep_closed_form

    def shifted(N):
        sol = real(N)
        sq = (sol.squared_couplings[0] + 1,) + sol.squared_couplings[1:]
        return eep.EEPSolution(sol.N, sol.half_dim, sq, sol.bound_value)

    monkeypatch.setattr(eep, "eep_closed_form", shifted)
    r = eep.verify_eep(6)
    assert not r.passed and not r.degeneracy_confirmed
    assert r.failures and any("P_" in f for f in r.failures)


def test_verify_rejects_unknown_method():
    with pytest.raises(UsageError):
        verify_eep(4, "guess")


# -- boundary geometry ----------------------------------------------------------------------


@pytest.mark.parametrize("N", range(2, 13))
def test_eep_is_degenerate_and_maximal(N):
    sq = list(eep_closed_form(N).squared_couplings)
    assert classify_point(ChainSpec.from_squares(N, sq)).verdict is Verdict.REAL_DEGENERATE
    for j in range(len(sq)):
        bumped = sq.copy()
        bumped[j] += F(1, 100)
        assert classify_point(ChainSpec.from_squares(N, bumped)).verdict is Verdict.COMPLEX


@settings(max_examples=30)
@given(st.integers(2, 8), st.lists(st.booleans(), min_size=4, max_size=4))
def test_all_sign_choices_are_eeps(N, flips):
    # every sign pattern of the (irrational) couplings collapses the spectrum to 0
    sol = eep_closed_form(N)
    with mpmath.workdps(50):
        signed = [
            (-1 if f else 1) * mpmath.sqrt(x) for x, f in zip(reversed(sol.squared_couplings), flips)
        ]
        H = mpmath.matrix(N, N)
        for k in range(N):
            H[k, k] = N - 1 - 2 * k
        for j in range(N - 1):
            a = signed[min(j, N - 2 - j)]
            H[j, j + 1], H[j + 1, j] = a, -a
        ev = mpmath.eig(H, left=False, right=False)
        assert max(abs(e) for e in ev) < 1e-2
    assert secular_in_s(sol.spec()).s_poly == UniPoly.monomial(N // 2, 1, "s")


def test_bound_check_six_level_eep():
    norm, bound, inside = circumscribed_bound_check(ChainSpec.from_squares(6, [9, 8, 5]))
    assert norm == 35 == bound and inside


def test_bound_check_origin():
    norm, bound, inside = circumscribed_bound_check(ChainSpec.from_squares(5, [0, 0]))
    assert (norm, bound, inside) == (0, 10, True)


def test_bound_check_family():
    with pytest.raises(UsageError):
        circumscribed_bound_check(ChainSpec.general_pt([1, 1]))


def _last_closure_point(N, direction):
    """Bisect along ``t * direction`` towards the first exit from the closure."""
    spec_at = lambda t: ChainSpec.from_squares(N, [t * d for d in direction])
    lo, hi = F(0), F(1)
    while classify_point(spec_at(hi)).in_closure:
        lo, hi = hi, 2 * hi
    for _ in range(30):
        mid = (lo + hi) / 2
        if classify_point(spec_at(mid)).in_closure:
            lo = mid
        else:
            hi = mid
    return spec_at(lo)


@pytest.mark.parametrize("N", range(2, 9))
def test_closure_points_lie_inside_bound(N):
    rng = random.Random(77 + N)
    for _ in range(40):
        direction = [F(rng.randint(0, 100), 10) for _ in range(N // 2)]
        if not any(direction):
            continue
        spec = _last_closure_point(N, direction)
        assert classify_point(spec).in_closure
        norm, bound, inside = circumscribed_bound_check(spec)
        assert inside, (N, direction, norm, bound)
        # interior points well inside the ray are covered as well
        inner = ChainSpec.from_squares(N, [x / 2 for x in spec.central_first_squares()])
        if classify_point(inner).in_closure:
            assert circumscribed_bound_check(inner)[2]


# -- elimination ----------------------------------------------------------------------------


def _branch(e, **values):
    for b in e.branches:
        if all(b.values.get(k) == F(v) for k, v in values.items()):
            return b
    raise AssertionError(f"no branch with {values}")


def test_eliminate_four_level():
    e = eliminate_eep_system(4)
    assert e.variable == "B"
    assert e.polynomial * 1 == UniPoly([-81, 24, 1], "B") * e.polynomial.lead
    assert _branch(e, B=3, A=4).status == "kept"
    spurious = _branch(e, B=-27)
    assert spurious.spurious and "negative" in spurious.reason
    assert e.solutions == [(4, 3)] and e.passed


def test_eliminate_five_level():
    e = eliminate_eep_system(5)
    target = UniPoly([256, -68, 1], "B")
    assert e.polynomial * target.lead == target * e.polynomial.lead
    assert _branch(e, B=4, A=6).status == "kept"
    bad = _branch(e, B=64)
    assert bad.values["A"] == -54 and bad.spurious
    assert e.passed


def test_eliminate_six_level():
    e = eliminate_eep_system(6)
    assert e.polynomial(5) == 0
    assert e.solutions == [(9, 8, 5)] and e.passed
    # the eliminant is the side quartic times (C - 5)
    quartic = UniPoly(N6_SIDE_QUARTIC, "C")
    assert e.polynomial == quartic * UniPoly([-5, 1], "C")


def test_eliminate_seven_level():
    e = eliminate_eep_system(7)
    assert e.polynomial(6) == 0
    expected = UniPoly([-6, 1], "C") * UniPoly([-972, -54, 1], "C") * UniPoly([2916, 708, 1], "C")
    assert e.polynomial == expected
    assert e.solutions == [(12, 10, 6)] and e.passed
    # the positive irrational root 27 + 9 sqrt 21 dies through a negative B
    big = [b for b in e.branches if "B" in b.values]
    assert any(b.spurious and b.values["B"] < 0 for b in big)


def test_six_level_crosscheck_rejects_side_roots():
    rows = n6_quartic_crosscheck()
    roots = sorted(r["C"] for r in rows)
    assert roots == pytest.approx([-65.80360706, 1.693394621], abs=1e-6)
    assert all(r["in_eliminant"] and r["rejected"] for r in rows)
    c_plus = max(rows, key=lambda r: r["C"])
    assert c_plus["B_from_relation"] < 0


@pytest.mark.parametrize("N", [2, 3, 8])
def test_eliminate_range(N):
    with pytest.raises(UsageError):
        eliminate_eep_system(N)
