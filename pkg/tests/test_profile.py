"""Profile ODE construction: slope solve, integration, blow-up, asymptotics.

The strongest oracle here is an exact solution: for the inverse harmonic sum
with two curvatures, v(r) = 2r/(1-r^2) solves the translator relation in
closed form (curvatures 2(1-r^2)/(1+r^2)^2 and 2/(1+r^2), speed
(1-r^2)/(1+r^2)), so the bowl fills the unit ball exactly.  Ball cases are
additionally cross-checked against an independent scipy integration of the
degree-reduced form of the same relation.
"""

import math

import numpy as np
import pytest

import bowlab as bl
from bowlab.errors import NoRoot
from bowlab.profile import (
    SolverConfig,
    blow_up_radius,
    composed_form_slope,
    curvature_asymptotics,
    entire_growth_coefficient,
    initial_slope,
    integrate_profile,
    mean_closed_form_slope,
    profile_metadata,
    profile_to_csv,
    slope_derivative,
    translator_residuals,
)
from bowlab.profile import NotEntire, ProfileSolution, BallDetected


# ---------------------------------------------------------------------------
# initial slope
# ---------------------------------------------------------------------------

def test_initial_slope_normalized():
    # S_n^(1/n) has value 1 at the ones vector
    assert initial_slope(bl.sigma_root(3, 3)) == pytest.approx(1.0)


def test_initial_slope_mean():
    assert initial_slope(bl.mean(2)) == pytest.approx(0.5)


def test_initial_slope_h_times_sn():
    assert initial_slope(bl.h_times_sn(2)) == pytest.approx(2.0 ** (-1.0 / 3.0), rel=1e-12)


# ---------------------------------------------------------------------------
# slope solve
# ---------------------------------------------------------------------------

def test_slope_apex_limit():
    # near the apex with the umbilic slope, v' tends to the apex curvature
    for gamma in (bl.mean(2), bl.h_times_sn(2), bl.sigma_root(2, 3)):
        c0 = initial_slope(gamma)
        r = 1e-7 / c0
        assert slope_derivative(gamma, r, c0 * r) == pytest.approx(c0, rel=1e-5)


def test_slope_mean_degenerate_anchor():
    # n=2, r=1, v=1: the tangential term alone saturates the speed, the
    # monotone solve lands on its lower bracket
    assert slope_derivative(bl.mean(2), 1.0, 1.0) == pytest.approx(0.0, abs=1e-8)


def test_slope_mean_linear_case():
    assert slope_derivative(bl.mean(2), 2.0, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_slope_matches_mean_closed_form_grid():
    gamma = bl.mean(2)
    for r in np.linspace(0.5, 6.0, 10):
        for v in np.linspace(0.05, 0.9 * r, 10):  # stay below the slope bound v = r
            ref = mean_closed_form_slope(2, r, v)
            got = slope_derivative(gamma, r, v)
            assert got == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_slope_matches_composed_form_degree_one():
    # degree one: primitive relation == (1+v^2) f(v/r)
    cases = [
        (bl.mean(2), lambda r, v: v / r < 1.0),
        (bl.sigma_root(2, 2), lambda r, v: True),
        (bl.harmonic_sum_inverse(1, 2), lambda r, v: v / r > 1.0),
    ]
    for gamma, ok in cases:
        for r in np.linspace(0.4, 3.0, 7):
            for v in np.linspace(0.1, 4.0, 7):
                if not ok(r, v):
                    continue
                ref = composed_form_slope(gamma, r, v)
                got = slope_derivative(gamma, r, v)
                assert got == pytest.approx(ref, rel=1e-8, abs=1e-8)


def test_slope_exact_harmonic_solution():
    # v = 2r/(1-r^2) gives v' = 2(1+r^2)/(1-r^2)^2 exactly
    gamma = bl.harmonic_sum_inverse(1, 2)
    for r in (0.2, 0.5, 0.8, 0.97):
        v = 2.0 * r / (1.0 - r * r)
        ref = 2.0 * (1.0 + r * r) / (1.0 - r * r) ** 2
        assert slope_derivative(gamma, r, v) == pytest.approx(ref, rel=1e-11)


def test_slope_saturated_raises():
    with pytest.raises(NoRoot) as err:
        slope_derivative(bl.mean(2), 1.0, 2.0)  # v/r = 2 > 1: past the bound
    assert err.value.flavor == "saturated"


# ---------------------------------------------------------------------------
# integration: entire branch
# ---------------------------------------------------------------------------

def test_mean2_reaches_budget(profile_mean2):
    assert profile_mean2.status.kind == "entire"
    assert profile_mean2.status.r_budget == 50.0


def test_initial_condition_anchor(profile_mean2, profile_hs2):
    for sol, gamma in ((profile_mean2, bl.mean(2)), (profile_hs2, bl.h_times_sn(2))):
        c0 = initial_slope(gamma)
        assert sol.v[0] / sol.r[0] == pytest.approx(c0, rel=1e-6)


def test_mean2_growth(profile_mean2):
    # u ~ r^2/2 far out
    assert profile_mean2.u[-1] / profile_mean2.r[-1] ** 2 == pytest.approx(0.5, rel=0.01)
    assert entire_growth_coefficient(profile_mean2) == pytest.approx(0.5, rel=0.05)


def test_mean3_growth(profile_mean3):
    assert entire_growth_coefficient(profile_mean3) == pytest.approx(0.25, rel=0.05)


def test_sr2n3_growth(profile_sr2n3):
    # gamma(0,1,1) = 1 and degree one: coefficient 1/2
    assert entire_growth_coefficient(profile_sr2n3) == pytest.approx(0.5, rel=0.05)


def test_growth_requires_entire(profile_hs2):
    with pytest.raises(NotEntire):
        entire_growth_coefficient(profile_hs2)


# ---------------------------------------------------------------------------
# integration: ball branch
# ---------------------------------------------------------------------------

def test_hs2_ball_detected(profile_hs2):
    assert profile_hs2.status.kind == "ball"
    assert profile_hs2.v[-1] >= profile_hs2.config.v_blowup


def test_harmonic_exact_ball_radius(profile_harmonic):
    # exact solution: domain is the unit ball
    r_max, bound = blow_up_radius(profile_harmonic)
    assert abs(r_max - 1.0) <= max(bound, 1e-8)


def test_harmonic_exact_height(profile_harmonic):
    # u(r) = -log(1 - r^2) with u(0) = 0
    sol = profile_harmonic
    sel = sol.r < 0.99
    ref = -np.log(1.0 - sol.r[sel] ** 2)
    assert np.max(np.abs(sol.u[sel] - ref)) < 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_hsn_ball_radius_vs_independent_integration(n, profile_hs2, profile_hs3):
    # independent oracle: scipy integration of the degree-reduced relation
    # lam1 = s^(1/alpha) f(w s^(-1/alpha)) with the algebraic closed form of f
    from scipy.integrate import solve_ivp

    sol = {2: profile_hs2, 3: profile_hs3}[n]
    alpha = n + 1.0

    def f(y):
        return 1.0 / (math.sqrt(y ** (n - 1) + (n - 1) ** 2 * y ** (2 * n) / 4.0)
                      + (n - 1) * y ** n / 2.0)

    def rhs(r, yv):
        v = yv[0]
        c = (1.0 + v * v) ** ((alpha - 1.0) / (2.0 * alpha))
        return [(1.0 + v * v) * c * f((v / r) / c)]

    c0 = initial_slope(bl.h_times_sn(n))
    eps = 1e-6
    ivp = solve_ivp(rhs, [eps, 4.0], [c0 * eps], rtol=1e-10, atol=1e-14,
                    events=lambda r, yv: yv[0] - 1e6)
    r_ref = float(ivp.t_events[0][0])
    r_max, bound = blow_up_radius(sol)
    assert r_max == pytest.approx(r_ref, rel=1e-5)


def test_blow_up_radius_synthetic():
    # manufactured blow-up v = r/(1-r): radius 1
    r = np.linspace(0.01, 0.999999, 4000)
    v = r / (1.0 - r)
    sol = ProfileSolution(
        gamma=bl.h_times_sn(2), config=SolverConfig(),
        r=r, v=v, u=np.zeros_like(r),
        lambda_radial=np.zeros_like(r),
        lambda_tangential=v / (r * np.sqrt(1 + v**2)),
        status=BallDetected(r_stop=float(r[-1]), v_stop=float(v[-1])))
    r_max, bound = blow_up_radius(sol)
    assert abs(r_max - 1.0) <= max(bound, 1e-9)


def test_cylinder_limit_formulas():
    # v -> infinity limit: tangential curvature is exactly 1/r, radial dies
    r = 1.7
    v = 1e150
    lam_tan = v / (r * math.sqrt(1.0 + v * v))
    assert lam_tan == pytest.approx(1.0 / r, rel=1e-15)


# ---------------------------------------------------------------------------
# node invariants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fix", ["profile_mean2", "profile_hs2", "profile_hs3",
                                 "profile_harmonic", "profile_sr2n3"])
def test_translator_residual_invariant(fix, request):
    sol = request.getfixturevalue(fix)
    assert translator_residuals(sol).max() <= 1e-8


@pytest.mark.parametrize("fix", ["profile_mean2", "profile_hs2", "profile_harmonic"])
def test_v_strictly_increasing_u_convex(fix, request):
    sol = request.getfixturevalue(fix)
    assert np.all(np.diff(sol.v) > 0.0)
    # u convex: divided differences of u (the mean slopes) increase
    slopes = np.diff(sol.u) / np.diff(sol.r)
    assert np.all(np.diff(slopes) >= -1e-12)


@pytest.mark.parametrize("fix", ["profile_hs2", "profile_hs3", "profile_harmonic"])
def test_curvatures_positive_in_cone(fix, request):
    sol = request.getfixturevalue(fix)
    assert np.all(sol.lambda_radial > 0.0)
    assert np.all(sol.lambda_tangential > 0.0)


@pytest.mark.parametrize("fix", ["profile_hs2", "profile_hs3"])
def test_radial_below_tangential_on_outer_half(fix, request):
    sol = request.getfixturevalue(fix)
    outer = sol.r > 0.5 * sol.r[-1]
    assert np.all(sol.lambda_radial[outer] < sol.lambda_tangential[outer])


# ---------------------------------------------------------------------------
# cylinder asymptotics
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fix", ["profile_hs2", "profile_hs3", "profile_harmonic"])
def test_cylinder_asymptotics(fix, request):
    sol = request.getfixturevalue(fix)
    asym = curvature_asymptotics(sol)
    assert asym.lambda1_last < 0.05 * asym.lambda_tan_last
    assert asym.tan_deviation <= 0.03 / asym.r_max


def test_epsilon_robustness():
    gamma = bl.h_times_sn(2)
    s1 = integrate_profile(gamma, SolverConfig(epsilon_fraction=1e-4))
    s2 = integrate_profile(gamma, SolverConfig(epsilon_fraction=5e-5))
    r1, b1 = blow_up_radius(s1)
    r2, b2 = blow_up_radius(s2)
    assert abs(r1 - r2) <= max(b1, b2)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def test_csv_header_and_determinism(profile_hs2):
    body = profile_to_csv(profile_hs2)
    assert body.splitlines()[0] == "r,v,u,lambda1,lambdatan"
    again = integrate_profile(bl.h_times_sn(2))
    assert profile_to_csv(again) == body


def test_metadata_fields(profile_hs2, profile_mean2):
    meta = profile_metadata(profile_hs2)
    assert meta["status"] == "ball"
    assert {"gamma_spec", "alpha", "config", "r_max", "r_max_bound",
            "cylinder_asymptotics", "library_version"} <= set(meta)
    meta2 = profile_metadata(profile_mean2)
    assert meta2["status"] == "entire"
    assert "growth_coefficient" in meta2
    assert meta2["growth_coefficient_reference"] == pytest.approx(0.5)
