"""Shooting construction of the rotationally symmetric bowl-type translator.

The profile is the graph height u(r) of the rotational translator; with
v = u' the radial and tangential principal curvatures are

    lambda_radial     = v' / (1 + v^2)^(3/2)
    lambda_tangential = v / (r * sqrt(1 + v^2))

and the translator relation fixes v' implicitly at every point:

    gamma(lambda_radial, lambda_tan, ..., lambda_tan) = 1 / sqrt(1 + v^2).

The right-hand side is obtained by solving this primitive relation for the
radial curvature with a monotone scalar root solve (the composed form
(1+v^2)^alpha f(v/r) has ambiguous exponent bookkeeping away from degree one
and is used only as a degree-one cross check).  Integration starts just off
the apex with the umbilic slope v = c0 * r and uses an embedded Cash-Karp
5(4) pair; height is carried in the state vector so u is recovered at the
same quadrature order.

Termination is either blow-up of the slope (ball-type solution; the stop
radius estimates the domain-ball radius) or the radius budget (entire
solution).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .constraint import ConstraintCurve, solve_first_slot, solve_x
from .curvature import SymmetricCurvature, gamma_to_dict
from .errors import NoBracket, NoRoot, NotExtendable, StepFailure

__all__ = [
    "SolverConfig",
    "BallDetected",
    "EntireBudgetReached",
    "ProfileSolution",
    "CylinderAsymptotics",
    "initial_slope",
    "slope_derivative",
    "integrate_profile",
    "blow_up_radius",
    "entire_growth_coefficient",
    "curvature_asymptotics",
    "translator_residuals",
    "mean_closed_form_slope",
    "composed_form_slope",
    "profile_to_csv",
    "profile_metadata",
]


# Cash-Karp 5(4) tableau; the last row is the 5th-minus-4th order difference
# used for the local error estimate.
_CK_C = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_ERR = (-277 / 64512, 0.0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084)


@dataclass(frozen=True)
class SolverConfig:
    """Stepper and termination knobs.

    epsilon_fraction is the apex offset as a fraction of the apex sphere
    radius 1/c0; r_budget defaults to 50 times that radius.
    """

    epsilon_fraction: float = 1e-4
    rtol: float = 1e-9
    atol: float = 1e-12
    v_blowup: float = 1e6
    r_budget: float | None = None
    root_rtol: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("epsilon_fraction", "rtol", "atol", "v_blowup", "root_rtol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.epsilon_fraction < 0.1:
            raise ValueError("epsilon_fraction must be well below 1")

    def to_dict(self) -> dict:
        return {
            "epsilon_fraction": self.epsilon_fraction,
            "rtol": self.rtol,
            "atol": self.atol,
            "v_blowup": self.v_blowup,
            "r_budget": self.r_budget,
            "root_rtol": self.root_rtol,
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class BallDetected:
    r_stop: float
    v_stop: float

    kind = "ball"


@dataclass(frozen=True)
class EntireBudgetReached:
    r_budget: float

    kind = "entire"


@dataclass
class ProfileSolution:
    gamma: SymmetricCurvature
    config: SolverConfig
    r: np.ndarray
    v: np.ndarray
    u: np.ndarray
    lambda_radial: np.ndarray
    lambda_tangential: np.ndarray
    status: object  # BallDetected | EntireBudgetReached

    @property
    def is_ball(self) -> bool:
        return isinstance(self.status, BallDetected)


def initial_slope(gamma: SymmetricCurvature) -> float:
    """Common apex curvature c0 = gamma(1,...,1)^(-1/alpha); the apex
    osculating sphere has radius 1/c0."""
    return gamma.umbilic_value()


def slope_derivative(gamma: SymmetricCurvature, r: float, v: float,
                     root_rtol: float = 1e-12, hint: float | None = None) -> float:
    """v' > 0 solving the primitive translator relation at (r, v).

    Raises NoRoot when the tangential curvature alone already meets or
    exceeds the required speed (flavor 'saturated'), or when no admissible
    radial curvature reaches it (flavor 'capped').
    """
    if r <= 0.0 or v < 0.0:
        raise ValueError(f"need r > 0 and v >= 0, got r={r}, v={v}")
    one_plus = 1.0 + v * v
    s = 1.0 / math.sqrt(one_plus)
    w = v / (r * math.sqrt(one_plus))
    lam1 = _radial_root(gamma, w, s, root_rtol, hint)
    return lam1 * one_plus ** 1.5


def _radial_root(gamma: SymmetricCurvature, w: float, s: float,
                 root_rtol: float, hint: float | None = None) -> float:
    """Radial curvature x with gamma(x, w, ..., w) = s (monotone in x)."""
    tol = root_rtol * s
    seed = hint if (hint is not None and hint > 0.0) else None
    try:
        return solve_first_slot(gamma, w, s, residual_tol=tol, seed=seed)
    except NoBracket as exc:
        flavor = getattr(exc, "flavor", "saturated")
        if flavor == "below_at_cap":
            raise NoRoot(
                f"no radial curvature reaches speed {s:.3e} at tangential "
                f"curvature {w:.3e}", flavor="capped") from exc
        raise NoRoot(
            f"tangential curvature {w:.3e} alone forces the speed past "
            f"{s:.3e}", flavor="saturated") from exc


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def integrate_profile(gamma: SymmetricCurvature,
                      config: SolverConfig = SolverConfig()) -> ProfileSolution:
    """Integrate the profile from the apex until blow-up or the budget.

    The slope solve is self-validating: at every accepted node the stored
    curvature pair satisfies the translator relation to the root tolerance,
    which is asserted independently by :func:`translator_residuals`.
    """
    if not gamma.extendable:
        raise NotExtendable(
            f"{gamma.name()} has no boundary extension; the bowl construction "
            "needs vertical hyperplanes as limit solutions")
    c0 = initial_slope(gamma)
    gamma0 = gamma.gamma_zero()
    r_scale = 1.0 / c0
    eps = config.epsilon_fraction * r_scale
    r_budget = config.r_budget if config.r_budget is not None else 50.0 * r_scale
    if r_budget <= eps:
        raise ValueError("radius budget does not exceed the apex offset")

    r = eps
    v = c0 * eps
    u = 0.5 * c0 * eps * eps  # series height at the apex offset; u(0) = 0
    rr = [r]
    vv = [v]
    uu = [u]
    lam1_hint = c0
    ll1 = [_node_lambda1(gamma, r, v, config.root_rtol, lam1_hint)]
    lam1_hint = ll1[0]

    h = 0.25 * eps
    h_floor = 1e-15 * r_scale
    status = None
    steps = 0
    k1 = None  # derivative at the current node, reused across attempts

    while status is None:
        if v >= config.v_blowup:
            status = BallDetected(r_stop=r, v_stop=v)
            break
        if r >= r_budget * (1.0 - 1e-12):
            status = EntireBudgetReached(r_budget=r_budget)
            break
        h = min(h, r_budget - r)
        steps += 1
        if steps > config.max_steps:
            raise StepFailure("step budget exhausted", r=r, v=v, h=h)
        if h < h_floor:
            raise StepFailure("step size underflow", r=r, v=v, h=h)

        # On the entire branch (positive boundary value) a trial stage can
        # peek past the asymptotic slope bound where the tangential term
        # saturates the speed; the monotone limit there is zero radial
        # curvature, so such stages are clamped to v' = 0 instead of being
        # read as blow-up.  Saturation cannot occur at all when the boundary
        # value vanishes, so there NoRoot genuinely signals blow-up.
        clamp = gamma0 > 1e-12
        try:
            if k1 is None:
                k1 = _rhs(gamma, r, (v, u), config.root_rtol, lam1_hint, clamp)
            ks = [k1]
            for i in range(1, 6):
                ri = r + _CK_C[i] * h
                vi = v + h * sum(a * ks[j][0] for j, a in enumerate(_CK_A[i]))
                ui = u + h * sum(a * ks[j][1] for j, a in enumerate(_CK_A[i]))
                ks.append(_rhs(gamma, ri, (vi, ui), config.root_rtol, lam1_hint, clamp))
        except NoRoot:
            status = BallDetected(r_stop=r, v_stop=v)
            break

        v_new = v + h * sum(b * k[0] for b, k in zip(_CK_B5, ks))
        u_new = u + h * sum(b * k[1] for b, k in zip(_CK_B5, ks))
        err_v = h * sum(e * k[0] for e, k in zip(_CK_ERR, ks))
        err_u = h * sum(e * k[1] for e, k in zip(_CK_ERR, ks))
        scale_v = config.atol + config.rtol * max(abs(v), abs(v_new))
        scale_u = config.atol + config.rtol * max(abs(u), abs(u_new))
        err = math.sqrt(0.5 * ((err_v / scale_v) ** 2 + (err_u / scale_u) ** 2))

        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            continue
        if v_new > 2.0 * v:
            # blow-up guard: never let the slope double within one step
            h *= 0.5
            continue

        r += h
        v, u = v_new, u_new
        rr.append(r)
        vv.append(v)
        uu.append(u)
        lam1 = _node_lambda1(gamma, r, v, config.root_rtol, lam1_hint)
        ll1.append(lam1)
        lam1_hint = lam1 if lam1 > 0.0 else lam1_hint
        k1 = None
        if err > 1e-12:
            h *= min(5.0, 0.9 * err ** -0.2)
        else:
            h *= 5.0

    r_arr = np.array(rr)
    v_arr = np.array(vv)
    u_arr = np.array(uu)
    lam1_arr = np.array(ll1)
    lam_tan = v_arr / (r_arr * np.sqrt(1.0 + v_arr**2))
    return ProfileSolution(
        gamma=gamma, config=config, r=r_arr, v=v_arr, u=u_arr,
        lambda_radial=lam1_arr, lambda_tangential=lam_tan, status=status)


def _rhs(gamma, r, y, root_rtol, hint, clamp_saturated=False):
    try:
        vdot = slope_derivative(gamma, r, y[0], root_rtol, hint=hint)
    except NoRoot as exc:
        if clamp_saturated and exc.flavor == "saturated":
            return (0.0, y[0])
        raise
    return (vdot, y[0])


def _node_lambda1(gamma, r, v, root_rtol, hint):
    one_plus = 1.0 + v * v
    s = 1.0 / math.sqrt(one_plus)
    w = v / (r * math.sqrt(one_plus))
    try:
        return _radial_root(gamma, w, s, root_rtol, hint)
    except NoRoot:
        return 0.0


# ---------------------------------------------------------------------------
# post-processing
# ---------------------------------------------------------------------------

def blow_up_radius(sol: ProfileSolution) -> tuple[float, float]:
    """Ball radius estimate: stop radius plus a linear extrapolation of 1/v
    over the last decade of the slope, returned with the extrapolation gap
    as the error bound."""
    if not sol.is_ball:
        raise ValueError("blow-up radius only applies to ball-type runs")
    v_stop = sol.v[-1]
    mask = sol.v >= v_stop / 10.0
    if mask.sum() < 2:
        mask = np.zeros(len(sol.v), dtype=bool)
        mask[-2:] = True
    rs = sol.r[mask]
    inv_v = 1.0 / sol.v[mask]
    b, a = np.polyfit(rs, inv_v, 1)
    if b >= 0.0:
        # degenerate fit (should not happen for genuine blow-up data)
        return float(sol.r[-1]), float(sol.r[-1] - rs[0])
    r_star = -a / b
    r_stop = float(sol.r[-1])
    bound = max(r_star - r_stop, 0.0)
    return float(r_star), float(bound)


class NotEntire(ValueError):
    """Growth fit requested on a run that did not reach the budget."""


def entire_growth_coefficient(sol: ProfileSolution,
                              gamma: SymmetricCurvature | None = None) -> float:
    """Least-squares coefficient of r^(alpha+1) in u over the outer third of
    the grid.  For entire bowls this approaches
    1 / ((alpha + 1) * gamma(0, 1, ..., 1))."""
    if sol.is_ball:
        raise NotEntire("profile terminated in blow-up, not at the budget")
    gamma = gamma if gamma is not None else sol.gamma
    alpha = float(gamma.alpha)
    r_max = sol.r[-1]
    mask = sol.r >= (2.0 / 3.0) * r_max
    phi = sol.r[mask] ** (alpha + 1.0)
    return float(np.dot(sol.u[mask], phi) / np.dot(phi, phi))


@dataclass
class CylinderAsymptotics:
    lambda1_last: float
    lambda_tan_last: float
    r_max: float
    r_max_bound: float
    tan_deviation: float  # |lambda_tan(last) - 1/r_max|

    def to_dict(self) -> dict:
        return {
            "lambda1_last": self.lambda1_last,
            "lambda_tan_last": self.lambda_tan_last,
            "r_max": self.r_max,
            "r_max_bound": self.r_max_bound,
            "tan_deviation": self.tan_deviation,
        }


def curvature_asymptotics(sol: ProfileSolution) -> CylinderAsymptotics:
    """End behaviour of a ball-type run: the radial curvature should die and
    the tangential one should settle at the reciprocal ball radius."""
    if not sol.is_ball:
        raise ValueError("cylinder asymptotics only apply to ball-type runs")
    r_max, bound = blow_up_radius(sol)
    lam1 = float(sol.lambda_radial[-1])
    lam_t = float(sol.lambda_tangential[-1])
    return CylinderAsymptotics(
        lambda1_last=lam1, lambda_tan_last=lam_t, r_max=r_max,
        r_max_bound=bound, tan_deviation=abs(lam_t - 1.0 / r_max))


def translator_residuals(sol: ProfileSolution) -> np.ndarray:
    """|gamma(lambda) - (1+v^2)^(-1/2)| at every node, from the stored
    curvatures (independent assertion of the slope solve)."""
    gamma = sol.gamma
    out = np.empty(len(sol.r))
    for i in range(len(sol.r)):
        lam = [float(sol.lambda_radial[i])] + [float(sol.lambda_tangential[i])] * (gamma.n - 1)
        out[i] = abs(gamma._value(lam) - 1.0 / math.sqrt(1.0 + float(sol.v[i]) ** 2))
    return out


# ---------------------------------------------------------------------------
# degree-one cross checks
# ---------------------------------------------------------------------------

def mean_closed_form_slope(n: int, r: float, v: float) -> float:
    """For the curvature sum the primitive relation is linear in v'."""
    one_plus = 1.0 + v * v
    lam1 = 1.0 / math.sqrt(one_plus) - (n - 1) * v / (r * math.sqrt(one_plus))
    return max(lam1, 0.0) * one_plus ** 1.5


def composed_form_slope(gamma: SymmetricCurvature, r: float, v: float) -> float:
    """(1 + v^2) * f(v/r) with f from the constraint curve; valid only for
    homogeneity degree one, where the composed and primitive forms agree."""
    if float(gamma.alpha) != 1.0:
        raise ValueError("composed form is only cross-checked at degree one")
    curve = ConstraintCurve(gamma)
    return (1.0 + v * v) * solve_x(curve, v / r)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def profile_to_csv(sol: ProfileSolution) -> str:
    """CSV body with the documented header; floats are shortest round-trip
    so equal runs are byte-identical."""
    lines = ["r,v,u,lambda1,lambdatan"]
    for i in range(len(sol.r)):
        lines.append(",".join(repr(float(x)) for x in (
            sol.r[i], sol.v[i], sol.u[i],
            sol.lambda_radial[i], sol.lambda_tangential[i])))
    return "\n".join(lines) + "\n"


def profile_metadata(sol: ProfileSolution) -> dict:
    gamma = sol.gamma
    meta = {
        "library_version": __version__,
        "gamma_spec": gamma_to_dict(gamma),
        "alpha": float(gamma.alpha),
        "config": sol.config.to_dict(),
        "nodes": int(len(sol.r)),
        "r_last": float(sol.r[-1]),
        "v_last": float(sol.v[-1]),
        "u_last": float(sol.u[-1]),
        "r0_reference": float(gamma.value_at_ones() ** (1.0 / float(gamma.alpha))),
        "status": sol.status.kind,
    }
    if sol.is_ball:
        r_max, bound = blow_up_radius(sol)
        asym = curvature_asymptotics(sol)
        meta["r_max"] = r_max
        meta["r_max_bound"] = bound
        meta["cylinder_asymptotics"] = asym.to_dict()
    else:
        meta["r_budget"] = float(sol.status.r_budget)
        meta["growth_coefficient"] = entire_growth_coefficient(sol)
        gamma0 = gamma.gamma_zero()
        if gamma0 > 0:
            meta["growth_coefficient_reference"] = 1.0 / ((float(gamma.alpha) + 1.0) * gamma0)
    return meta


def profile_metadata_json(sol: ProfileSolution) -> str:
    return json.dumps(profile_metadata(sol), sort_keys=True, indent=2)
