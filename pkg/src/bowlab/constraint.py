"""The implicit curve gamma(x, y, ..., y) = 1 and the entire/ball classifier.

The curve resolves to x = f(y) by monotonicity of the curvature function in
its first slot.  Its behaviour as y -> infinity decides whether the
rotationally symmetric bowl-type translator is an entire graph or lives on a
ball:

* boundary value gamma(0, 1, ..., 1) > 0          -> entire
* f(y) -> L > 0                                   -> ball
* f(y) -> 0 at rate y^-k with k >= 2*alpha - 1    -> entire
* f(y) -> 0 at rate y^-k with 0 < k < 2*alpha - 1 -> ball

The classifier turns these asymptotic statements into a finite procedure:
probe the curve on a logarithmic grid, estimate L and the decay exponent by
least squares, and apply explicit thresholds (all surfaced in the result).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import SymmetricCurvature, gamma_to_dict
from .errors import NoBracket, NotExtendable

__all__ = [
    "ConstraintCurve",
    "ClassifierConfig",
    "ClassificationResult",
    "LimitEstimate",
    "DecayFit",
    "solve_x",
    "limit_L",
    "decay_exponent",
    "classify",
]

_X_FLOOR = 1e-300
_X_CAP = 1e12
_X_SEED = 1e-12


@dataclass(frozen=True)
class ConstraintCurve:
    """Level set gamma(x, y, ..., y) = 1 with the cached umbilic point
    c0 = gamma(1,...,1)^(-1/alpha), where the curve crosses x = y."""

    gamma: SymmetricCurvature
    c0: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "c0", self.gamma.umbilic_value())

    def residual(self, x: float, y: float) -> float:
        lam = [x] + [y] * (self.gamma.n - 1)
        return self.gamma._value(lam) - 1.0


def _first_slot_value(gamma: SymmetricCurvature, x: float, y: float) -> float:
    return gamma._value([x] + [y] * (gamma.n - 1))


def solve_first_slot(gamma: SymmetricCurvature, y: float, target: float,
                     residual_tol: float = 1e-13,
                     seed: float | None = None) -> float:
    """Solve gamma(x, y, ..., y) = target for the unique x > 0.

    Bracketing walks a geometric ladder from the seed (default 1e-12):
    doubling upward toward the cap when the level has not been reached,
    halving downward when the seed already overshoots (roots can sit far
    below the seed for strongly decaying curves).  Monotonicity in the first
    slot is asserted while walking; the bracket is then closed by bisection
    and polished with secant steps.

    Raised NoBracket errors carry a ``flavor`` attribute:
    ``exceeded_at_zero`` (level already met as x -> 0+), ``below_at_cap``
    (level unreachable below the cap) or ``not_monotone``.
    """
    if y <= 0.0 or not math.isfinite(y):
        raise NoBracket(f"curve is only probed at y > 0, got y={y}")

    def g(x: float) -> float:
        return _first_slot_value(gamma, x, y) - target

    x0 = seed if (seed is not None and _X_FLOOR < seed < _X_CAP) else _X_SEED
    g0 = g(x0)
    if abs(g0) <= residual_tol:
        return x0
    if g0 > 0.0:
        # level already exceeded near x = 0+: walk down
        lo_x, lo_g = None, None
        hi_x, hi_g = x0, g0
        x = x0
        while x > _X_FLOOR:
            x *= 0.5
            gx = g(x)
            if gx > hi_g + 1e-9 * abs(hi_g):
                exc = NoBracket(
                    f"gamma(x, {y}, ...) is not increasing in x near x={x}")
                exc.flavor = "not_monotone"
                raise exc
            if gx <= 0.0:
                lo_x, lo_g = x, gx
                break
            if gx == hi_g:
                # value numerically stagnant above the level: no crossing
                break
            hi_x, hi_g = x, gx
        if lo_x is None:
            if abs(hi_g) <= residual_tol:
                return hi_x
            exc = NoBracket(
                f"gamma(x, {y}, ...) stays above {target} for all x -> 0+ "
                f"(y outside the curve's domain)")
            exc.flavor = "exceeded_at_zero"
            raise exc
    else:
        lo_x, lo_g = x0, g0
        hi_x, hi_g = None, None
        x = x0
        while x < _X_CAP:
            x *= 2.0
            gx = g(x)
            if gx < lo_g - 1e-9 * abs(lo_g):
                exc = NoBracket(
                    f"gamma(x, {y}, ...) is not increasing in x near x={x}")
                exc.flavor = "not_monotone"
                raise exc
            if gx >= 0.0:
                hi_x, hi_g = x, gx
                break
            lo_x, lo_g = x, gx
        if hi_x is None:
            exc = NoBracket(
                f"gamma(x, {y}, ...) stays below {target} up to x={_X_CAP} "
                f"(y outside the curve's domain)")
            exc.flavor = "below_at_cap"
            raise exc

    # close the bracket by bisection, then secant-polish
    for _ in range(200):
        if abs(lo_g) <= residual_tol:
            return lo_x
        if abs(hi_g) <= residual_tol:
            return hi_x
        mid = 0.5 * (lo_x + hi_x)
        if not lo_x < mid < hi_x:
            break
        gm = g(mid)
        if gm <= 0.0:
            lo_x, lo_g = mid, gm
        else:
            hi_x, hi_g = mid, gm
        if hi_x - lo_x < 1e-6 * hi_x:
            break
    x_prev, g_prev = lo_x, lo_g
    x_cur, g_cur = hi_x, hi_g
    for _ in range(80):
        if abs(g_cur) <= residual_tol:
            return x_cur
        denom = g_cur - g_prev
        if denom == 0.0:
            break
        x_next = x_cur - g_cur * (x_cur - x_prev) / denom
        if not lo_x <= x_next <= hi_x:
            x_next = 0.5 * (lo_x + hi_x)
        g_next = g(x_next)
        if g_next <= 0.0:
            lo_x, lo_g = x_next, g_next
        else:
            hi_x, hi_g = x_next, g_next
        x_prev, g_prev = x_cur, g_cur
        x_cur, g_cur = x_next, g_next
    # fall back to the best bracket endpoint
    return lo_x if abs(lo_g) <= abs(hi_g) else hi_x


def solve_x(curve: ConstraintCurve, y: float, residual_tol: float = 1e-13) -> float:
    """x = f(y) on the unit level set; |gamma(x,y,...,y) - 1| <= 1e-12."""
    return solve_first_slot(curve.gamma, y, 1.0, residual_tol=residual_tol)


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

@dataclass
class LimitEstimate:
    value: float
    converged: bool
    probes: list  # (y, f(y)) pairs on the decade grid


@dataclass
class DecayFit:
    k: float
    r_squared: float
    points: list  # (y, f(y)) pairs used in the fit


@dataclass(frozen=True)
class ClassifierConfig:
    tol_pos: float = 1e-3
    margin: float = 0.05
    fit_floor: float = 0.99
    decade_lo: int = 2
    decade_hi: int = 6
    fit_points: int = 25

    def to_dict(self) -> dict:
        return {
            "tol_pos": self.tol_pos,
            "margin": self.margin,
            "fit_floor": self.fit_floor,
            "decade_lo": self.decade_lo,
            "decade_hi": self.decade_hi,
            "fit_points": self.fit_points,
        }


def limit_L(curve: ConstraintCurve, config: ClassifierConfig = ClassifierConfig()) -> LimitEstimate:
    """Estimate lim f(y) on the decade grid y = 10^lo .. 10^hi.

    `converged` is set when the last two probes agree to 1e-3 relative, or
    both sit below 1e-9 absolute, in which case the limit is reported as an
    exact 0.
    """
    probes = []
    for d in range(config.decade_lo, config.decade_hi + 1):
        y = 10.0 ** d
        probes.append((y, solve_x(curve, y)))
    f_prev, f_last = probes[-2][1], probes[-1][1]
    if abs(f_prev) < 1e-9 and abs(f_last) < 1e-9:
        return LimitEstimate(0.0, True, probes)
    converged = abs(f_last - f_prev) < 1e-3 * abs(f_prev)
    return LimitEstimate(f_last, converged, probes)


def decay_exponent(curve: ConstraintCurve, config: ClassifierConfig = ClassifierConfig()) -> DecayFit:
    """Least-squares slope of log f against log y on the log-spaced grid;
    the exponent k is the negated slope."""
    ys = np.logspace(config.decade_lo, config.decade_hi, config.fit_points)
    points = [(float(y), solve_x(curve, float(y))) for y in ys]
    log_y = np.log([p[0] for p in points])
    log_f = np.log([p[1] for p in points])
    slope, intercept = np.polyfit(log_y, log_f, 1)
    fitted = slope * log_y + intercept
    ss_res = float(np.sum((log_f - fitted) ** 2))
    ss_tot = float(np.sum((log_f - log_f.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(k=float(-slope), r_squared=r2, points=points)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class ClassificationResult:
    verdict: str  # "Entire" | "Ball" | "Undetermined"
    gamma0: float
    threshold: float  # 2*alpha - 1
    L_estimate: float | None
    L_converged: bool | None
    k_estimate: float | None
    fit_quality: float | None
    evidence: str
    probes: list
    config: ClassifierConfig

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "gamma0": self.gamma0,
            "threshold": self.threshold,
            "L_estimate": self.L_estimate,
            "L_converged": self.L_converged,
            "k_estimate": self.k_estimate,
            "fit_quality": self.fit_quality,
            "evidence": self.evidence,
            "probes": [[y, x] for y, x in self.probes],
            "config": self.config.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def classify(gamma: SymmetricCurvature,
             config: ClassifierConfig = ClassifierConfig()) -> ClassificationResult:
    """Decide Entire / Ball / Undetermined for the bowl-type translator.

    Decision order: positive boundary value wins immediately; otherwise the
    curve limit L, then the decay exponent against the critical value
    2*alpha - 1.  A fitted exponent at or margin-close to the critical value
    counts as entire (the critical decay itself satisfies the big-O entire
    condition); only exponents clearly below it give a ball.  Poor fits give
    Undetermined rather than a guess.
    """
    if not gamma.extendable:
        raise NotExtendable(
            f"{gamma.name()} has no boundary extension, so the dichotomy "
            "criteria do not apply")
    alpha = float(gamma.alpha)
    threshold = 2.0 * alpha - 1.0
    gamma0 = gamma.gamma_zero()
    curve = ConstraintCurve(gamma)

    if gamma0 > config.tol_pos:
        return ClassificationResult(
            verdict="Entire", gamma0=gamma0, threshold=threshold,
            L_estimate=None, L_converged=None, k_estimate=None,
            fit_quality=None,
            evidence=f"boundary value gamma(0,1,...,1) = {gamma0:.6g} > "
                     f"{config.tol_pos} (entire branch)",
            probes=[], config=config)

    try:
        lim = limit_L(curve, config)
    except NoBracket as exc:
        # curve domain in y is bounded; with the boundary value not positive
        # nothing else decides
        return ClassificationResult(
            verdict="Undetermined", gamma0=gamma0, threshold=threshold,
            L_estimate=None, L_converged=None, k_estimate=None,
            fit_quality=None,
            evidence=f"curve domain bounded in y ({exc}) and "
                     f"gamma(0,1,...,1) = {gamma0:.6g} not positive",
            probes=[], config=config)

    if lim.value > config.tol_pos:
        return ClassificationResult(
            verdict="Ball", gamma0=gamma0, threshold=threshold,
            L_estimate=lim.value, L_converged=lim.converged,
            k_estimate=None, fit_quality=None,
            evidence=f"curve limit L = {lim.value:.6g} > {config.tol_pos} "
                     "(ball branch)",
            probes=lim.probes, config=config)

    fit = decay_exponent(curve, config)
    if fit.r_squared < config.fit_floor:
        verdict = "Undetermined"
        evidence = (f"decay fit quality {fit.r_squared:.6g} below floor "
                    f"{config.fit_floor}")
    elif fit.k >= threshold - config.margin:
        verdict = "Entire"
        evidence = (f"decay exponent k = {fit.k:.6g} >= 2*alpha-1 - margin "
                    f"= {threshold - config.margin:.6g} (critical or faster "
                    "decay: entire branch)")
    elif fit.k > 0.0:
        verdict = "Ball"
        evidence = (f"decay exponent k = {fit.k:.6g} in (0, "
                    f"{threshold - config.margin:.6g}) (slow decay: ball "
                    "branch)")
    else:
        verdict = "Undetermined"
        evidence = f"fitted exponent k = {fit.k:.6g} not positive"
    return ClassificationResult(
        verdict=verdict, gamma0=gamma0, threshold=threshold,
        L_estimate=lim.value, L_converged=lim.converged,
        k_estimate=fit.k, fit_quality=fit.r_squared,
        evidence=evidence, probes=fit.points, config=config)


def classification_report(gamma: SymmetricCurvature,
                          result: ClassificationResult) -> dict:
    """Full JSON-ready report embedding the curvature-function spec."""
    out = result.to_dict()
    out["gamma_spec"] = gamma_to_dict(gamma)
    out["alpha"] = float(gamma.alpha)
    return out
