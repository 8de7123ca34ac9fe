"""Fundamental forms, curvature fields and identity checks on sampled
hypersurfaces.

Two sample kinds are supported.

``GraphSample`` is a vertical graph over a grid in the horizontal plane with
the upward normal; its second fundamental form is D^2 u / W with
W = sqrt(1 + |Du|^2), so strictly convex graphs have positive principal
curvatures and the translator relation reads gamma(lambda) = 1/W.

``SurfaceSample`` is a closed parametric chart (spheres, ellipsoids) with
the outward normal and the Weingarten convention h_ij = <d_i nu, d_j X>, so
round spheres again carry positive curvatures.  With this orientation the
height function u = <p, e_vert> satisfies the intrinsic identity

    (dgamma/dh_ij) * Hess(u)_ij + alpha * gamma(lambda) * <nu, e_vert> = 0

on every immersed surface, translator or not; the residual field of that
identity is the refinement check.  On graphs the closed form
Hess(u) = -h * <nu, e_vert> is substituted instead, which turns the height
equation field into an exact multiple of the translator residual.

Cone policy for all fields: points strictly inside the cone are evaluated
directly, points on the closed cone go through the zero boundary extension,
everything else is masked; coverage is always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .curvature import SymmetricCurvature
from .errors import NoOverlap, PreconditionViolation, ValidationError
from .profile import ProfileSolution

__all__ = [
    "GraphSample",
    "SurfaceSample",
    "Field",
    "EllipticityReport",
    "shape_operator",
    "principal_curvatures",
    "principal_curvature_field",
    "translator_residual",
    "translator_height_equation",
    "height_identity_residual",
    "mean_laplacian_crosscheck",
    "linearization_ellipticity",
    "graph_from_profile",
    "sphere_sample",
    "ellipsoid_sample",
    "spheroid_pole_curvature",
]


# ---------------------------------------------------------------------------
# field container
# ---------------------------------------------------------------------------

@dataclass
class Field:
    """Scalar field over a sample grid with evaluation bookkeeping."""

    values: np.ndarray        # nan where not evaluated
    evaluated: np.ndarray     # bool mask of evaluated points
    max_abs: float
    coverage: float           # evaluated fraction of the candidate points
    masked_out: int           # candidate points excluded by the cone policy

    def to_dict(self) -> dict:
        return {
            "max_abs": self.max_abs,
            "coverage": self.coverage,
            "masked_out": self.masked_out,
            "points": int(self.evaluated.sum()),
        }


def _make_field(shape, candidates, values_flat, evaluated_flat) -> Field:
    values = np.full(shape, np.nan)
    evaluated = np.zeros(shape, dtype=bool)
    idx = np.where(candidates.reshape(-1))[0]
    flat_vals = np.full(idx.shape, np.nan)
    flat_vals[evaluated_flat] = values_flat
    values.reshape(-1)[idx] = flat_vals
    evaluated.reshape(-1)[idx] = evaluated_flat
    n_cand = int(candidates.sum())
    n_eval = int(evaluated_flat.sum())
    max_abs = float(np.max(np.abs(values_flat))) if n_eval else math.nan
    coverage = n_eval / n_cand if n_cand else 0.0
    return Field(values=values, evaluated=evaluated, max_abs=max_abs,
                 coverage=coverage, masked_out=n_cand - n_eval)


def _erode(mask: np.ndarray, cells: int) -> np.ndarray:
    out = mask.copy()
    for _ in range(cells):
        nxt = out.copy()
        for ax in range(out.ndim):
            lo = np.zeros_like(out)
            hi = np.zeros_like(out)
            sl_in = [slice(None)] * out.ndim
            sl_out = [slice(None)] * out.ndim
            sl_in[ax] = slice(1, None)
            sl_out[ax] = slice(None, -1)
            lo[tuple(sl_out)] = out[tuple(sl_in)]
            hi[tuple(sl_in)] = out[tuple(sl_out)]
            nxt &= lo & hi
        out = nxt
    return out


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

class GraphSample:
    """Vertical graph sampled on a uniform grid (box, or a masked ball).

    Derivatives are analytic when callables are supplied, otherwise central
    finite differences; in the latter case the two cells adjacent to the
    boundary are excluded from every reported field.
    """

    def __init__(self, axes, u, mask=None, du=None, d2u=None, analytic=False):
        self.axes = tuple(np.asarray(a, dtype=float) for a in axes)
        self.u = np.asarray(u, dtype=float)
        self.n = len(self.axes)
        expected = tuple(len(a) for a in self.axes)
        if self.u.shape != expected:
            raise ValidationError(
                f"height grid shape {self.u.shape} does not match axes {expected}")
        self.spacing = tuple(float(a[1] - a[0]) for a in self.axes)
        for a, h in zip(self.axes, self.spacing):
            if not np.allclose(np.diff(a), h, rtol=1e-10):
                raise ValidationError("axes must be uniformly spaced")
        base = np.isfinite(self.u)
        if mask is not None:
            base &= np.asarray(mask, dtype=bool)
        self.mask = base
        self.analytic = analytic
        if du is not None and d2u is not None:
            self.du = np.asarray(du, dtype=float)
            self.d2u = np.asarray(d2u, dtype=float)
            self.core = self.mask
        else:
            self.du, self.d2u = self._finite_differences()
            self.core = _erode(self.mask, 2)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, fn, axes, grad=None, hess=None, mask_fn=None):
        """Sample u = fn(points); grad/hess are optional analytic callables
        taking stacked coordinates of shape (n, ...)."""
        axes = tuple(np.asarray(a, dtype=float) for a in axes)
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(grids)
        u = fn(pts)
        mask = mask_fn(pts) if mask_fn is not None else None
        if grad is not None and hess is not None:
            return cls(axes, u, mask=mask, du=grad(pts), d2u=hess(pts), analytic=True)
        if mask is not None:
            u = np.where(mask, u, np.nan)
        return cls(axes, u, mask=mask)

    def _finite_differences(self):
        shape = self.u.shape
        u = np.where(self.mask, self.u, np.nan)
        du = np.empty((self.n,) + shape)
        for i in range(self.n):
            du[i] = np.gradient(u, self.spacing[i], axis=i)
        d2u = np.empty((self.n, self.n) + shape)
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    d2 = np.full(shape, np.nan)
                    sl_c = [slice(None)] * self.n
                    sl_p = [slice(None)] * self.n
                    sl_m = [slice(None)] * self.n
                    sl_c[i] = slice(1, -1)
                    sl_p[i] = slice(2, None)
                    sl_m[i] = slice(None, -2)
                    d2[tuple(sl_c)] = (
                        u[tuple(sl_p)] - 2.0 * u[tuple(sl_c)] + u[tuple(sl_m)]
                    ) / self.spacing[i] ** 2
                    d2u[i, j] = d2
                else:
                    d2u[i, j] = np.gradient(du[i], self.spacing[j], axis=j)
        return du, d2u

    # -- pointwise geometry --------------------------------------------------

    def gradient_at(self, point) -> np.ndarray:
        return self.du[(slice(None),) + tuple(point)]

    def hessian_at(self, point) -> np.ndarray:
        return self.d2u[(slice(None), slice(None)) + tuple(point)]


def shape_operator(sample: GraphSample, point) -> np.ndarray:
    """Weingarten matrix (I/W - Du Du^T/W^3) D^2u of the graph at a grid
    index; its eigenvalues are the principal curvatures for the upward
    normal."""
    du = sample.gradient_at(point)
    d2u = sample.hessian_at(point)
    w2 = 1.0 + float(du @ du)
    w = math.sqrt(w2)
    p = np.eye(sample.n) / w - np.outer(du, du) / w**3
    return p @ d2u


def _whitened_shape_batch(du_flat, d2u_flat):
    """Eigen-decomposition of the shape operator in the metric-orthonormal
    frame: returns (lam ascending, Q, L, W) for batched graph data."""
    m, n = du_flat.shape
    w = np.sqrt(1.0 + np.einsum("mi,mi->m", du_flat, du_flat))
    g = np.eye(n)[None] + np.einsum("mi,mj->mij", du_flat, du_flat)
    L = np.linalg.cholesky(g)
    h = d2u_flat / w[:, None, None]
    Linv = np.linalg.inv(L)
    s_hat = np.einsum("mab,mbc,mdc->mad", Linv, h, Linv)
    s_hat = 0.5 * (s_hat + np.swapaxes(s_hat, -1, -2))
    lam, q = np.linalg.eigh(s_hat)
    return lam, q, L, Linv, w


def principal_curvatures(sample, point) -> np.ndarray:
    """Principal curvatures at one grid index, ascending."""
    if isinstance(sample, GraphSample):
        du = sample.gradient_at(point)[None]
        d2u = sample.hessian_at(point)[None]
        lam, _, _, _, _ = _whitened_shape_batch(du, d2u)
        return lam[0]
    return _surface_curvatures_at(sample, point)


def principal_curvature_field(sample: GraphSample) -> np.ndarray:
    """(..., n) array of principal curvatures over the sample core, nan
    outside."""
    core = sample.core
    du_flat = sample.du.reshape(sample.n, -1).T[core.reshape(-1)]
    d2u_flat = sample.d2u.reshape(sample.n, sample.n, -1).transpose(2, 0, 1)[core.reshape(-1)]
    lam, _, _, _, _ = _whitened_shape_batch(du_flat, d2u_flat)
    out = np.full(core.shape + (sample.n,), np.nan)
    out[core] = lam
    return out


def _graph_flat_data(sample: GraphSample):
    core_flat = sample.core.reshape(-1)
    du_flat = sample.du.reshape(sample.n, -1).T[core_flat]
    d2u_flat = sample.d2u.reshape(sample.n, sample.n, -1).transpose(2, 0, 1)[core_flat]
    return core_flat, du_flat, d2u_flat


def _cone_split(gamma: SymmetricCurvature, lam: np.ndarray):
    strict = gamma.cone_mask_many(lam, strict=True)
    if gamma.extendable:
        closed = gamma.cone_mask_many(lam, strict=False)
        boundary = closed & ~strict
    else:
        boundary = np.zeros(len(lam), dtype=bool)
    return strict, boundary


def translator_residual(gamma: SymmetricCurvature, sample: GraphSample) -> Field:
    """gamma(lambda) - <nu, e_vert>; identically zero on a translator."""
    core_flat, du_flat, d2u_flat = _graph_flat_data(sample)
    lam, _, _, _, w = _whitened_shape_batch(du_flat, d2u_flat)
    strict, boundary = _cone_split(gamma, lam)
    vals = np.full(len(lam), np.nan)
    if strict.any():
        vals[strict] = gamma.evaluate_many(lam[strict])
    if boundary.any():
        vals[boundary] = gamma.extend_many(lam[boundary])
    evaluated = strict | boundary
    res = vals[evaluated] - 1.0 / w[evaluated]
    return _make_field(sample.u.shape, sample.core, res, evaluated)


def translator_height_equation(gamma: SymmetricCurvature, sample: GraphSample) -> Field:
    """Height-equation field: the degree-weighted second-order term built
    from the closed-form surface Hessian of the height, minus
    alpha * |grad u|^2 plus alpha.  Vanishes exactly on translators."""
    core_flat, du_flat, d2u_flat = _graph_flat_data(sample)
    lam, _, _, _, w = _whitened_shape_batch(du_flat, d2u_flat)
    strict, boundary = _cone_split(gamma, lam)
    alpha = float(gamma.alpha)
    # Hess(u) = -h <nu,e>: contraction of dgamma with it collapses by the
    # degree identity to -<grad гamma(lam), lam>/W; boundary points use the
    # extension through the same identity.
    second_order = np.full(len(lam), np.nan)
    if strict.any():
        grads = gamma.gradient_many(lam[strict])
        second_order[strict] = -np.einsum("mi,mi->m", grads, lam[strict]) / w[strict]
    if boundary.any():
        second_order[boundary] = -alpha * gamma.extend_many(lam[boundary]) / w[boundary]
    evaluated = strict | boundary
    grad_sq = 1.0 - 1.0 / w[evaluated] ** 2  # intrinsic |grad u|^2
    vals = second_order[evaluated] - alpha * grad_sq + alpha
    return _make_field(sample.u.shape, sample.core, vals, evaluated)


# ---------------------------------------------------------------------------
# rotational graphs from profile solutions
# ---------------------------------------------------------------------------

def graph_from_profile(sol: ProfileSolution, radius: float, m: int,
                       bump=None) -> GraphSample:
    """Graph of the rotational profile over the ball of the given radius,
    with analytic derivatives from Hermite splines of the profile data
    (slopes and their derivatives are interpolated with exact node values).

    ``bump`` may be a (amplitude, center, width) triple adding an off-axis
    Gaussian to break the rotational symmetry deliberately.
    """
    if radius >= sol.r[-1]:
        raise ValidationError("requested radius exceeds the computed profile")
    r_nodes = np.concatenate([[0.0], sol.r])
    u_nodes = np.concatenate([[0.0], sol.u])
    v_nodes = np.concatenate([[0.0], sol.v])
    vdot_nodes = np.concatenate(
        [[sol.lambda_radial[0]],
         sol.lambda_radial * (1.0 + sol.v**2) ** 1.5])
    u_spline = CubicHermiteSpline(r_nodes, u_nodes, v_nodes)
    v_spline = CubicHermiteSpline(r_nodes, v_nodes, vdot_nodes)
    c0 = float(vdot_nodes[0])

    def parts(pts):
        rho = np.sqrt(np.sum(pts**2, axis=0))
        small = rho < 1e-9
        rho_safe = np.where(small, 1.0, rho)
        up = v_spline(rho)
        upp = v_spline(rho, 1)
        radial = np.where(small, 0.0, up / rho_safe)
        return rho, rho_safe, up, upp, radial, small

    def fn(pts):
        rho = np.sqrt(np.sum(pts**2, axis=0))
        base = u_spline(rho)
        if bump is not None:
            amp, center, width = bump
            d2 = sum((pts[i] - center[i]) ** 2 for i in range(len(center)))
            base = base + amp * np.exp(-d2 / width**2)
        return base

    if bump is None:
        def grad(pts):
            rho, rho_safe, up, upp, radial, small = parts(pts)
            return pts * np.where(small, c0, radial)

        def hess(pts):
            rho, rho_safe, up, upp, radial, small = parts(pts)
            nhat = pts / rho_safe
            eye = np.eye(pts.shape[0]).reshape(
                (pts.shape[0], pts.shape[0]) + (1,) * (pts.ndim - 1))
            outer = nhat[None, :] * nhat[:, None]
            rad = np.where(small, c0, radial)
            d2 = outer * np.where(small, c0, upp) + (eye - outer) * rad
            return d2
    else:
        grad = hess = None  # finite differences pick up the bump

    axes = tuple(np.linspace(-radius, radius, m) for _ in range(2))

    def mask_fn(pts):
        return np.sum(pts**2, axis=0) <= radius**2

    return GraphSample.from_function(fn, axes, grad=grad, hess=hess, mask_fn=mask_fn)


# ---------------------------------------------------------------------------
# parametric closed surfaces (two-dimensional charts in 3-space)
# ---------------------------------------------------------------------------

class SurfaceSample:
    """Band of a closed parametric surface with analytic first/second
    fundamental forms, outward unit normal and the height u = X_z.

    The chart callable returns position and first/second parameter
    derivatives; phi is periodic, theta is a band avoiding chart poles.
    """

    def __init__(self, theta, phi, X, Xt, Xp, Xtt, Xtp, Xpp, hess_u=None):
        self.theta = theta
        self.phi = phi
        self.X = X
        nu = np.cross(Xt, Xp)
        nu /= np.linalg.norm(nu, axis=-1, keepdims=True)
        # orient outward (positive mean distance from the centroid direction)
        centroid = X.reshape(-1, 3).mean(axis=0)
        sign = np.sign(np.mean(np.einsum("ijk,ijk->ij", nu, X - centroid)))
        nu *= sign if sign != 0 else 1.0
        self.nu = nu
        self.g = np.empty(X.shape[:2] + (2, 2))
        self.g[..., 0, 0] = np.einsum("ijk,ijk->ij", Xt, Xt)
        self.g[..., 0, 1] = np.einsum("ijk,ijk->ij", Xt, Xp)
        self.g[..., 1, 0] = self.g[..., 0, 1]
        self.g[..., 1, 1] = np.einsum("ijk,ijk->ij", Xp, Xp)
        # h_ij = <d_i nu, d_j X> = -<d_i d_j X, nu>: positive on spheres
        # with the outward normal
        self.h = np.empty_like(self.g)
        self.h[..., 0, 0] = -np.einsum("ijk,ijk->ij", Xtt, nu)
        self.h[..., 0, 1] = -np.einsum("ijk,ijk->ij", Xtp, nu)
        self.h[..., 1, 0] = self.h[..., 0, 1]
        self.h[..., 1, 1] = -np.einsum("ijk,ijk->ij", Xpp, nu)
        self.u = X[..., 2]
        self.hess_u = hess_u
        self.spacing = (float(theta[1] - theta[0]), float(phi[1] - phi[0]))
        # theta band edges lose 2 cells to one-sided stencils; phi wraps
        core = np.ones(X.shape[:2], dtype=bool)
        core[:2, :] = False
        core[-2:, :] = False
        self.core = core

    @classmethod
    def from_chart(cls, chart, n_theta, n_phi, band, hess_u_fn=None):
        theta = np.linspace(band[0], band[1], n_theta)
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        X, Xt, Xp, Xtt, Xtp, Xpp = chart(tt, pp)
        hess_u = hess_u_fn(tt, pp) if hess_u_fn is not None else None
        return cls(theta, phi, X, Xt, Xp, Xtt, Xtp, Xpp, hess_u=hess_u)

    # -- intrinsic derivatives (phi periodic, theta banded) ------------------

    def _d(self, arr, axis):
        h = self.spacing[axis]
        if axis == 1:
            return (np.roll(arr, -1, axis=1) - np.roll(arr, 1, axis=1)) / (2 * h)
        return np.gradient(arr, h, axis=0)

    def intrinsic_hessian_u(self) -> np.ndarray:
        """Hess(u)_ij = d_i d_j u - Gamma^k_ij d_k u with Christoffel symbols
        from finite differences of the metric (the analytic Hessian is used
        when the factory provided one)."""
        if self.hess_u is not None:
            return self.hess_u
        du = np.stack([self._d(self.u, 0), self._d(self.u, 1)])
        d2u = np.empty(self.u.shape + (2, 2))
        d2u[..., 0, 0] = self._d(du[0], 0)
        d2u[..., 0, 1] = self._d(du[0], 1)
        d2u[..., 1, 0] = d2u[..., 0, 1]
        d2u[..., 1, 1] = self._d(du[1], 1)
        dg = np.stack([self._d(self.g, 0), self._d(self.g, 1)])  # (l, ..., i, j)
        ginv = np.linalg.inv(self.g)
        # Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
        gamma_l = np.empty(self.u.shape + (2, 2, 2))  # (..., l, i, j)
        for l in range(2):
            for i in range(2):
                for j in range(2):
                    gamma_l[..., l, i, j] = 0.5 * (
                        dg[i][..., j, l] + dg[j][..., i, l] - dg[l][..., i, j])
        christoffel = np.einsum("...kl,...lij->...kij", ginv, gamma_l)
        correction = np.einsum("...kij,k...->...ij", christoffel,
                               du.reshape((2,) + self.u.shape))
        return d2u - correction


def _surface_flat_data(sample: SurfaceSample):
    core_flat = sample.core.reshape(-1)
    g_flat = sample.g.reshape(-1, 2, 2)[core_flat]
    h_flat = sample.h.reshape(-1, 2, 2)[core_flat]
    return core_flat, g_flat, h_flat


def _whitened_surface_batch(g_flat, h_flat):
    L = np.linalg.cholesky(g_flat)
    Linv = np.linalg.inv(L)
    s_hat = np.einsum("mab,mbc,mdc->mad", Linv, h_flat, Linv)
    s_hat = 0.5 * (s_hat + np.swapaxes(s_hat, -1, -2))
    lam, q = np.linalg.eigh(s_hat)
    return lam, q, L, Linv


def _surface_curvatures_at(sample: SurfaceSample, point) -> np.ndarray:
    g = sample.g[tuple(point)][None]
    h = sample.h[tuple(point)][None]
    lam, _, _, _ = _whitened_surface_batch(g, h)
    return lam[0]


def height_identity_residual(gamma: SymmetricCurvature,
                             sample: SurfaceSample) -> Field:
    """(dgamma/dh_ij) Hess(u)_ij + alpha gamma(lambda) <nu, e_vert> with the
    Hessian computed intrinsically; an identity on any surface, so the field
    must vanish under refinement."""
    core_flat, g_flat, h_flat = _surface_flat_data(sample)
    lam, q, L, Linv = _whitened_surface_batch(g_flat, h_flat)
    strict, boundary = _cone_split(gamma, lam)
    evaluated = strict  # the gradient contraction needs the open cone
    hess = sample.intrinsic_hessian_u().reshape(-1, 2, 2)[core_flat]
    nu_e = sample.nu[..., 2].reshape(-1)[core_flat]
    alpha = float(gamma.alpha)

    vals = np.full(len(lam), np.nan)
    if strict.any():
        grads = gamma.gradient_many(lam[strict])
        g_hat = np.einsum("mik,mk,mjk->mij", q[strict], grads, q[strict])
        # dgamma/dh = L^-T Ghat L^-1 in chart indices
        dgamma_dh = np.einsum("mji,mjk,mkl->mil", Linv[strict], g_hat, Linv[strict])
        second = np.einsum("mij,mij->m", dgamma_dh, hess[strict])
        vals[strict] = second + alpha * gamma.evaluate_many(lam[strict]) * nu_e[strict]
    return _make_field(sample.u.shape, sample.core, vals[evaluated], evaluated)


def mean_laplacian_crosscheck(sample: SurfaceSample) -> Field:
    """Classical identity for the curvature sum: the intrinsic Laplacian of
    the height equals minus (sum of curvatures) times <nu, e_vert>."""
    core_flat, g_flat, h_flat = _surface_flat_data(sample)
    lam, _, _, _ = _whitened_surface_batch(g_flat, h_flat)
    hess = sample.intrinsic_hessian_u().reshape(-1, 2, 2)[core_flat]
    ginv = np.linalg.inv(g_flat)
    laplace = np.einsum("mij,mij->m", ginv, hess)
    nu_e = sample.nu[..., 2].reshape(-1)[core_flat]
    res = laplace + lam.sum(axis=1) * nu_e
    evaluated = np.ones(len(lam), dtype=bool)
    return _make_field(sample.u.shape, sample.core, res, evaluated)


# ---------------------------------------------------------------------------
# chart factories
# ---------------------------------------------------------------------------

def ellipsoid_chart(a: float, b: float, c: float):
    def chart(tt, pp):
        st, ct = np.sin(tt), np.cos(tt)
        sp, cp = np.sin(pp), np.cos(pp)
        X = np.stack([a * st * cp, b * st * sp, c * ct], axis=-1)
        Xt = np.stack([a * ct * cp, b * ct * sp, -c * st], axis=-1)
        Xp = np.stack([-a * st * sp, b * st * cp, np.zeros_like(tt)], axis=-1)
        Xtt = np.stack([-a * st * cp, -b * st * sp, -c * ct], axis=-1)
        Xtp = np.stack([-a * ct * sp, b * ct * cp, np.zeros_like(tt)], axis=-1)
        Xpp = np.stack([-a * st * cp, -b * st * sp, np.zeros_like(tt)], axis=-1)
        return X, Xt, Xp, Xtt, Xtp, Xpp
    return chart


def ellipsoid_sample(a, b, c, n_theta=96, n_phi=96,
                     band=(0.35, math.pi - 0.35)) -> SurfaceSample:
    return SurfaceSample.from_chart(ellipsoid_chart(a, b, c), n_theta, n_phi, band)


def sphere_sample(radius, n_theta=96, n_phi=96, band=(0.35, math.pi - 0.35),
                  analytic_hessian=True) -> SurfaceSample:
    """Round sphere band; the intrinsic height Hessian has the closed form
    -R cos(theta) diag(1, sin^2 theta), supplied analytically by default."""
    hess_fn = None
    if analytic_hessian:
        def hess_fn(tt, pp):
            out = np.zeros(tt.shape + (2, 2))
            out[..., 0, 0] = -radius * np.cos(tt)
            out[..., 1, 1] = -radius * np.cos(tt) * np.sin(tt) ** 2
            return out
    return SurfaceSample.from_chart(
        ellipsoid_chart(radius, radius, radius), n_theta, n_phi, band,
        hess_u_fn=hess_fn)


def spheroid_pole_curvature(a: float, c: float) -> float:
    """Closed-form principal curvature (both directions) at the poles of a
    spheroid with equatorial semi-axis a and polar semi-axis c."""
    return c / (a * a)


def spheroid_curvatures(a: float, c: float, theta: float) -> tuple[float, float]:
    """Closed-form meridian and parallel curvatures of a spheroid at polar
    angle theta (independent oracle for the eigensolve)."""
    d = math.sqrt(a * a * math.cos(theta) ** 2 + c * c * math.sin(theta) ** 2)
    return a * c / d**3, c / (a * d)


# ---------------------------------------------------------------------------
# linearization ellipticity
# ---------------------------------------------------------------------------

@dataclass
class EllipticitySlice:
    s: float
    strictly_convex: bool
    min_shape_eigenvalue: float
    ellipticity_constant: float | None
    max_abs_difference: float | None  # sup |gamma(lam_s) - <nu_s, e_vert>|

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "strictly_convex": self.strictly_convex,
            "min_shape_eigenvalue": self.min_shape_eigenvalue,
            "ellipticity_constant": self.ellipticity_constant,
            "max_abs_difference": self.max_abs_difference,
        }


@dataclass
class EllipticityReport:
    slices: list
    points: int

    def to_dict(self) -> dict:
        return {"points": self.points,
                "slices": [s.to_dict() for s in self.slices]}


def linearization_ellipticity(gamma: SymmetricCurvature, u1: GraphSample,
                              u2: GraphSample, s_grid) -> EllipticityReport:
    """Convex combinations u_s = (1-s) u1 + s u2: verify strict convexity
    and positive definiteness of the second-order coefficient matrix of the
    linearized translator operator, reporting the minimum eigenvalue over
    the shared domain (the uniform ellipticity constant).

    Preconditions: u1 strictly convex, u2 convex (positive semi-definite
    shape operator).
    """
    if u1.axes[0].shape != u2.axes[0].shape or any(
            not np.allclose(a1, a2) for a1, a2 in zip(u1.axes, u2.axes)):
        raise ValidationError("graphs must share a common grid")
    core = u1.core & u2.core
    if not core.any():
        raise NoOverlap("the two graphs share no valid core points")
    core_flat = core.reshape(-1)
    n = u1.n

    def flat(sample):
        du = sample.du.reshape(n, -1).T[core_flat]
        d2u = sample.d2u.reshape(n, n, -1).transpose(2, 0, 1)[core_flat]
        return du, d2u

    du1, d2u1 = flat(u1)
    du2, d2u2 = flat(u2)

    lam1, _, _, _, _ = _whitened_shape_batch(du1, d2u1)
    if lam1.min() <= 0.0:
        bad = int(np.argmin(lam1.min(axis=1)))
        point = tuple(np.argwhere(core)[bad])
        raise PreconditionViolation(
            f"first graph is not strictly convex at grid point {point}",
            point=point)
    lam2, _, _, _, _ = _whitened_shape_batch(du2, d2u2)
    scale2 = float(np.abs(lam2).max())
    if lam2.min() < -1e-10 * max(scale2, 1.0):
        bad = int(np.argmin(lam2.min(axis=1)))
        point = tuple(np.argwhere(core)[bad])
        raise PreconditionViolation(
            f"second graph is not convex at grid point {point}", point=point)

    slices = []
    for s in s_grid:
        du_s = (1.0 - s) * du1 + s * du2
        d2u_s = (1.0 - s) * d2u1 + s * d2u2
        lam, q, L, Linv, w = _whitened_shape_batch(du_s, d2u_s)
        min_eig = float(lam.min())
        strictly_convex = bool(min_eig > 0.0)
        strict = gamma.cone_mask_many(lam, strict=True)
        ell = None
        max_e = None
        if strict.all():
            grads = gamma.gradient_many(lam)
            g_hat = np.einsum("mik,mk,mjk->mij", q, grads, q)
            coeff = np.einsum("mji,mjk,mkl->mil", Linv, g_hat, Linv) / w[:, None, None]
            coeff = 0.5 * (coeff + np.swapaxes(coeff, -1, -2))
            eigs = np.linalg.eigvalsh(coeff)
            ell = float(eigs.min())
            max_e = float(np.abs(gamma.evaluate_many(lam) - 1.0 / w).max())
        elif gamma.extendable:
            closed = gamma.cone_mask_many(lam, strict=False)
            if closed.all():
                max_e = float(np.abs(gamma.extend_many(lam) - 1.0 / w).max())
        slices.append(EllipticitySlice(
            s=float(s), strictly_convex=strictly_convex,
            min_shape_eigenvalue=min_eig, ellipticity_constant=ell,
            max_abs_difference=max_e))
    return EllipticityReport(slices=slices, points=int(core.sum()))


# ---------------------------------------------------------------------------
# field export
# ---------------------------------------------------------------------------

def field_to_csv(sample, fld: Field) -> str:
    """Point coordinates plus field value for every evaluated point."""
    lines = []
    if isinstance(sample, GraphSample):
        lines.append(",".join(f"x{i+1}" for i in range(sample.n)) + ",value")
        grids = np.meshgrid(*sample.axes, indexing="ij")
        coords = np.stack([g.reshape(-1) for g in grids])
        flat_v = fld.values.reshape(-1)
        flat_e = fld.evaluated.reshape(-1)
        for idx in np.where(flat_e)[0]:
            row = [repr(float(coords[i, idx])) for i in range(sample.n)]
            lines.append(",".join(row + [repr(float(flat_v[idx]))]))
    else:
        lines.append("x,y,z,value")
        pts = sample.X.reshape(-1, 3)
        flat_v = fld.values.reshape(-1)
        flat_e = fld.evaluated.reshape(-1)
        for idx in np.where(flat_e)[0]:
            row = [repr(float(c)) for c in pts[idx]]
            lines.append(",".join(row + [repr(float(flat_v[idx]))]))
    return "\n".join(lines) + "\n"
