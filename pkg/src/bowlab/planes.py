"""Moving-plane machinery on sampled surfaces.

The reflection order "B is left of A" compares, fiber by fiber over the
projection that forgets the first coordinate, the supremum of B's first
coordinates against the infimum of A's.  Point clouds have measure-zero
fibers, so fibers are discretized into projection cells; the cell size and
tolerance are part of every report.  Cell noise scales like the cell size
times the slope of the surface over the projection plane, so scans over
sampled surfaces need tolerances matched to the sampling pitch (the
defaults record exactly what was used).

Also provides the vertical first-touch shift between two graphs, the
numerical counterpart to translating one translator down onto another.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import NoOverlap, ValidationError
from .geometry import GraphSample
from .profile import ProfileSolution

__all__ = [
    "PointCloudSurface",
    "ReflectionReport",
    "TouchReport",
    "split_and_reflect",
    "reflect_points",
    "order_leq",
    "symmetry_scan",
    "first_touch_shift",
    "scan_to_json",
    "heatmap_to_csv",
]


@dataclass(frozen=True)
class PointCloudSurface:
    """Finite point sample of a hypersurface in (n+1)-space.

    The first coordinate is the moving-plane axis; the projection keeps all
    remaining coordinates (including the height).  ``pitch`` is the typical
    sampling distance used to pick default cell sizes.
    """

    points: np.ndarray
    pitch: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] < 2:
            raise ValidationError("point cloud must be (m, d>=2)")
        if not np.isfinite(pts).all():
            raise ValidationError("point cloud contains non-finite entries")
        object.__setattr__(self, "points", pts)

    @property
    def x1(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def projection(self) -> np.ndarray:
        return self.points[:, 1:]

    def diameter(self) -> float:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    # -- factories -----------------------------------------------------------

    @classmethod
    def from_graph(cls, sample: GraphSample) -> "PointCloudSurface":
        grids = np.meshgrid(*sample.axes, indexing="ij")
        sel = sample.mask
        cols = [g[sel] for g in grids] + [sample.u[sel]]
        return cls(np.stack(cols, axis=1), pitch=max(sample.spacing))

    @classmethod
    def rotational(cls, sol: ProfileSolution, radius: float, n_r: int,
                   n_phi: int, bump=None) -> "PointCloudSurface":
        """Cloud of the rotational profile graph on phi x rho grid; even
        n_phi keeps the cloud exactly mirror-symmetric.  ``bump`` is an
        (amplitude, center, width) height perturbation."""
        if radius >= sol.r[-1]:
            raise ValidationError("requested radius exceeds the computed profile")
        u_spline = CubicHermiteSpline(
            np.concatenate([[0.0], sol.r]),
            np.concatenate([[0.0], sol.u]),
            np.concatenate([[0.0], sol.v]))
        rho = np.linspace(radius / n_r, radius, n_r)
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        rr, pp = np.meshgrid(rho, phi, indexing="ij")
        x = rr * np.cos(pp)
        y = rr * np.sin(pp)
        z = u_spline(rr)
        if bump is not None:
            amp, center, width = bump
            z = z + amp * np.exp(-((x - center[0]) ** 2 + (y - center[1]) ** 2)
                                 / width**2)
        pts = np.stack([x.reshape(-1), y.reshape(-1), z.reshape(-1)], axis=1)
        pitch = max(radius / n_r, radius * 2.0 * math.pi / n_phi)
        return cls(pts, pitch=pitch)

    @classmethod
    def cylinder(cls, radius: float, height: float, n_phi: int,
                 n_z: int) -> "PointCloudSurface":
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        z = np.linspace(0.0, height, n_z)
        pp, zz = np.meshgrid(phi, z, indexing="ij")
        pts = np.stack([radius * np.cos(pp).reshape(-1),
                        radius * np.sin(pp).reshape(-1),
                        zz.reshape(-1)], axis=1)
        pitch = max(radius * 2.0 * math.pi / n_phi, height / max(n_z - 1, 1))
        return cls(pts, pitch=pitch)


def reflect_points(points: np.ndarray, t: float) -> np.ndarray:
    out = np.array(points, dtype=float, copy=True)
    out[:, 0] = 2.0 * t - out[:, 0]
    return out


def split_and_reflect(surface: PointCloudSurface,
                      t: float) -> tuple[PointCloudSurface, PointCloudSurface]:
    """Left part (first coordinate <= t) and the reflection of the right
    part (>= t) across the plane at t; plane points land in both."""
    pts = surface.points
    minus = pts[pts[:, 0] <= t]
    plus = pts[pts[:, 0] >= t]
    return (PointCloudSurface(minus, pitch=surface.pitch),
            PointCloudSurface(reflect_points(plus, t), pitch=surface.pitch))


@dataclass
class ReflectionReport:
    t: float
    holds: bool
    worst_gap: float | None       # max over shared cells of sup_B - inf_A
    worst_cell: tuple | None      # projection-cell center coordinates
    cells_compared: int
    cell_size: float
    tolerance: float
    cell_centers: np.ndarray | None = None  # per-cell heatmap data
    cell_gaps: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "holds": self.holds,
            "worst_gap": self.worst_gap,
            "worst_cell": list(self.worst_cell) if self.worst_cell else None,
            "cells_compared": self.cells_compared,
            "cell_size": self.cell_size,
            "tolerance": self.tolerance,
        }


def order_leq(B: PointCloudSurface, A: PointCloudSurface, cell_size: float,
              tolerance: float | None = None, t: float = math.nan,
              keep_cells: bool = False) -> ReflectionReport:
    """Cellwise sup/inf comparison of first coordinates over the shared
    projection cells; holds when the worst gap stays within tolerance.

    The relation is a partial order only between sets that are graphs over
    the projection plane; transitivity of the reported gaps is guaranteed
    only for clouds sampled over a common projection grid."""
    if cell_size <= 0.0:
        raise ValidationError("cell size must be positive")
    if tolerance is None:
        tolerance = 1e-6 * max(A.diameter(), B.diameter())
    if len(A.points) == 0 or len(B.points) == 0:
        return ReflectionReport(t=t, holds=True, worst_gap=None,
                                worst_cell=None, cells_compared=0,
                                cell_size=cell_size, tolerance=tolerance)
    proj_b = B.projection
    proj_a = A.projection
    origin = np.minimum(proj_b.min(axis=0), proj_a.min(axis=0))
    kb = np.floor((proj_b - origin) / cell_size).astype(np.int64)
    ka = np.floor((proj_a - origin) / cell_size).astype(np.int64)
    hi = np.maximum(kb.max(axis=0), ka.max(axis=0)) + 1
    strides = np.concatenate([[1], np.cumprod(hi[:-1])])
    ids_b = kb @ strides
    ids_a = ka @ strides

    ub, inv_b = np.unique(ids_b, return_inverse=True)
    sup_b = np.full(len(ub), -np.inf)
    np.maximum.at(sup_b, inv_b, B.x1)
    ua, inv_a = np.unique(ids_a, return_inverse=True)
    inf_a = np.full(len(ua), np.inf)
    np.minimum.at(inf_a, inv_a, A.x1)

    common, ib, ia = np.intersect1d(ub, ua, return_indices=True)
    if len(common) == 0:
        return ReflectionReport(t=t, holds=True, worst_gap=None,
                                worst_cell=None, cells_compared=0,
                                cell_size=cell_size, tolerance=tolerance)
    gaps = sup_b[ib] - inf_a[ia]
    worst_idx = int(np.argmax(gaps))
    worst_gap = float(gaps[worst_idx])

    def unravel(cid):
        coords = []
        for d in range(len(strides) - 1, -1, -1):
            q, cid = divmod(cid, strides[d])
            coords.append(q)
        coords = np.array(coords[::-1], dtype=float)
        return tuple(origin + (coords + 0.5) * cell_size)

    centers = gaps_arr = None
    if keep_cells:
        centers = np.array([unravel(int(c)) for c in common])
        gaps_arr = gaps
    return ReflectionReport(
        t=t, holds=bool(worst_gap <= tolerance), worst_gap=worst_gap,
        worst_cell=unravel(int(common[worst_idx])),
        cells_compared=int(len(common)), cell_size=cell_size,
        tolerance=tolerance, cell_centers=centers, cell_gaps=gaps_arr)


def symmetry_scan(surface: PointCloudSurface, t_grid, cell_size=None,
                  tolerance=None, keep_cells=False) -> list[ReflectionReport]:
    """order_leq(left part, reflected right part) across the plane grid.

    Defaults: cell size twice the sampling pitch; tolerance scaled to the
    cell size (cell noise grows with surface slope, so symmetric surfaces
    need slack proportional to the discretization, which the report
    records)."""
    if cell_size is None:
        if surface.pitch is None:
            raise ValidationError("cell size required for clouds without pitch")
        cell_size = 2.0 * surface.pitch
    out = []
    for t in t_grid:
        b, a = split_and_reflect(surface, float(t))
        out.append(order_leq(b, a, cell_size, tolerance=tolerance, t=float(t),
                             keep_cells=keep_cells))
    return out


# ---------------------------------------------------------------------------
# first touch of vertical translation
# ---------------------------------------------------------------------------

@dataclass
class TouchReport:
    shift: float                  # signed vertical translation of the upper graph
    contact_point: tuple          # coordinates (incl. height after shift)
    contact_index: tuple
    kind: str                     # "interior" | "boundary"
    degenerate: bool
    contact_count: int

    def to_dict(self) -> dict:
        return {
            "shift": self.shift,
            "contact_point": list(self.contact_point),
            "kind": self.kind,
            "degenerate": self.degenerate,
            "contact_count": self.contact_count,
        }


def first_touch_shift(lower: GraphSample, upper: GraphSample,
                      degenerate_tol: float = 1e-9) -> TouchReport:
    """Signed vertical shift bringing the upper graph into first contact
    with the lower one, with the contact set classified as interior or
    boundary of the shared domain and flagged when it has more than one
    point."""
    if len(lower.axes) != len(upper.axes) or any(
            a1.shape != a2.shape or not np.allclose(a1, a2)
            for a1, a2 in zip(lower.axes, upper.axes)):
        raise ValidationError("graphs must share a common grid")
    common = lower.mask & upper.mask
    if not common.any():
        raise NoOverlap("graph domains do not overlap")
    diff = np.where(common, upper.u - lower.u, np.inf)
    m = float(diff.min())
    tol = degenerate_tol * (1.0 + abs(m))
    contacts = np.argwhere(diff <= m + tol)
    idx = tuple(int(i) for i in np.unravel_index(int(np.argmin(diff)), diff.shape))

    interior = _erode_bool(common)
    kind = "interior" if interior[idx] else "boundary"
    coords = tuple(float(lower.axes[d][idx[d]]) for d in range(len(idx)))
    contact_point = coords + (float(lower.u[idx]),)
    return TouchReport(
        shift=-m, contact_point=contact_point, contact_index=idx, kind=kind,
        degenerate=len(contacts) > 1, contact_count=int(len(contacts)))


def _erode_bool(mask: np.ndarray) -> np.ndarray:
    out = mask.copy()
    for ax in range(mask.ndim):
        lo = np.zeros_like(mask)
        hi = np.zeros_like(mask)
        sl_in = [slice(None)] * mask.ndim
        sl_out = [slice(None)] * mask.ndim
        sl_in[ax] = slice(1, None)
        sl_out[ax] = slice(None, -1)
        lo[tuple(sl_out)] = mask[tuple(sl_in)]
        hi[tuple(sl_in)] = mask[tuple(sl_out)]
        out &= lo & hi
    return out


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def scan_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2)


def heatmap_to_csv(report: ReflectionReport) -> str:
    """Per-cell worst gaps of one reflection comparison (projection-cell
    centers plus gap)."""
    if report.cell_centers is None:
        raise ValidationError("report was built without keep_cells=True")
    d = report.cell_centers.shape[1]
    header = ",".join(f"c{i+1}" for i in range(d)) + ",gap"
    lines = [header]
    for center, gap in zip(report.cell_centers, report.cell_gaps):
        lines.append(",".join(repr(float(c)) for c in center)
                     + "," + repr(float(gap)))
    return "\n".join(lines) + "\n"
