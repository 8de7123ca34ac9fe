"""Reflection order, symmetry scans and the vertical first-touch shift.

The order predicate is a cell discretization of a fiberwise sup/inf
comparison; its noise scales with cell size times fiber slope, so the scan
tests fix cloud resolution and tolerance together (the constants below were
calibrated so a symmetric bowl passes with a 2x margin while a deliberate
bump violates clearly).
"""

import math

import numpy as np
import pytest

from bowlab.errors import NoOverlap, ValidationError
from bowlab.geometry import GraphSample, graph_from_profile
from bowlab.planes import (
    PointCloudSurface,
    first_touch_shift,
    heatmap_to_csv,
    order_leq,
    reflect_points,
    scan_to_json,
    split_and_reflect,
    symmetry_scan,
)


def box_axes(half, m):
    return (np.linspace(-half, half, m), np.linspace(-half, half, m))


# ---------------------------------------------------------------------------
# split and reflect
# ---------------------------------------------------------------------------

def test_reflect_single_point():
    pts = np.array([[3.0, 0.0, 0.0]])
    assert np.allclose(reflect_points(pts, 1.0), [[-1.0, 0.0, 0.0]])


def test_reflection_involution():
    rng = np.random.default_rng(2)
    pts = rng.normal(size=(200, 3))
    for t in (0.0, 0.375, -1.25):
        back = reflect_points(reflect_points(pts, t), t)
        assert np.allclose(back, pts, atol=1e-14)


def test_split_symmetric_cloud_coincides():
    # cloud symmetric in the first coordinate: both halves agree as sets
    xs = np.array([-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75])
    ys = np.arange(7, dtype=float)
    pts = np.stack([xs, ys[::-1] * 0 + np.abs(xs), np.zeros(7)], axis=1)
    cloud = PointCloudSurface(pts)
    minus, plus_ref = split_and_reflect(cloud, 0.0)
    a = np.array(sorted(map(tuple, minus.points)))
    b = np.array(sorted(map(tuple, plus_ref.points)))
    assert np.allclose(a, b, atol=1e-15)


def test_split_puts_plane_points_in_both():
    pts = np.array([[0.0, 1.0], [1.0, 2.0], [-1.0, 3.0]])
    minus, plus_ref = split_and_reflect(PointCloudSurface(pts), 0.0)
    assert len(minus.points) == 2
    assert len(plus_ref.points) == 2


# ---------------------------------------------------------------------------
# order predicate
# ---------------------------------------------------------------------------

def test_order_plane_clouds():
    rng = np.random.default_rng(5)
    proj = rng.uniform(-1, 1, size=(60, 2))
    b = PointCloudSurface(np.column_stack([np.zeros(60), proj]))
    a = PointCloudSurface(np.column_stack([np.ones(60), proj]))
    rep = order_leq(b, a, cell_size=0.25)
    assert rep.holds
    assert rep.worst_gap == pytest.approx(-1.0, abs=1e-12)
    assert rep.cells_compared > 0


def test_order_reflexive_at_tolerance():
    # one point per cell: sup == inf, zero gap; multiple points per cell
    # need the tolerance to cover the in-cell spread
    rng = np.random.default_rng(6)
    pts = np.column_stack([rng.uniform(-1, 1, 40),
                           np.linspace(0, 39, 40), np.zeros(40)])
    cloud = PointCloudSurface(pts)
    rep = order_leq(cloud, cloud, cell_size=0.5)
    assert rep.holds
    assert rep.worst_gap == pytest.approx(0.0, abs=1e-15)


def test_order_zero_gap_for_reflection_invariant_cloud():
    # dyadic mirror pairs, one pair per fiber: exact zero worst gap
    t = 0.5
    offs = np.array([0.0625 * k for k in range(1, 9)])
    left = np.column_stack([t - offs, np.arange(8, dtype=float), np.zeros(8)])
    right = np.column_stack([t + offs, np.arange(8, dtype=float), np.zeros(8)])
    cloud = PointCloudSurface(np.vstack([left, right]))
    minus, plus_ref = split_and_reflect(cloud, t)
    rep = order_leq(minus, plus_ref, cell_size=0.5)
    assert rep.holds
    assert rep.worst_gap == 0.0


def test_order_detects_violation():
    proj = np.linspace(0, 5, 30)
    b = PointCloudSurface(np.column_stack([np.full(30, 2.0), proj]))
    a = PointCloudSurface(np.column_stack([np.zeros(30), proj]))
    rep = order_leq(b, a, cell_size=0.4)
    assert not rep.holds
    assert rep.worst_gap == pytest.approx(2.0)
    assert rep.worst_cell is not None


def test_order_transitivity_at_tolerance():
    # graphs over the same projection grid: gap(C,A) <= gap(C,B) + gap(B,A)
    rng = np.random.default_rng(7)
    grid = np.stack(np.meshgrid(np.linspace(0, 1, 25), np.linspace(0, 1, 25),
                                indexing="ij"))
    proj = grid.reshape(2, -1).T

    def smooth(seed):
        r = np.random.default_rng(seed)
        c = r.normal(size=6)
        x, y = proj[:, 0], proj[:, 1]
        return (c[0] * np.sin(3 * x) + c[1] * np.cos(2 * y) + c[2] * x * y
                + c[3] * x + c[4] * y + c[5]) * 0.1

    for trial in range(5):
        fa = smooth(3 * trial)
        fb = fa + 0.05 + 0.3 * rng.uniform(size=len(proj))
        fc = fb + 0.05 + 0.3 * rng.uniform(size=len(proj))
        A = PointCloudSurface(np.column_stack([fc, proj]))   # right-most
        B = PointCloudSurface(np.column_stack([fb, proj]))
        C = PointCloudSurface(np.column_stack([fa, proj]))   # left-most
        cell = 0.1
        g_cb = order_leq(C, B, cell).worst_gap
        g_ba = order_leq(B, A, cell).worst_gap
        g_ca = order_leq(C, A, cell).worst_gap
        assert g_ca <= g_cb + g_ba + 1e-12


# ---------------------------------------------------------------------------
# symmetry scans
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def bowl_cloud(profile_hs2):
    radius = 0.8 * profile_hs2.r[-1]
    return PointCloudSurface.rotational(profile_hs2, radius, 300, 1000)


def test_bowl_scan_all_hold(bowl_cloud):
    x1max = bowl_cloud.x1.max()
    t_grid = np.linspace(0.35, 0.9, 20) * x1max
    reports = symmetry_scan(bowl_cloud, t_grid, tolerance=0.08 * x1max)
    assert len(reports) == 20
    assert all(r.holds for r in reports)


def test_bumped_bowl_scan_violates(profile_hs2, bowl_cloud):
    radius = 0.8 * profile_hs2.r[-1]
    x1max = bowl_cloud.x1.max()
    bumped = PointCloudSurface.rotational(
        profile_hs2, radius, 300, 1000,
        bump=(0.1, (0.4 * x1max, 0.0), 0.12 * x1max))
    t_grid = np.linspace(0.35, 0.9, 20) * x1max
    reports = symmetry_scan(bumped, t_grid, tolerance=0.08 * x1max)
    assert any(not r.holds for r in reports)


def test_bowl_split_order_single_t(bowl_cloud):
    x1max = bowl_cloud.x1.max()
    t = 0.5 * x1max
    minus, plus_ref = split_and_reflect(bowl_cloud, t)
    rep = order_leq(minus, plus_ref, cell_size=2 * bowl_cloud.pitch,
                    tolerance=0.08 * x1max, t=t)
    assert rep.holds


def test_cylinder_scan_holds():
    cyl = PointCloudSurface.cylinder(1.3, 2.0, 800, 200)
    t_grid = np.linspace(0.4, 0.85, 15) * 1.3
    cell = 2 * cyl.pitch
    reports = symmetry_scan(cyl, t_grid, tolerance=4 * cell)
    assert all(r.holds for r in reports)


def test_scan_invariant_under_vertical_rotation(bowl_cloud):
    # rotating the bowl about the vertical axis resamples the same surface;
    # the scan verdicts are unchanged and the gaps move within tolerance
    x1max = bowl_cloud.x1.max()
    ang = 0.77
    ca, sa = math.cos(ang), math.sin(ang)
    pts = bowl_cloud.points.copy()
    rotated = np.column_stack([ca * pts[:, 0] - sa * pts[:, 1],
                               sa * pts[:, 0] + ca * pts[:, 1], pts[:, 2]])
    turned = PointCloudSurface(rotated, pitch=bowl_cloud.pitch)
    t_grid = np.linspace(0.4, 0.85, 10) * x1max
    tol = 0.08 * x1max
    base = symmetry_scan(bowl_cloud, t_grid, tolerance=tol)
    moved = symmetry_scan(turned, t_grid, tolerance=tol)
    assert [r.holds for r in base] == [r.holds for r in moved]
    for rb, rm in zip(base, moved):
        assert abs(rb.worst_gap - rm.worst_gap) <= tol


def test_cloud_rejects_nan():
    with pytest.raises(ValidationError):
        PointCloudSurface(np.array([[0.0, float("nan")], [1.0, 2.0]]))


def test_scan_json_and_heatmap(bowl_cloud):
    import json
    x1max = bowl_cloud.x1.max()
    reports = symmetry_scan(bowl_cloud, [0.5 * x1max], tolerance=0.08 * x1max,
                            keep_cells=True)
    parsed = json.loads(scan_to_json(reports))
    assert parsed[0]["holds"] is True
    assert {"t", "worst_gap", "cells_compared", "cell_size", "tolerance"} <= set(parsed[0])
    csv = heatmap_to_csv(reports[0])
    lines = csv.strip().splitlines()
    assert lines[0] == "c1,c2,gap"
    assert len(lines) == 1 + reports[0].cells_compared


# ---------------------------------------------------------------------------
# first touch
# ---------------------------------------------------------------------------

def test_first_touch_uniform_shift():
    gs = GraphSample.from_function(lambda p: 0.5 * (p[0] ** 2 + p[1] ** 2),
                                   box_axes(1.0, 31))
    upper = GraphSample(gs.axes, gs.u + 3.0)
    rep = first_touch_shift(gs, upper)
    assert rep.shift == pytest.approx(-3.0)
    assert rep.degenerate
    assert rep.contact_count == 31 * 31


def test_first_touch_interior_contact(profile_hs2):
    lower_base = graph_from_profile(profile_hs2, 0.7 * profile_hs2.r[-1], 101)
    # lower graph dips below the bowl away from the apex
    lower = GraphSample(lower_base.axes,
                        lower_base.u - 0.01 * (
                            lower_base.axes[0][:, None] ** 2
                            + lower_base.axes[1][None, :] ** 2),
                        mask=lower_base.mask)
    rep = first_touch_shift(lower, lower_base)
    assert rep.shift == pytest.approx(0.0, abs=1e-12)
    assert rep.kind == "interior"
    assert rep.contact_index == (50, 50)


def test_first_touch_ball_bowl_over_paraboloid(profile_hs2):
    # ball-type bowl dropped onto an entire convex paraboloid: finite shift
    # with interior contact (the obstruction demo)
    bowl = graph_from_profile(profile_hs2, 0.7 * profile_hs2.r[-1], 101)
    para = GraphSample.from_function(
        lambda p: 0.05 * (p[0] ** 2 + p[1] ** 2) - 2.0,
        bowl.axes)
    rep = first_touch_shift(para, bowl)
    assert math.isfinite(rep.shift)
    assert rep.kind == "interior"


def test_first_touch_no_overlap():
    a = GraphSample.from_function(lambda p: p[0] * 0, box_axes(1.0, 21),
                                  mask_fn=lambda p: p[0] < -0.5)
    b = GraphSample.from_function(lambda p: p[0] * 0, box_axes(1.0, 21),
                                  mask_fn=lambda p: p[0] > 0.5)
    with pytest.raises(NoOverlap):
        first_touch_shift(a, b)


def test_first_touch_grid_mismatch():
    a = GraphSample.from_function(lambda p: p[0] * 0, box_axes(1.0, 21))
    b = GraphSample.from_function(lambda p: p[0] * 0, box_axes(1.0, 31))
    with pytest.raises(ValidationError):
        first_touch_shift(a, b)
