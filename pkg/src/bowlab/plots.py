"""Figure rendering for the report paths.

Every CLI report command renders matplotlib figures to files next to the
delimited output; the CSV stays the data contract, the figures are for
eyes.  All rendering uses the Agg backend (no display needed).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "plot_profile",
    "plot_probes",
    "plot_graph_field",
    "plot_surface_field",
    "plot_scan",
    "plot_touch",
    "plot_sweep",
]

_DPI = 130


def _save(fig, path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_profile(sol, path):
    fig, axes = plt.subplots(1, 3, figsize=(11.5, 3.4))
    axes[0].plot(sol.r, sol.u, lw=1.2)
    axes[0].set_xlabel("r")
    axes[0].set_ylabel("u(r)")
    axes[0].set_title("height")
    axes[1].semilogy(sol.r, sol.v, lw=1.2)
    axes[1].set_xlabel("r")
    axes[1].set_ylabel("v = u'(r)")
    axes[1].set_title("slope")
    axes[2].plot(sol.r, sol.lambda_radial, lw=1.2, label="radial")
    axes[2].plot(sol.r, sol.lambda_tangential, lw=1.2, label="tangential")
    axes[2].set_xlabel("r")
    axes[2].set_ylabel("principal curvature")
    axes[2].legend(frameon=False)
    axes[2].set_title("curvatures")
    fig.suptitle(f"profile ({sol.status.kind})")
    fig.tight_layout()
    _save(fig, path)


def plot_probes(result, path):
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    if result.probes:
        ys = np.array([p[0] for p in result.probes])
        xs = np.array([p[1] for p in result.probes])
        ax.loglog(ys, xs, "o", ms=3.5, label="curve probes")
        if result.k_estimate is not None:
            ref = xs[0] * (ys / ys[0]) ** (-result.k_estimate)
            ax.loglog(ys, ref, "--", lw=1.0,
                      label=f"fit slope -{result.k_estimate:.3f}")
        ax.legend(frameon=False)
    ax.set_xlabel("y")
    ax.set_ylabel("x = f(y)")
    ax.set_title(f"verdict: {result.verdict}")
    fig.tight_layout()
    _save(fig, path)


def plot_graph_field(sample, fld, path, title):
    fig, ax = plt.subplots(figsize=(4.8, 4.0))
    pc = ax.pcolormesh(sample.axes[0], sample.axes[1], fld.values.T,
                       shading="nearest")
    fig.colorbar(pc, ax=ax, shrink=0.85)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def plot_surface_field(sample, fld, path, title):
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    pc = ax.pcolormesh(sample.phi, sample.theta, fld.values, shading="nearest")
    fig.colorbar(pc, ax=ax, shrink=0.85)
    ax.set_xlabel("phi")
    ax.set_ylabel("theta")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def plot_scan(reports, path):
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    ts = [r.t for r in reports]
    gaps = [r.worst_gap if r.worst_gap is not None else 0.0 for r in reports]
    ok = [r.holds for r in reports]
    ax.plot(ts, gaps, "-", lw=0.8, color="gray")
    ax.plot([t for t, o in zip(ts, ok) if o],
            [g for g, o in zip(gaps, ok) if o], "o", ms=4, label="holds")
    bad_t = [t for t, o in zip(ts, ok) if not o]
    if bad_t:
        ax.plot(bad_t, [g for g, o in zip(gaps, ok) if not o], "x", ms=6,
                color="crimson", label="violated")
    if reports:
        ax.axhline(reports[0].tolerance, ls="--", lw=0.8, color="k",
                   label="tolerance")
    ax.set_xlabel("plane position t")
    ax.set_ylabel("worst gap")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_touch(lower, upper, report, path):
    fig, ax = plt.subplots(figsize=(4.8, 4.0))
    diff = np.where(lower.mask & upper.mask, upper.u - lower.u, np.nan)
    pc = ax.pcolormesh(lower.axes[0], lower.axes[1], diff.T, shading="nearest")
    fig.colorbar(pc, ax=ax, shrink=0.85)
    cx, cy = report.contact_point[0], report.contact_point[1]
    ax.plot([cx], [cy], "r*", ms=10)
    ax.set_aspect("equal")
    ax.set_title(f"upper - lower (shift {report.shift:.4g}, {report.kind})")
    fig.tight_layout()
    _save(fig, path)


def plot_sweep(rows, path):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ns = [row["n"] for row in rows]
    balls = [row for row in rows if row["verdict"] == "Ball"]
    if balls:
        ax.plot([row["n"] for row in balls], [row["r_max"] for row in balls],
                "o-", label="measured ball radius")
        ax.plot([row["n"] for row in balls], [row["r0_reference"] for row in balls],
                "s--", label="apex-sphere radius")
    ax.set_xlabel("n")
    ax.set_xticks(sorted(set(ns)))
    ax.set_ylabel("radius")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("family sweep")
    fig.tight_layout()
    _save(fig, path)
