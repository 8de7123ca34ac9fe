"""Command-line front end.

Subcommands: classify, profile, check, symmetry, touch, sweep.  Every
command writes JSON/CSV artifacts (and figures unless --no-plot) into the
output directory, embeds the curvature-function spec, the effective
configuration and the library version into each JSON artifact, and is
deterministic given equal configuration.

Exit codes: 0 the run completed (even if checks report violations: those
are data), 2 unusable configuration, 3 a numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constraint import ClassifierConfig, classification_report, classify
from .curvature import (
    ConeSampler,
    SymmetricCurvature,
    gamma_from_dict,
    gamma_to_dict,
    h_times_sn,
    harmonic_sum_inverse,
    hessian_quotient,
    mean,
    sigma_root,
    verify_axioms,
)
from .errors import BowlabError, ConfigError, NotExtendable, ValidationError
from .geometry import (
    GraphSample,
    ellipsoid_sample,
    field_to_csv,
    graph_from_profile,
    height_identity_residual,
    linearization_ellipticity,
    sphere_sample,
    translator_height_equation,
    translator_residual,
)
from .planes import (
    PointCloudSurface,
    first_touch_shift,
    heatmap_to_csv,
    scan_to_json,
    symmetry_scan,
)
from .profile import (
    SolverConfig,
    blow_up_radius,
    entire_growth_coefficient,
    integrate_profile,
    profile_metadata,
    profile_to_csv,
)

SCHEMA_VERSION = 1

_GAMMA_CHOICES = ("mean", "sigma-root", "harmonic-sum-inverse",
                  "hessian-quotient", "h-times-sn")


def _build_gamma(args) -> SymmetricCurvature:
    if getattr(args, "gamma_file", None):
        try:
            spec = json.loads(Path(args.gamma_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read gamma spec file: {exc}") from exc
        return gamma_from_dict(spec)
    name = args.gamma
    n = args.n
    if name is None:
        raise ConfigError("need --gamma or --gamma-file")
    if n is None:
        raise ConfigError("need --n with a named curvature function")
    try:
        if name == "mean":
            return mean(n)
        if name == "sigma-root":
            if args.k is None:
                raise ConfigError("sigma-root needs --k")
            return sigma_root(args.k, n)
        if name == "harmonic-sum-inverse":
            if args.k is None:
                raise ConfigError("harmonic-sum-inverse needs --k")
            return harmonic_sum_inverse(args.k, n)
        if name == "hessian-quotient":
            if args.k is None or args.l is None:
                raise ConfigError("hessian-quotient needs --k and --l")
            return hessian_quotient(args.k, args.l, n)
        if name == "h-times-sn":
            return h_times_sn(n)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown curvature function {name!r}")


def _add_gamma_flags(p):
    p.add_argument("--gamma", choices=_GAMMA_CHOICES,
                   help="named curvature function")
    p.add_argument("--gamma-file", help="JSON spec file (overrides --gamma)")
    p.add_argument("--n", type=int, help="number of principal curvatures")
    p.add_argument("--k", type=int, help="order parameter where applicable")
    p.add_argument("--l", type=int, help="lower order for hessian-quotient")


def _add_common_flags(p):
    p.add_argument("--out", default="bowlab-out", help="output directory")
    p.add_argument("--config", help="JSON config file; overrides flags")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling")
    p.add_argument("--plot", dest="plot", action="store_true", default=True,
                   help="render figures (default)")
    p.add_argument("--no-plot", dest="plot", action="store_false",
                   help="skip figure rendering")


def _apply_config_file(args):
    if not getattr(args, "config", None):
        return args
    try:
        overrides = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    if not isinstance(overrides, dict):
        raise ConfigError("config file must hold a JSON object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        setattr(args, dest, value)
    return args


def _run_stamp(args, gamma=None) -> dict:
    skip = {"config", "func"}
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in skip and not callable(v)}
    params.pop("gamma", None)
    params.pop("gamma_file", None)
    stamp = {
        "command": args.command,
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "parameters": params,
    }
    if gamma is not None:
        stamp["gamma_spec"] = gamma_to_dict(gamma)
        stamp["alpha"] = float(gamma.alpha)
    return stamp


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    gamma = _build_gamma(args)
    cfg = ClassifierConfig(tol_pos=args.tol) if args.tol else ClassifierConfig()
    result = classify(gamma, cfg)
    out = _outdir(args)
    payload = classification_report(gamma, result)
    payload["run"] = _run_stamp(args, gamma)
    _write_json(out / "classify.json", payload)
    lines = ["y,x"] + [f"{y!r},{x!r}" for y, x in result.probes]
    (out / "probes.csv").write_text("\n".join(lines) + "\n")
    if args.plot:
        from .plots import plot_probes
        plot_probes(result, out / "probes.png")
    print(json.dumps({"verdict": result.verdict, "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

def _solver_config(args) -> SolverConfig:
    kw = {}
    if getattr(args, "budget", None):
        kw["r_budget"] = args.budget
    if getattr(args, "eps", None):
        kw["epsilon_fraction"] = args.eps
    if getattr(args, "tol", None):
        kw["rtol"] = args.tol
    return SolverConfig(**kw)


def cmd_profile(args) -> int:
    gamma = _build_gamma(args)
    sol = integrate_profile(gamma, _solver_config(args))
    out = _outdir(args)
    (out / "profile.csv").write_text(profile_to_csv(sol))
    payload = profile_metadata(sol)
    payload["run"] = _run_stamp(args, gamma)
    _write_json(out / "profile.json", payload)
    if args.plot:
        from .plots import plot_profile
        plot_profile(sol, out / "profile.png")
    print(json.dumps({"status": sol.status.kind, "nodes": len(sol.r),
                      "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

_GRAPH_SURFACES = ("bowl", "paraboloid", "plane")
_PARAM_SURFACES = ("sphere", "ellipsoid")


def _build_surface(args, gamma):
    kind = args.surface
    grid = args.grid
    if kind == "sphere":
        return sphere_sample(args.radius, grid, grid)
    if kind == "ellipsoid":
        a, b, c = args.axes
        return ellipsoid_sample(a, b, c, grid, grid)
    if kind == "bowl":
        sol = integrate_profile(gamma, _solver_config(args))
        radius = 0.8 * sol.r[-1] if sol.is_ball else min(4.0 / gamma.umbilic_value(), 0.8 * sol.r[-1])
        return graph_from_profile(sol, radius, grid)
    half = args.radius
    axes = (np.linspace(-half, half, grid), np.linspace(-half, half, grid))
    if kind == "paraboloid":
        return GraphSample.from_function(
            lambda p: 0.5 * args.curvature * (p[0] ** 2 + p[1] ** 2), axes)
    if kind == "plane":
        return GraphSample.from_function(lambda p: np.zeros_like(p[0]), axes)
    raise ConfigError(f"unknown surface {kind!r}")


def cmd_check(args) -> int:
    gamma = _build_gamma(args)
    what = [w.strip() for w in args.what.split(",")] if args.what else None
    out = _outdir(args)
    report: dict = {"checks": {}}
    figures = []

    needs_surface = what is None or any(
        w in ("residual", "height-eq", "identity", "ellipticity") for w in what)
    sample = _build_surface(args, gamma) if needs_surface else None
    is_graph = isinstance(sample, GraphSample)

    def want(name, default_on):
        return (name in what) if what is not None else default_on

    if want("residual", is_graph):
        if not is_graph:
            raise ConfigError("residual check needs a graph surface")
        fld = translator_residual(gamma, sample)
        report["checks"]["residual"] = fld.to_dict()
        (out / "residual.csv").write_text(field_to_csv(sample, fld))
        figures.append(("residual", fld))
    if want("height-eq", is_graph):
        if not is_graph:
            raise ConfigError("height-eq check needs a graph surface")
        fld = translator_height_equation(gamma, sample)
        report["checks"]["height_equation"] = fld.to_dict()
        (out / "height_equation.csv").write_text(field_to_csv(sample, fld))
        figures.append(("height_equation", fld))
    if want("identity", sample is not None and not is_graph):
        if sample is None or is_graph:
            raise ConfigError("identity check needs a parametric surface")
        fld = height_identity_residual(gamma, sample)
        entry = fld.to_dict()
        if args.refine:
            grids = [args.grid * 2**i for i in range(args.refine + 1)]
            maxes = []
            for g in grids:
                args_g = argparse.Namespace(**vars(args))
                args_g.grid = g
                maxes.append(height_identity_residual(
                    gamma, _build_surface(args_g, gamma)).max_abs)
            orders = [math.log2(maxes[i] / maxes[i + 1])
                      for i in range(len(maxes) - 1)]
            entry["refinement"] = {"grids": grids, "max_abs": maxes,
                                   "orders": orders}
        report["checks"]["height_identity"] = entry
        (out / "height_identity.csv").write_text(field_to_csv(sample, fld))
        figures.append(("height_identity", fld))
    if want("ellipticity", False):
        if not is_graph:
            raise ConfigError("ellipticity check needs a graph surface")
        shifted = GraphSample(sample.axes, sample.u + 1.0, mask=sample.mask,
                              du=sample.du, d2u=sample.d2u, analytic=True)
        rep = linearization_ellipticity(gamma, sample, shifted,
                                        [0.25, 0.5, 0.75])
        report["checks"]["ellipticity"] = rep.to_dict()
    if want("axioms", False):
        sampler = ConeSampler(count=args.samples, seed=args.seed)
        rep = verify_axioms(gamma, sampler)
        report["checks"]["axioms"] = rep.to_dict()

    if not report["checks"]:
        raise ConfigError("nothing to check: pass --what")
    report["run"] = _run_stamp(args, gamma)
    _write_json(out / "check.json", report)
    if args.plot and figures:
        from .plots import plot_graph_field, plot_surface_field
        for name, fld in figures:
            path = out / f"{name}.png"
            if is_graph:
                plot_graph_field(sample, fld, path, name)
            else:
                plot_surface_field(sample, fld, path, name)
    print(json.dumps({"checks": sorted(report["checks"]), "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def cmd_symmetry(args) -> int:
    gamma = _build_gamma(args)
    sol = integrate_profile(gamma, _solver_config(args))
    radius = 0.8 * sol.r[-1] if sol.is_ball else min(3.0 / gamma.umbilic_value(), 0.8 * sol.r[-1])
    bump = None
    if args.bump:
        try:
            amp, cx, cy, width = (float(x) for x in args.bump.split(","))
        except ValueError as exc:
            raise ConfigError("--bump wants 'amp,cx,cy,width'") from exc
        bump = (amp, (cx, cy), width)
    cloud = PointCloudSurface.rotational(sol, radius, args.cloud_r,
                                         args.cloud_phi, bump=bump)
    x1max = float(cloud.x1.max())
    t_grid = np.linspace(args.t_lo, args.t_hi, args.t_count) * x1max
    tolerance = args.tol if args.tol else 0.08 * x1max
    reports = symmetry_scan(cloud, t_grid, tolerance=tolerance, keep_cells=True)
    out = _outdir(args)
    payload = {
        "reports": [r.to_dict() for r in reports],
        "violations": sum(0 if r.holds else 1 for r in reports),
        "run": _run_stamp(args, gamma),
    }
    _write_json(out / "symmetry.json", payload)
    worst = max(reports, key=lambda r: (r.worst_gap if r.worst_gap is not None
                                        else -math.inf))
    (out / "heatmap.csv").write_text(heatmap_to_csv(worst))
    if args.plot:
        from .plots import plot_scan
        plot_scan(reports, out / "symmetry.png")
    print(json.dumps({"violations": payload["violations"], "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# touch
# ---------------------------------------------------------------------------

def _parse_graph_spec(spec: str, args, gamma, grid_axes=None):
    name, _, rest = spec.partition(":")
    params = {}
    for item in rest.split(","):
        if not item:
            continue
        key, _, val = item.partition("=")
        try:
            params[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad graph spec parameter {item!r}") from exc
    if name == "bowl":
        sol = integrate_profile(gamma, _solver_config(args))
        radius = 0.8 * sol.r[-1] if sol.is_ball else min(3.0 / gamma.umbilic_value(), 0.8 * sol.r[-1])
        gs = graph_from_profile(sol, radius, args.grid)
        if "dz" in params:
            gs = GraphSample(gs.axes, gs.u + params["dz"], mask=gs.mask,
                             du=gs.du, d2u=gs.d2u, analytic=True)
        return gs
    if grid_axes is None:
        raise ConfigError("the first graph must be a bowl to fix the grid")
    if name == "paraboloid":
        c = params.get("c", 0.1)
        z0 = params.get("z0", 0.0)
        return GraphSample.from_function(
            lambda p: 0.5 * c * (p[0] ** 2 + p[1] ** 2) + z0, grid_axes)
    if name == "plane":
        z0 = params.get("z", 0.0)
        return GraphSample.from_function(
            lambda p: np.full_like(p[0], z0), grid_axes)
    raise ConfigError(f"unknown graph spec {name!r}")


def cmd_touch(args) -> int:
    gamma = _build_gamma(args)
    upper = _parse_graph_spec(args.upper, args, gamma)
    lower = _parse_graph_spec(args.lower, args, gamma, grid_axes=upper.axes)
    report = first_touch_shift(lower, upper)
    out = _outdir(args)
    payload = report.to_dict()
    payload["run"] = _run_stamp(args, gamma)
    _write_json(out / "touch.json", payload)
    if args.plot:
        from .plots import plot_touch
        plot_touch(lower, upper, report, out / "touch.png")
    print(json.dumps({"shift": report.shift, "kind": report.kind,
                      "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _family_gamma(family: str, n: int, k: int | None):
    if family == "mean":
        return mean(n)
    if family == "h-times-sn":
        return h_times_sn(n)
    if family == "sigma-root":
        if k is None:
            raise ConfigError("sigma-root family needs --k")
        return sigma_root(min(k, n), n)
    raise ConfigError(f"unknown family {family!r}")


def cmd_sweep(args) -> int:
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        gamma = _family_gamma(args.family, n, args.k)
        result = classify(gamma)
        row = {
            "n": n,
            "gamma": gamma.name(),
            "alpha": float(gamma.alpha),
            "verdict": result.verdict,
            "k_estimate": result.k_estimate,
            "r0_reference": float(gamma.value_at_ones() ** (1.0 / float(gamma.alpha))),
            "r_max": None,
            "r_max_bound": None,
            "growth_coefficient": None,
            "growth_reference": None,
        }
        sol = integrate_profile(gamma, _solver_config(args))
        if sol.is_ball:
            r_max, bound = blow_up_radius(sol)
            row["r_max"] = r_max
            row["r_max_bound"] = bound
        else:
            row["growth_coefficient"] = entire_growth_coefficient(sol)
            gamma0 = gamma.gamma_zero()
            if gamma0 > 0:
                row["growth_reference"] = 1.0 / ((float(gamma.alpha) + 1.0) * gamma0)
        rows.append(row)
    out = _outdir(args)
    header = ["n", "gamma", "alpha", "verdict", "k_estimate", "r0_reference",
              "r_max", "r_max_bound", "growth_coefficient", "growth_reference"]
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            val = row[key]
            cells.append("" if val is None else
                         (val if isinstance(val, str) else repr(float(val))
                          if isinstance(val, float) else repr(val)))
        lines.append(",".join(cells))
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    payload = {"rows": rows, "run": _run_stamp(args)}
    _write_json(out / "sweep.json", payload)
    if args.plot:
        from .plots import plot_sweep
        plot_sweep(rows, out / "sweep.png")
    print(json.dumps({"rows": len(rows), "out": str(out)}))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bowlab",
        description="Numerical laboratory for bowl-type translating solitons "
                    "of fully nonlinear curvature flows.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="entire/ball classification")
    _add_gamma_flags(p)
    _add_common_flags(p)
    p.add_argument("--tol", type=float, help="positivity tolerance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("profile", help="integrate the bowl profile")
    _add_gamma_flags(p)
    _add_common_flags(p)
    p.add_argument("--budget", type=float, help="radius budget")
    p.add_argument("--eps", type=float, help="apex offset fraction")
    p.add_argument("--tol", type=float, help="stepper relative tolerance")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("check", help="identity/residual/ellipticity/axiom checks")
    _add_gamma_flags(p)
    _add_common_flags(p)
    p.add_argument("--what", help="comma list: residual,height-eq,identity,"
                                  "ellipticity,axioms")
    p.add_argument("--surface", choices=_GRAPH_SURFACES + _PARAM_SURFACES,
                   default="bowl")
    p.add_argument("--grid", type=int, default=128, help="grid points per axis")
    p.add_argument("--radius", type=float, default=1.0,
                   help="sphere radius / graph half-width")
    p.add_argument("--axes", type=float, nargs=3, default=(1.0, 1.0, 2.0),
                   metavar=("A", "B", "C"), help="ellipsoid semi-axes")
    p.add_argument("--curvature", type=float, default=1.0,
                   help="paraboloid apex curvature")
    p.add_argument("--samples", type=int, default=1000,
                   help="cone samples for the axiom check")
    p.add_argument("--refine", type=int, default=0, metavar="D",
                   help="measure identity convergence over D grid doublings")
    p.add_argument("--budget", type=float, help="radius budget for bowl runs")
    p.add_argument("--eps", type=float, help="apex offset fraction")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("symmetry", help="moving-plane reflection scan")
    _add_gamma_flags(p)
    _add_common_flags(p)
    p.add_argument("--t-count", type=int, default=20)
    p.add_argument("--t-lo", type=float, default=0.35,
                   help="lower scan bound (fraction of the cloud extent)")
    p.add_argument("--t-hi", type=float, default=0.9)
    p.add_argument("--cloud-r", type=int, default=300)
    p.add_argument("--cloud-phi", type=int, default=1000)
    p.add_argument("--bump", help="amp,cx,cy,width height perturbation")
    p.add_argument("--tol", type=float, help="order tolerance (absolute)")
    p.add_argument("--budget", type=float, help="radius budget for bowl runs")
    p.add_argument("--eps", type=float, help="apex offset fraction")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("touch", help="vertical first-touch shift")
    _add_gamma_flags(p)
    _add_common_flags(p)
    p.add_argument("--upper", default="bowl",
                   help="graph spec: bowl[:dz=..] | paraboloid[:c=..,z0=..] "
                        "| plane[:z=..]")
    p.add_argument("--lower", default="paraboloid:c=0.05,z0=-2")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--budget", type=float, help="radius budget for bowl runs")
    p.add_argument("--eps", type=float, help="apex offset fraction")
    p.set_defaults(func=cmd_touch)

    p = sub.add_parser("sweep", help="table over a curvature-function family")
    _add_common_flags(p)
    p.add_argument("--family", choices=("mean", "h-times-sn", "sigma-root"),
                   required=True)
    p.add_argument("--k", type=int, help="order for sigma-root families")
    p.add_argument("--n-from", type=int, default=2)
    p.add_argument("--n-to", type=int, default=4)
    p.add_argument("--budget", type=float, help="radius budget")
    p.add_argument("--eps", type=float, help="apex offset fraction")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(args)
        return args.func(args)
    except (ConfigError, ValidationError, NotExtendable) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    except BowlabError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
