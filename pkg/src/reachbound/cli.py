"""Command-line front end.

    reachbound gen KIND --n N --seed S [--param key=value ...] --output FILE
    reachbound profile CLOUD [--mesh OFF] [--beta-cap B] [--fit LO HI] --output CSV
    reachbound reach-bound CLOUD --epsilon E --output JSON
    reachbound rconv-bound GRID --r-max R [--epsilon E] --output JSON
    reachbound rconv-flag GRID --r R [--epsilon E] --output XYZ
    reachbound convergence --set set_U --n-list 2 3 4 --reps 20 --output CSV

Every command takes an optional ``--svg`` plot path. Exit status is 0 on
success and 2 when an input violates a precondition.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io, svg
from .beta_reach import MeshOracle, fit_profile, profile
from .harness import EPSILON_SCALE, rate_fit, run_convergence
from .rconv_bound import closing_violations, rconv_upper_bound
from .reach_bound import reach_upper_bound
from .synth import KINDS, ShapeSpec, generate


class UsageError(ValueError):
    pass


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            num = float(v)
            out[k] = int(num) if num.is_integer() and k in ("d", "m") else num
        except ValueError:
            out[k] = v
    return out


def _grid_epsilon(grid, eps):
    if eps is not None:
        return eps
    if grid.epsilon is None:
        raise UsageError("grid file carries no epsilon; pass --epsilon")
    return grid.epsilon


def cmd_gen(a):
    params = _parse_params(a.param)
    sample, truth = generate(ShapeSpec(a.kind, a.n, a.seed, params))
    if a.kind in ("disk", "set_U", "set_W"):
        io.save_grid(a.output, sample)
        pts, groups = sample.phi, [(~sample.inside, "#bbbbbb", 1.5), (sample.inside, "#1f77b4", 1.5)]
    else:
        io.save_cloud(a.output, sample)
        pts, groups = sample, None
    if a.truth:
        io.save_json(a.truth, {
            "reach": truth.reach,
            "rconv": truth.rconv,
            "hausdorff_bound": truth.hausdorff_bound,
            "profile_model": None if truth.profile_model is None else [list(p) for p in truth.profile_model.pieces],
        })
    if a.svg:
        svg.render_points_svg(pts, a.svg, groups, title=a.kind)


def cmd_profile(a):
    cloud = io.load_cloud(a.cloud)
    oracle = None
    if a.mesh:
        oracle = MeshOracle(io.load_off(a.mesh))
    p = profile(cloud, oracle=oracle, beta_cap=a.beta_cap, prune=not a.no_prune)
    io.save_profile(a.output, p)
    if a.fit:
        f = fit_profile(p, a.fit[0], a.fit[1])
        print(json.dumps({"beta_lo": f.beta_lo, "beta_hi": f.beta_hi, "intercept": f.intercept,
                          "slope": f.slope, "rms_residual": f.rms_residual, "n_samples": f.n_samples}, indent=2))
    if a.svg:
        svg.render_profile_svg(p, a.svg)


def cmd_reach_bound(a):
    cloud = io.load_cloud(a.cloud)
    res = reach_upper_bound(cloud, a.epsilon, prune=not a.no_prune)
    io.save_json(a.output, res.to_dict())
    if a.svg:
        groups = [(np.ones(len(cloud), dtype=bool), "#555555", 1.5)]
        if res.witness is not None:
            mark = np.zeros(len(cloud), dtype=bool)
            mark[[res.witness.i, res.witness.j]] = True
            groups.append((mark, "#d62728", 4))
        svg.render_points_svg(cloud, a.svg, groups, title="reach bound witness pair")


def cmd_rconv_bound(a):
    grid = io.load_grid(a.grid)
    eps = _grid_epsilon(grid, a.epsilon)
    res = rconv_upper_bound(grid, eps, a.r_max)
    io.save_json(a.output, res.to_dict())
    if a.svg:
        groups = [(~grid.inside, "#bbbbbb", 1.5), (grid.inside, "#1f77b4", 1.5)]
        if res.witness is not None:
            mark = np.zeros(grid.n, dtype=bool)
            mark[res.witness] = True
            groups.append((mark, "#d62728", 5))
        svg.render_points_svg(grid.phi, a.svg, groups, title="rconv bound witness")


def cmd_rconv_flag(a):
    grid = io.load_grid(a.grid)
    eps = _grid_epsilon(grid, a.epsilon)
    vs = closing_violations(grid, a.r, eps)
    flagged = grid.phi[vs.points]
    if len(flagged):
        io.save_cloud(a.output, flagged)
    else:
        open(a.output, "w").close()
    print(f"{len(flagged)} flagged points at r={a.r}")
    if a.svg:
        mark = np.zeros(grid.n, dtype=bool)
        mark[vs.points] = True
        groups = [(~grid.inside, "#bbbbbb", 1.5), (grid.inside, "#1f77b4", 1.5), (mark, "#d62728", 3)]
        svg.render_points_svg(grid.phi, a.svg, groups, title=f"closing violations at r={a.r:g}")


def cmd_convergence(a):
    table = run_convergence(a.set, a.n_list, a.reps, a.base_seed, window=a.window, r_max=a.r_max,
                            epsilon_scale=a.epsilon_scale, workers=a.workers)
    table.to_csv(a.output, runtime=not a.no_runtime)
    report = {}
    for col in ("rconv_bound", "reach_bound"):
        try:
            f = rate_fit(table, col)
            report[col] = {"C": f.coefficient, "p": f.exponent}
        except ValueError as e:
            report[col] = {"error": str(e)}
    print(json.dumps(report, indent=2))
    if a.svg:
        series = {}
        for col, label in (("rconv_bound", "rconv bound"), ("reach_bound", "reach bound")):
            s = table.summary(col)
            series[label] = ([r[0] for r in s], [r[1] for r in s], [r[2] for r in s])
        svg.render_series_svg(series, a.svg, truth=1.0, title=a.set)


def build_parser():
    ap = argparse.ArgumentParser(prog="reachbound", description="Upper bounds on reach and r-convexity, and beta-reach profiles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a synthetic shape")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=float, default=1000, help="sample count, or resolution for lattice kinds (spacing 0.7/n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="shape parameter, repeatable")
    p.add_argument("--truth", help="also write the ground truth as JSON")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("profile", help="exact beta-reach profile of a cloud")
    p.add_argument("cloud")
    p.add_argument("--mesh", help="OFF mesh to measure midpoint distances against")
    p.add_argument("--beta-cap", type=float)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--fit", type=float, nargs=2, metavar=("LO", "HI"), help="print a line fit over [LO, HI]")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("reach-bound", help="upper bound on reach from a cloud within epsilon of the set")
    p.add_argument("cloud")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=cmd_reach_bound)

    p = sub.add_parser("rconv-bound", help="upper bound on rconv from a labelled grid")
    p.add_argument("grid")
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--epsilon", type=float, help="covering radius of the grid (default: from the file)")
    p.set_defaults(func=cmd_rconv_bound)

    p = sub.add_parser("rconv-flag", help="export outside points recaptured by the closing at radius r")
    p.add_argument("grid")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=cmd_rconv_flag)

    p = sub.add_parser("convergence", help="replicated bounds on set_U / set_W across resolutions")
    p.add_argument("--set", choices=("set_U", "set_W"), required=True)
    p.add_argument("--n-list", type=float, nargs="+", required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--window", type=float, default=3.0)
    p.add_argument("--r-max", type=float)
    p.add_argument("--epsilon-scale", type=float, default=EPSILON_SCALE,
                   help="reach-bound epsilon as a multiple of the lattice spacing")
    p.add_argument("--workers", type=int)
    p.add_argument("--no-runtime", action="store_true", help="omit the runtime column")
    p.set_defaults(func=cmd_convergence)

    for p in sub.choices.values():
        p.add_argument("--output", required=True)
        p.add_argument("--svg")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as e:
        print(f"reachbound: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
