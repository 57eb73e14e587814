"""Command-line front end: every computation writes CSV or JSON, optionally with a gnuplot script."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, search
from .curvature import DomainError, WarpFamilyParams, curvature_profile, scal_multiwarp
from .radial import band_profile
from .revolution.geodesic import injectivity_radius, projection_nonexpansion_check, shoot_geodesic


class ValidationError(Exception):
    pass


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def write_csv(path: Path, records: list[dict]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(records[0]))
        for rec in records:
            w.writerow([_fmt(v) for v in rec.values()])


def write_json(path: Path, records: list[dict]):
    data = [{k: _json_value(v) for k, v in rec.items()} for rec in records]
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(data, indent=2, allow_nan=False))
        fh.write("\n")


def _family(args) -> WarpFamilyParams:
    if args.s is not None and (args.alpha is not None or args.beta is not None):
        raise ValidationError("give either --s or --alpha/--beta, not both")
    if args.s is not None:
        return WarpFamilyParams.from_s(args.n, args.s)
    return WarpFamilyParams(args.n, args.alpha or 0.0, args.beta or 0.0)


def _family_tag(p: WarpFamilyParams) -> str:
    return f"s{p.s!r}" if p.s is not None else f"alpha{p.alpha!r}_beta{p.beta!r}"


# Each command returns (parameter tag, records, plot spec or None).
# A plot spec is (x column, [y columns], title).

def cmd_scal_profile(args):
    p = _family(args)
    prof = curvature_profile(p, args.grid)
    r, v = prof.all_values()
    recs = [{"r": float(x), "scal": float(y)} for x, y in zip(r, v)]
    return f"{_family_tag(p)}_grid{args.grid}", recs, ("r", ["scal"], "scalar curvature along r")


def cmd_band_check(args):
    if not 2 <= args.n <= 64:
        raise ValidationError("band-check needs 2 <= n <= 64")
    m = args.samples or 200
    a = band_profile(args.n)
    t = np.linspace(a.start, a.length, m + 2)[1:-1]
    scal = scal_multiwarp(a, a, args.n, t)
    res = float(np.max(np.abs(scal - args.n * (args.n - 1))))
    rec = {"n": args.n, "samples": m, "target": float(args.n * (args.n - 1)), "max_abs_residual": res,
           "separation": bounds.band_model_separation(args.n), "band_bound": bounds.band_bound(args.n)}
    return f"samples{m}", [rec], None


def cmd_region_scan(args):
    ar = (args.alpha_min, args.alpha_max)
    br = (args.beta_min, args.beta_max)
    try:
        g = search.scan_region(args.n, ar, br, args.resolution, args.grid)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    tag = f"alpha{ar[0]!r}to{ar[1]!r}_beta{br[0]!r}to{br[1]!r}_res{args.resolution}"
    return tag, list(g.rows()), None


def cmd_corner_roots(args):
    sol = search.solve_corner_system(args.n)
    recs = []
    for a, b in sol.roots:
        F = search.corner_residual(args.n, a, b)
        recs.append({"alpha": a, "beta": b, "residual_pole": float(F[0]), "residual_equator": float(F[1]),
                     "failed_seeds": len(sol.failures)})
    return "lattice5", recs, None


def cmd_segment_sweep(args):
    m = args.samples or 11
    s_values = np.linspace(0.0, 1.0, m)
    recs = [c.to_dict() for c in search.sweep_segment(args.n, s_values, args.grid)]
    return f"samples{m}", recs, ("s", ["margin"], "min scal - 2 along the segment")


def cmd_certify(args):
    s = 0.1 if args.s is None else args.s
    if not s > 0:
        raise ValidationError("--s must be positive")
    cert = search.certify_counterexample(args.n, s, args.grid)
    return f"s{s!r}", [cert.to_dict()], None


def cmd_dbar(args):
    m = args.samples or 500
    if m < 2:
        raise ValidationError("--samples must be >= 2")
    lo, width = bounds.THRESHOLD_3D, math.pi / 3
    # interior nodes of m equal subintervals; m even puts a node at 5 pi / 6
    recs = []
    for k in range(1, m):
        r = lo + k * width / m
        recs.append({"r": r, "dbar": bounds.dbar(r)})
    return f"samples{m}", recs, ("r", ["dbar"], "Dbar on (2pi/3, pi)")


def cmd_dbar_min(args):
    res = bounds.minimize_dbar(args.tolerance)
    rec = {"r_star": res.r_star, "d_star": res.d_star, "evaluations": res.evaluations,
           "r_star_over_pi": res.r_star / math.pi, "d_star_over_pi": res.d_star / math.pi}
    return f"tol{args.tolerance!r}", [rec], None


def cmd_table1(args):
    if args.n < 3:
        raise ValidationError("table1 needs n >= 3")
    return "rows", [rec.csv_row() for rec in bounds.table1(args.n)], None


def cmd_geodesic(args):
    p = _family(args)
    r0 = math.pi / 2 if args.r is None else args.r
    if not 0 <= r0 <= math.pi:
        raise ValidationError("--r must lie in [0, pi]")
    length = 2 * math.pi if args.length is None else args.length
    if not length > 0:
        raise ValidationError("--length must be positive")
    path = shoot_geodesic(p.a, (r0, 0.0), args.angle, length)
    recs = [{"t": float(t), "r": s.r, "phi": s.phi, "dr": s.dr, "dphi": s.dphi, "clairaut": s.clairaut}
            for t, s in zip(path.arc_lengths, path.states)]
    tag = f"{_family_tag(p)}_r{r0!r}_angle{args.angle!r}_length{length!r}"
    return tag, recs, ("t", ["r", "phi"], "geodesic coordinates")


def cmd_inj(args):
    p = _family(args)
    m = args.samples or 16
    rep = injectivity_radius(p.a, m, max(8, m // 2))
    rec = {"conjugate_radius": rep.conjugate_radius, "half_systole": rep.half_systole,
           "inj_estimate": rep.inj_estimate, "conjugate_witness": rep.witnesses[0],
           "systole_witness": rep.witnesses[1]}
    return f"{_family_tag(p)}_samples{m}", [rec], None


def cmd_inj_trend(args):
    m = args.samples or 3
    s_max = 0.2 if args.s is None else args.s
    if m < 2 or not 0 < s_max <= 1:
        raise ValidationError("need --samples >= 2 and 0 < --s <= 1")
    s_values = np.linspace(0.0, s_max, m)
    recs = [{"s": s, "rescaled_inj": v} for s, v in search.rescaled_inj_trend(args.n, s_values)]
    return f"smax{s_max!r}_samples{m}", recs, ("s", ["rescaled_inj"], "rescaled injectivity radius")


def cmd_bounds(args):
    n = args.n
    if n < 3:
        raise ValidationError("bounds needs n >= 3")
    r = 5 * math.pi / 6 if args.r is None else args.r
    trials = args.samples or 200
    p = WarpFamilyParams.from_s(n, 0.0 if args.s is None else args.s)
    recs = [
        {"name": "green_conjugacy_bound(n, n(n-1))", "value": bounds.green_conjugacy_bound(n, n * (n - 1))},
        {"name": "band_bound", "value": bounds.band_bound(n)},
        {"name": "band_model_separation", "value": bounds.band_model_separation(n)},
        {"name": "bonnet_myers_bound", "value": bounds.bonnet_myers_bound(n)},
        {"name": "mu_bubble_delta(band_bound(3))", "value": bounds.mu_bubble_delta(bounds.band_bound(3))},
        {"name": "dbar(r)", "value": bounds.dbar(r)},
        {"name": "dbar_fixed_point_residual(r)", "value": bounds.dbar_fixed_point_residual(r)},
        {"name": "projection_min_difference", "value": projection_nonexpansion_check(
            p.a, p.b, n, trials, seed=args.seed)},
    ]
    return f"r{r!r}_seed{args.seed}", recs, None


COMMANDS = {
    "scal-profile": (cmd_scal_profile, "scalar curvature profile of a family member, poles included",
                     ["family", "grid"]),
    "band-check": (cmd_band_check, "residual of the constant-curvature model band", ["samples"]),
    "region-scan": (cmd_region_scan, "classify the (alpha, beta) rectangle by curvature conditions",
                    ["window", "resolution", "grid"]),
    "corner-roots": (cmd_corner_roots, "blind Newton solve of the two endpoint equations", []),
    "segment-sweep": (cmd_segment_sweep, "certificates along the deformation segment s in [0, 1]",
                      ["samples", "grid"]),
    "certify": (cmd_certify, "counterexample certificate at one segment parameter", ["s", "grid"]),
    "dbar": (cmd_dbar, "sample the Dbar diameter threshold on (2pi/3, pi)", ["samples"]),
    "dbar-min": (cmd_dbar_min, "golden-section minimum of Dbar", ["tolerance"]),
    "table1": (cmd_table1, "injectivity radii of the classical examples, printed and recomputed", []),
    "geodesic": (cmd_geodesic, "shoot one geodesic on the 2-sphere factor", ["family", "r", "geodesic"]),
    "inj": (cmd_inj, "injectivity radius estimate of the 2-sphere factor", ["family", "samples"]),
    "inj-trend": (cmd_inj_trend, "rescaled injectivity radius along the segment", ["s", "samples"]),
    "bounds": (cmd_bounds, "closed-form bounds and the projection non-expansion check",
               ["r", "s", "samples", "seed"]),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="warplab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text, groups) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text,
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.add_argument("--n", type=int, default=4, help="total dimension")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--plot", action="store_true", help="also write a gnuplot script")
        if "family" in groups:
            sp.add_argument("--alpha", type=float, default=None, help="sin 3r coefficient (default 0)")
            sp.add_argument("--beta", type=float, default=None, help="sin^2 r coefficient of b (default 0)")
            sp.add_argument("--s", type=float, default=None, help="segment parameter, instead of alpha/beta")
        elif "s" in groups:
            sp.add_argument("--s", type=float, default=None, help="segment parameter")
        if "grid" in groups:
            sp.add_argument("--grid", type=int, default=2001, help="radial grid points")
        if "samples" in groups:
            sp.add_argument("--samples", type=int, default=None, help="sample count (command-specific default)")
        if "window" in groups:
            sp.add_argument("--alpha-min", type=float, default=search.DEFAULT_ALPHA_RANGE[0])
            sp.add_argument("--alpha-max", type=float, default=search.DEFAULT_ALPHA_RANGE[1])
            sp.add_argument("--beta-min", type=float, default=search.DEFAULT_BETA_RANGE[0])
            sp.add_argument("--beta-max", type=float, default=search.DEFAULT_BETA_RANGE[1])
        if "resolution" in groups:
            sp.add_argument("--resolution", type=int, default=128, help="cells per axis")
        if "r" in groups:
            sp.add_argument("--r", type=float, default=None, help="radius")
        if "geodesic" in groups:
            sp.add_argument("--angle", type=float, default=math.pi / 2,
                            help="launch angle from the outward meridian")
            sp.add_argument("--length", type=float, default=None, help="arc length (default 2pi)")
        if "tolerance" in groups:
            sp.add_argument("--tolerance", type=float, default=1e-8)
        if "seed" in groups:
            sp.add_argument("--seed", type=int, default=0, help="random seed")
    return parser


def _plot_script(data_name: str, spec) -> str:
    x, ys, title = spec
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set title '{title}'",
        f"set xlabel '{x}'",
    ]
    plots = [f"'{data_name}' using '{x}':'{y}' with lines" for y in ys]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        tag, records, plot = func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    if not records:
        print("numerical failure: no results", file=sys.stderr)
        return 1
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        stem = f"{args.command}-{args.n}-{tag}"
        written = []
        formats = {args.format} | ({"csv"} if args.plot else set())
        for fmt in sorted(formats):
            path = args.out / f"{stem}.{fmt}"
            (write_csv if fmt == "csv" else write_json)(path, records)
            written.append(path)
        if args.plot and plot is not None:
            path = args.out / f"{stem}.gp"
            path.write_text(_plot_script(f"{stem}.csv", plot), newline="\n")
            written.append(path)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
