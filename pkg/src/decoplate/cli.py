"""Command-line entry point: ``decoplate <subcommand>``.

Exit codes: 0 success, 2 configuration error, 3 domain error, 4 numeric
error, 5 oracle size guard.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import config as cfgmod
from . import evolver, interference, profiles, selftest, sweep, timescales
from .errors import DecoplateError, NumericError
from .output import csv_text, json_text, svg_line_chart, write_atomic
from .quantities import metre

ORACLE_TOL = 1e-10


def _load(path):
    cfg = cfgmod.load_config(path)
    print(f"effective config: {cfgmod.dumps(cfg)}", file=sys.stderr)
    return cfg


def cmd_timescales(args) -> int:
    cfg = _load(args.config)
    spec = cfgmod.experiment_from_config(cfg)
    z = args.z if args.z is not None else cfg["geometry"]["z_m"]
    dx = args.dx if args.dx is not None else cfg["geometry"]["slit_separation_m"]
    fields = timescales.report(spec, metre(z), metre(dx)).as_dict()
    if math.isinf(fields["tau_d_s"]):
        fields["tau_d_s"] = None  # coincident paths never decohere; JSON has no infinity
    sys.stdout.write(json_text(fields))
    return 0


def _coherence(cfg, spec) -> float:
    g = cfg["geometry"]
    _, _, _, mag = sweep.coherence_factor(spec, metre(g["z_m"]), metre(g["slit_separation_m"]),
                                          cfg["profile"]["kind"], cfgmod.correlation_length(cfg))
    return mag


def cmd_pattern(args) -> int:
    cfg = _load(args.config)
    spec = cfgmod.experiment_from_config(cfg)
    g = spec.geometry
    geom = interference.SlitGeometry.for_particle(
        spec.particle, g.slit_separation, g.slit_width, g.screen_distance, g.window, g.n_samples)
    pat = interference.pattern(geom, _coherence(cfg, spec))
    write_atomic(args.out, csv_text(("q_screen_m", "probability_density"),
                                    zip(pat.positions, pat.density)))
    if args.svg:
        vis = interference.visibility(pat)
        write_atomic(args.svg, svg_line_chart(
            pat.positions, pat.density, title=f"double-slit pattern, visibility {vis:.4f}",
            xlabel="screen position (m)", ylabel="probability density (arb.)"))
    return 0


def _grid(cfg, spec) -> sweep.SweepGrid:
    s = cfg["sweep"]
    return sweep.SweepGrid.spaced(spec, s["z_min"], s["z_max"], s["z_count"],
                                  s["dx_min"], s["dx_max"], s["dx_count"], s["spacing"])


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    spec = cfgmod.experiment_from_config(cfg)
    grid = _grid(cfg, spec)
    result = sweep.run_sweep(grid, cfg["profile"]["kind"], cfgmod.correlation_length(cfg),
                             workers=args.workers)
    write_atomic(args.out, csv_text(sweep.COLUMNS, (row.values() for row in result.rows)))
    if args.crossover:
        write_atomic(args.crossover, csv_text(("dx_m", "z_star_m"), sweep.crossover_curve(grid)))
    return 0


def cmd_crossing(args) -> int:
    cfg = _load(args.config)
    spec = cfgmod.experiment_from_config(cfg)
    dx = cfg["geometry"]["slit_separation_m"]
    z_star = timescales.crossing_height(spec, metre(dx)).value
    sys.stdout.write(json_text({"dx_m": dx, "z_star_m": z_star}))
    return 0


def cmd_oracle(args) -> int:
    rep = evolver.oracle_report(args.sites, args.steps, args.profile, args.seed)
    write_atomic(args.out, json_text(rep))
    if not rep["max_abs_entry_diff"] <= ORACLE_TOL:
        raise NumericError(f"evolve and path sum differ by {rep['max_abs_entry_diff']:.3g} > {ORACLE_TOL}")
    return 0


def cmd_selftest(args) -> int:
    return 0 if selftest.run_all() else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoplate",
        description="Decoherence of charged particles flying over a resistive plate.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("timescales", help="JSON report of dissipation and decoherence time scales")
    p.add_argument("--config", required=True)
    p.add_argument("--z", type=float, help="flight height in m (default geometry.z_m)")
    p.add_argument("--dx", type=float, help="path separation in m (default geometry.slit_separation_m)")
    p.set_defaults(func=cmd_timescales)

    p = sub.add_parser("pattern", help="double-slit screen pattern as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("sweep", help="visibility over the (z, dx) grid as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--crossover")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crossing", help="height where decoherence time equals time of flight")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("oracle", help="compare lattice evolution against brute-force path sums")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--profile", choices=profiles.KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    for name in ("z", "dx"):
        value = getattr(args, name, None)
        if value is not None and not math.isfinite(value):
            print(f"error: --{name} must be finite", file=sys.stderr)
            return 3
    try:
        return args.func(args)
    except DecoplateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
