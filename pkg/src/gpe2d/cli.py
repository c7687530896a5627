"""Command-line front end.

Exit codes: 0 completed, 2 config error, 3 blow-up detected, 4 I/O error.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import io as gio
from .diagnostics import relative_drift
from .experiments import Axis, ScenarioSpec, format_tables, run_spatial_study, run_temporal_study
from .model import QuadraticPotential
from .stepper import Status, run_model

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_IO = 4

log = logging.getLogger("gpe2d")


def _parse_list(text: str) -> list[float]:
    try:
        return [float(Fraction(x.strip())) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _load(args) -> gio.RunConfig:
    if args.config is None:
        return gio.parse_config("", args.set)
    return gio.load_config(args.config, args.set)


def _outdir(args, cfg) -> Path:
    return Path(args.out if args.out else cfg.output.directory)


def _label(cfg) -> str:
    pot = cfg.model.potential
    return pot.label() if isinstance(pot, QuadraticPotential) else "0"


def cmd_run(args) -> int:
    cfg = _load(args)
    out = _outdir(args, cfg)
    log.info("running %d steps on a %dx%d grid", cfg.evolution.n_steps, cfg.grid.nx, cfg.grid.ny)
    res = run_model(cfg.model, cfg.grid, cfg.evolution, threshold_factor=cfg.threshold_factor)
    finite = [r for r in res.diagnostics if r.finite]
    out.mkdir(parents=True, exist_ok=True)
    if cfg.output.timeseries:
        gio.write_timeseries(res.diagnostics, out / "timeseries.csv")
    if cfg.output.snapshots:
        for t, f in res.snapshots.items():
            gio.write_snapshot(f, out / f"snapshot_t{t:.6f}.gpe2")
    summary = {
        "status": res.status.value,
        "blowup_time": res.blowup_time,
        "t_final": res.t_final,
        "steps": round(res.t_final / cfg.evolution.dt),
        "mass_drift": relative_drift(finite, "mass"),
        "energy_drift": relative_drift(finite, "energy") if finite[0].energy != 0 else None,
        "max_density": max(r.max_density for r in finite),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    for k, v in summary.items():
        print(f"{k}: {v}")
    return EXIT_OK if res.status is Status.COMPLETED else EXIT_BLOWUP


def _converge(args, axis: Axis) -> int:
    cfg = _load(args)
    out = _outdir(args, cfg)
    scenario = ScenarioSpec(cfg.grid, cfg.model, cfg.evolution.T, _label(cfg),
                            cfg.evolution.scheme, cfg.threshold_factor)
    if axis is Axis.SPATIAL:
        resolutions = args.h or [1 / 4, 1 / 8, 1 / 16, 1 / 32]
        table = run_spatial_study(scenario, resolutions, args.dt_ref or cfg.evolution.dt)
    else:
        resolutions = args.dt or [0.01, 0.005, 0.0025, 0.00125, 0.000625]
        h = args.h_fixed or cfg.grid.dx
        table = run_temporal_study(scenario, resolutions, h)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"convergence_{axis.value}.csv").write_text(table.to_csv())
    text = format_tables([table])
    (out / f"convergence_{axis.value}.txt").write_text(text)
    print(text, end="")
    order = table.fitted_order
    print("fitted order: " + ("n/a" if order is None else f"{order:.4f}"))
    return EXIT_OK if table.complete else EXIT_BLOWUP


def cmd_describe(args) -> int:
    cfg = _load(args)
    print(gio.serialize_config(cfg), end="")
    g, e = cfg.grid, cfg.evolution
    print("[derived]")
    print(f"dx = {g.dx!r}")
    print(f"dy = {g.dy!r}")
    print(f"steps = {e.n_steps}")
    print(f"nodes = {g.nx * g.ny}")
    # field, spectrum, potential and one temporary
    print(f"memory_estimate_mb = {g.nx * g.ny * (16 * 3 + 8) / 2**20:.1f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpe2d", description="2D GPE time-splitting solver")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", nargs="?", help="config file (defaults used if omitted)")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a config key; repeatable")
    common.add_argument("--out", help="output directory (overrides output.directory)")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="evolve one configuration")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("converge-space", parents=[common], help="spatial self-convergence study")
    p.add_argument("--h", type=_parse_list, help="mesh sizes, e.g. 1/4,1/8,1/16")
    p.add_argument("--dt-ref", type=float, help="fixed time step (default: evolution.dt)")
    p.set_defaults(func=lambda a: _converge(a, Axis.SPATIAL))
    p = sub.add_parser("converge-time", parents=[common], help="temporal self-convergence study")
    p.add_argument("--dt", type=_parse_list, help="time steps, e.g. 0.01,0.005")
    p.add_argument("--h-fixed", type=lambda s: float(Fraction(s)),
                   help="mesh size (default: grid dx)")
    p.set_defaults(func=lambda a: _converge(a, Axis.TEMPORAL))
    p = sub.add_parser("describe", parents=[common], help="print the resolved config")
    p.set_defaults(func=cmd_describe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(message)s")
    try:
        if args.config is not None and not Path(args.config).is_file():
            print(f"I/O error: config file not found: {args.config}", file=sys.stderr)
            return EXIT_IO
        return args.func(args)
    except gio.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (gio.SnapshotFormatError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
