"""Command-line entry point.

Subcommands: closed-sweep, open-run, open-scaling (all driven by a config
file) and figure <1..9> (preset reproduction). Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""

import argparse
import sys

from . import __version__
from .config import parse_config
from .errors import ConfigError, ConfigValidation, NumericalBlowup


def _build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", required=True, help="output directory")
    shared.add_argument("--workers", type=int, default=None, help="worker pool size")
    shared.add_argument("--dt", type=float, default=None, help="integrator step override")
    shared.add_argument("--t-max", type=float, default=None, help="integration horizon override")
    shared.add_argument("--no-plots", action="store_true", help="skip PNG rendering")

    parser = argparse.ArgumentParser(
        prog="qbattery",
        description="spin-chain quantum battery experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("closed-sweep", "open-run", "open-scaling"):
        p = sub.add_parser(name, parents=[shared])
        p.add_argument("--config", required=True, help="configuration file")

    fig = sub.add_parser("figure", parents=[shared])
    fig.add_argument("fig_id", type=int, help="figure number, 1..9")
    return parser


def _load_config(path, command, args):
    with open(path, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    expected = command.replace("-", "_")
    if cfg.mode != expected:
        raise ConfigValidation("mode", f"config mode {cfg.mode} does not match subcommand {command}")
    overridden = set()
    if args.dt is not None:
        cfg.dt = args.dt
        overridden.add("integrate.dt")
    if args.t_max is not None:
        cfg.t_max = args.t_max
        overridden.add("integrate.t_max")
    if args.workers is not None:
        cfg.workers = args.workers
        overridden.add("output.workers")
    if overridden:
        # a flag override is an explicit choice, not an assumed default
        cfg.assumed = tuple(key for key in cfg.assumed if key not in overridden)
    return cfg


def main(argv=None):
    args = _build_parser().parse_args(argv)
    from . import runner

    try:
        if args.command == "figure":
            paths = runner.reproduce_figure(
                args.fig_id, args.out, workers=args.workers or 1,
                plots=not args.no_plots, dt=args.dt, t_max=args.t_max,
            )
        else:
            cfg = _load_config(args.config, args.command, args)
            for key in cfg.assumed:
                print(f"assumed {key} = default")
            dispatch = {
                "closed-sweep": runner.run_closed_sweep,
                "open-run": runner.run_open_single,
                "open-scaling": runner.run_open_scaling,
            }
            paths = dispatch[args.command](cfg, args.out, plots=not args.no_plots)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalBlowup as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
