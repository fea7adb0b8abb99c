"""Command-line entry point: ``rmdspin <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 every run censored.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from rmdspin import experiments as ex

EXIT_OK, EXIT_CONFIG, EXIT_CENSORED = 0, 2, 3

COMMANDS = {
    "simulate": ex.cmd_simulate,
    "sweep": ex.cmd_scaling_sweep,
    "h-zero": ex.cmd_h_zero,
    "phase-diagram": ex.cmd_phase_diagram,
    "rondeau": ex.cmd_rondeau,
    "finite-size": ex.cmd_finite_size,
    "calibrate": ex.cmd_calibrate,
}


def _parse_set(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ex.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config file or a previous manifest.json")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--step-cap", type=int, dest="step_cap", help="maximum periods per run")
    common.add_argument("--drives", nargs="+", help="drives, e.g. rmd0 rmd1 thue-morse floquet")
    common.add_argument("--inv-T", nargs="+", type=float, dest="inv_T", help="drive frequencies 1/T")
    common.add_argument("-N", type=int, dest="N", help="lattice linear size")
    common.add_argument("--dump-labels", type=int, dest="dump_labels", metavar="K",
                        help="simulate: write the first K drive labels to labels.txt")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key (value parsed as JSON)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rmdspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMANDS[name].__doc__.splitlines()[0] if COMMANDS[name].__doc__ else None)
    return parser


def make_config(args: argparse.Namespace) -> ex.ExperimentConfig:
    cfg = ex.ExperimentConfig.load(args.config) if args.config else ex.ExperimentConfig()
    overrides = {k: getattr(args, k) for k in
                 ("out", "seed", "threads", "step_cap", "drives", "inv_T", "N", "dump_labels")}
    if args.inv_T:
        overrides["inv_T"] = [int(f) if float(f).is_integer() else f for f in args.inv_T]
    overrides.update(_parse_set(args.set))
    return cfg.updated(**overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
    except (ex.ConfigError, TypeError) as exc:
        parser.error(str(exc))  # exits with status 2
    result = COMMANDS[args.command](cfg)
    if isinstance(result, ex.SweepResult) and result.all_censored:
        print("every run reached the step cap without thermalizing", file=sys.stderr)
        return EXIT_CENSORED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
