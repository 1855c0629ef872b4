"""Command-line entry point: ``vitaldoppler <subcommand> [--config FILE] [--field VALUE ...]``."""

import argparse
import logging
import sys

from .config import FIELDS, load_config
from .errors import ConfigError, VitalDopplerError
from .pipeline import STAGES, format_estimates, run_scenario

log = logging.getLogger("vitaldoppler")

EXIT_OK, EXIT_CONFIG, EXIT_PIPELINE = 0, 1, 2

SUBCOMMANDS = {
    "synth": (("synth",), "synthesize displacement traces and the baseband signal"),
    "map": (("map",), "velocity-time maps of respiration, heartbeat and combined signals"),
    "phase": (("phase",), "unwrapped phase, its derivative and its spectrum"),
    "slice": (("slice",), "fixed-velocity slice and its spectra, linear and log-compressed"),
    "estimate": (("estimate",), "respiration and heart-rate estimates from both routes"),
    "scenario": (STAGES, "full pipeline: every output above plus figures"),
}


def _add_common(p, figures_default):
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("-v", "--verbose", action="store_true")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--figures", dest="figures", action="store_true", default=figures_default,
                       help="render PNG figures into <output_dir>/figures")
    group.add_argument("--no-figures", dest="figures", action="store_false")
    fields = p.add_argument_group("configuration overrides")
    for key in FIELDS:
        fields.add_argument(f"--{key.replace('_', '-')}", dest=f"field_{key}", metavar="VALUE")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vitaldoppler",
        description="Radar vital-sign simulation: phase extraction vs velocity-time maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in SUBCOMMANDS.items():
        _add_common(sub.add_parser(name, help=help_text), figures_default=name == "scenario")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    overrides = {
        key: getattr(args, f"field_{key}")
        for key in FIELDS
        if getattr(args, f"field_{key}") is not None
    }
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    stages, _ = SUBCOMMANDS[args.command]
    try:
        bundle = run_scenario(cfg, stages=stages, figures=args.figures)
    except VitalDopplerError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    for rel, role in bundle.manifest:
        log.info("wrote %s (%s)", rel, role)
    if bundle.estimates:
        headline = {
            k: v for k, v in bundle.estimates.items() if k.endswith(("_hz", "suppressed"))
        }
        print(format_estimates(headline), end="")
    print(f"{len(bundle.manifest)} files in {bundle.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
