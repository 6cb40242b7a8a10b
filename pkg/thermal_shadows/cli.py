# cli.py
"""Command-line entry point: ``thermal-shadows <command> [options]``.

Each command writes one CSV (stdout unless ``--out`` is given). Exit status
is 0 on success, 2 on invalid input or configuration and 1 when a numerical
routine fails to converge.
"""
import argparse
import csv
import logging
import sys
import time

from .commands import get_command_registry
from .errors import ConvergenceError, ValidationError
from .experiments import ExperimentConfig
from .settings import configure_logging, get_settings

logger = logging.getLogger(__name__)

OVERRIDES = (
    ("--n", int),
    ("--beta", float),
    ("--epsilon", float),
    ("--delta", float),
    ("--bound", str),
    ("--degree", int),
    ("--samples", int),
    ("--source", str),
    ("--ensemble", str),
    ("--kernel-scale", float),
    ("--fidelity", float),
)


def build_parser(registry):
    parser = argparse.ArgumentParser(prog="thermal-shadows", description="Pure thermal shadows numerical lab")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="overrides THERMAL_SHADOWS_LOG_LEVEL",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for info in registry.list_commands():
        cmd = sub.add_parser(info["name"], help=info["description"])
        cmd.add_argument("--config", help="JSON file with ExperimentConfig fields")
        cmd.add_argument("--out", help="CSV destination (default: stdout)")
        cmd.add_argument("--summary-out", help="CSV destination for the per-group summary")
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--workers", type=int)
        for flag, kind in OVERRIDES:
            cmd.add_argument(flag, type=kind)
    return parser


def write_csv(rows, path=None):
    """Write ``rows`` with the column order of the first row."""
    if not rows:
        logger.warning("Nothing to write")
        return
    fh = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if path:
            fh.close()


def load_config(args):
    config = ExperimentConfig.from_json_file(args.config) if args.config else ExperimentConfig()
    overrides = {flag[2:].replace("-", "_"): getattr(args, flag[2:].replace("-", "_")) for flag, _ in OVERRIDES}
    workers = args.workers if args.workers is not None else (None if args.config else get_settings().workers)
    return config.with_overrides(seed=args.seed, workers=workers, **overrides)


def main(argv=None):
    registry = get_command_registry()
    args = build_parser(registry).parse_args(argv)
    try:
        configure_logging(args.log_level)
        config = load_config(args)
        logger.info("Running %s (seed %d, %d worker(s))", args.command, config.seed, config.workers)
        started = time.perf_counter()
        rows, summary = registry.invoke(args.command, config)
        write_csv(rows, args.out)
        if args.summary_out:
            write_csv(summary, args.summary_out)
        logger.info("%s finished in %.1fs with %d rows", args.command, time.perf_counter() - started, len(rows))
    except ValidationError as exc:
        logger.error("%s", exc)
        return 2
    except ConvergenceError as exc:
        logger.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
