"""Command-line entry point: ``trihmimo <experiment> --config cfg.json``."""

import argparse
import logging
import sys

from .config import EXPERIMENTS, ConfigError, load_config
from .em_core import SingularityError
from .runner import run

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trihmimo",
        description="Tri-polarized near-field holographic MIMO experiments.")
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name.replace('_', ' ')} experiment")
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        p.add_argument("--out", default=None, help="output directory (overrides the config's 'output')")
        p.add_argument("--dump-channel", action="store_true",
                       help="also write the assembled channel as channel.csv + channel.json")
        p.add_argument("--threads", type=int, default=1, help="worker threads for channel assembly")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        summary = run(cfg, args.experiment, args.out, args.dump_channel, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularityError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"{summary['experiment']}: wrote {', '.join(summary['files'])} "
          f"in {summary['wall_time_s']:.3f} s")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
