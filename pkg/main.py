import argparse
import logging
import sys

from backend.cli import command_cache, command_poly, command_qcheck, command_selberg, command_verify
from backend.models.db import init_db

COMMANDS = (command_poly, command_verify, command_qcheck, command_selberg, command_cache)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macsel",
        description="Exact Macdonald polynomials and a verification harness for their q-series, "
                    "q-integral and sl3 Selberg identities.",
    )
    level = parser.add_mutually_exclusive_group()
    level.add_argument("--verbose", action="store_true", help="log at DEBUG")
    level.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    # The cache table has to exist before any service touches it
    init_db(getattr(args, "cache_dir", None))
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
