"""
Entry point of the ``qbgeom`` command line.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv
from pydantic import ValidationError

from . import __version__
from .commands import (
    common_options,
    figure,
    physics_options,
    simulate,
    sweep,
    validate,
)
from .config import apply_config, config_flags, config_path, load_config
from .exceptions import EXIT_IO, EXIT_USAGE, DomainError, OutputError

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def build_parser() -> Tuple[
    argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]
]:
    parser = argparse.ArgumentParser(
        prog="qbgeom",
        description=(
            "Two-qubit quantum battery in a Lorentzian reservoir: trajectories, "
            "geometry sweeps, figure datasets and validation"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = common_options()
    physics = physics_options()
    simulate.register(subparsers, [common, physics])
    sweep.register(subparsers, [common, physics])
    figure.register(subparsers, [common, physics])
    validate.register(subparsers, [common])
    return parser, subparsers.choices


def configure_logging(verbosity: int) -> None:
    level = LOG_LEVELS[min(max(verbosity, 0), len(LOG_LEVELS) - 1)]
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _without_config(argv: List[str]) -> List[str]:
    kept = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--config":
            next(tokens, None)
        elif not token.startswith("--config="):
            kept.append(token)
    return kept


def _parse(argv: List[str]) -> Tuple[argparse.Namespace, List[str]]:
    """Parse ``argv`` with config-file defaults applied.

    Also returns the invocation to record: with a config file in effect, its
    values are spliced in as flags after the subcommand and followed by
    ``--no-config``.
    """
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    if args.no_config:
        return args, argv
    config = load_config(config_path(args.config))
    if not config:
        return args, argv

    command = commands[args.command]
    apply_config(command, config)
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    recorded = _without_config(argv)
    position = recorded.index(args.command) + 1
    recorded[position:position] = config_flags(command, config) + ["--no-config"]
    return args, recorded


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    argv = list(sys.argv[1:] if argv is None else argv)

    try:
        args, recorded = _parse(argv)
        return args.handler(args, recorded)
    except SystemExit as exc:
        # argparse: 0 for --help/--version, 2 for bad usage
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ValidationError as exc:
        print(f"❌ Invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
