"""
Command-line entry point.

    semcont gen | train | explain | eval | report | run

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
"""

import argparse
import logging
import sys

from pydantic import ValidationError

from semcont import __version__
from semcont.commands import COMMANDS
from semcont.config import settings
from semcont.errors import ConfigError, SemcontError
from semcont.utils.logging import setup_logging

logger = logging.getLogger("semcont")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semcont",
        description="Semantic continuity evaluation of saliency explainers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.SEMCONT_LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except SemcontError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except ValidationError as exc:
        logger.error("invalid option: %s", exc)
        return ConfigError.exit_code


if __name__ == "__main__":
    sys.exit(main())
