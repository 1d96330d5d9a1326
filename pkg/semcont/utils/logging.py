"""Logging setup for the command line entry point."""

import logging

from semcont.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def setup_logging(level: str | int | None = None) -> None:
    """
    Configure the root logger once.

    Args:
        level: Level name or number; defaults to settings.SEMCONT_LOG_LEVEL
    """
    if level is None:
        level = settings.SEMCONT_LOG_LEVEL
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    # third-party chatter stays at WARNING
    logging.getLogger("PIL").setLevel(logging.WARNING)
    logging.getLogger("sqlalchemy").setLevel(logging.WARNING)
