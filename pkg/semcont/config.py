"""
Application configuration module.

Loads environment variables (optionally from a .env file) and exposes a single
`settings` instance.

Usage:
    from semcont.config import settings
    print(settings.SEMCONT_THREADS)
"""

import os

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _threads_from_env() -> int:
    raw = os.getenv("SEMCONT_THREADS", "")
    if not raw.strip():
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class Settings:
    """Settings loaded from environment variables."""

    # ===================
    # RUNTIME SETTINGS
    # ===================
    # Upper bound on worker threads for frames, masks and experiment cells
    SEMCONT_THREADS: int = _threads_from_env()
    SEMCONT_LOG_LEVEL: str = os.getenv("SEMCONT_LOG_LEVEL", "INFO").upper()
    SEMCONT_PROGRESS: bool = os.getenv("SEMCONT_PROGRESS", "1").lower() in ("1", "true", "yes")

    # ===================
    # LEDGER SETTINGS
    # ===================
    # None -> sqlite file inside the artifact directory; "" -> ledger disabled
    SEMCONT_LEDGER_URL: str | None = os.getenv("SEMCONT_LEDGER_URL")

    # ===================
    # IMAGE SETTINGS
    # ===================
    IMAGE_SIZE: int = 64
    SIGNIFICANCE_LEVEL: float = 0.05


# Create a global settings instance
settings = Settings()
