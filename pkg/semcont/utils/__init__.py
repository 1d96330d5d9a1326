"""Shared helpers: atomic file writes, hashing, logging and thread pools."""

from semcont.utils.files import atomic_write_bytes, atomic_write_text, sha256_bytes, sha256_file
from semcont.utils.logging import setup_logging
from semcont.utils.parallel import parallel_map, progress

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "sha256_bytes",
    "sha256_file",
    "setup_logging",
    "parallel_map",
    "progress",
]
