"""
Exception hierarchy.

Every error raised on purpose by semcont derives from `SemcontError` and
carries the process exit code the CLI reports for it:
0 success, 2 config error, 3 data error, 4 numeric failure.
"""


class SemcontError(Exception):
    """Base class for all semcont errors."""

    exit_code: int = 1


# ====================
# CONFIG ERRORS (exit 2)
# ====================
class ConfigError(SemcontError):
    """Invalid configuration value or unknown key."""

    exit_code = 2

    def __init__(self, message: str, key_path: str | None = None):
        self.key_path = key_path
        if key_path:
            message = f"{key_path}: {message}"
        super().__init__(message)


# ====================
# DATA ERRORS (exit 3)
# ====================
class DataError(SemcontError):
    """Input data is malformed, inconsistent or missing."""

    exit_code = 3


class DimensionMismatchError(DataError):
    """Array shapes do not agree."""


class CorruptFileError(DataError):
    """A file on disk is truncated or unreadable."""


class VersionError(DataError):
    """A file has the wrong magic bytes or an unsupported format version."""


# ====================
# NUMERIC ERRORS (exit 4)
# ====================
class NumericError(SemcontError):
    """Non-finite values or a numerical procedure that cannot proceed."""

    exit_code = 4


class DivergenceError(NumericError):
    """Training loss became non-finite."""


class SingularSystemError(NumericError):
    """A regression system has no unique solution."""


class UndefinedCorrelationError(NumericError):
    """Correlation is undefined (constant input)."""


class FrameError(SemcontError):
    """Wraps a failure on one frame of a series, keeping the original exit code."""

    def __init__(self, frame_index: int, cause: SemcontError):
        self.frame_index = frame_index
        self.cause = cause
        self.exit_code = cause.exit_code
        super().__init__(f"frame {frame_index}: {cause}")
