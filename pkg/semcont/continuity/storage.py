"""Evaluation artifacts on disk (JSON, format_version 1)."""

import json
from pathlib import Path

from pydantic import ValidationError

from semcont.errors import CorruptFileError, DataError, VersionError
from semcont.schemas.continuity import EVALUATION_FORMAT_VERSION, SeriesEvaluation
from semcont.utils.files import atomic_write_text


def evaluation_to_json(evaluation: SeriesEvaluation) -> str:
    return json.dumps(evaluation.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def save_evaluation(evaluation: SeriesEvaluation, path: str | Path) -> Path:
    path = Path(path)
    atomic_write_text(path, evaluation_to_json(evaluation))
    return path


def load_evaluation(path: str | Path) -> SeriesEvaluation:
    """
    Raises:
        DataError: missing file or invalid content
        CorruptFileError: not JSON
        VersionError: unsupported format_version
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no evaluation file at {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    if data.get("format_version") != EVALUATION_FORMAT_VERSION:
        raise VersionError(f"{path}: unsupported evaluation format {data.get('format_version')!r}")
    try:
        return SeriesEvaluation.model_validate(data)
    except ValidationError as exc:
        raise DataError(f"{path}: invalid evaluation: {exc}") from exc
