"""
Series and dataset directories.

    <dir>/manifest.json        SeriesManifest or DatasetManifest
    <dir>/frame_0000.pgm       P5 grayscale, maxval 255 (interchange approximation)
    <dir>/frame_0000.f32       raw little-endian float32, row-major (exact pixels)

Loaders prefer the .f32 sidecar and fall back to the PGM.
"""

import io
import json
import logging
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from pydantic import ValidationError

from semcont.errors import CorruptFileError, DataError
from semcont.schemas.shapes import DatasetManifest, SeriesManifest
from semcont.shapes.series import LabeledImages, VariationSeries
from semcont.utils.files import atomic_write_bytes, atomic_write_text

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


# ====================
# FRAMES
# ====================
def encode_pgm(image: np.ndarray) -> bytes:
    """P5 bytes of an image in [0, 1]."""
    pixels = np.clip(np.rint(np.asarray(image, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)
    buffer = io.BytesIO()
    PILImage.fromarray(pixels).save(buffer, format="PPM")
    return buffer.getvalue()


def decode_pgm(data: bytes) -> np.ndarray:
    with PILImage.open(io.BytesIO(data)) as img:
        if img.mode != "L":
            raise CorruptFileError(f"expected a grayscale PGM, got mode {img.mode}")
        return np.asarray(img, dtype=np.float32) / np.float32(255.0)


def _write_frames(directory: Path, frames: np.ndarray, prefix: str = "frame") -> list[str]:
    names = []
    for i, frame in enumerate(frames):
        stem = f"{prefix}_{i:04d}"
        atomic_write_bytes(directory / f"{stem}.pgm", encode_pgm(frame))
        atomic_write_bytes(directory / f"{stem}.f32", np.asarray(frame, dtype="<f4").tobytes(order="C"))
        names.append(f"{stem}.pgm")
    return names


def _read_frame(directory: Path, name: str, shape: tuple[int, int] | None) -> np.ndarray:
    pgm_path = directory / name
    raw_path = pgm_path.with_suffix(".f32")
    if raw_path.exists():
        data = raw_path.read_bytes()
        if shape is None:
            side = int(round(np.sqrt(len(data) // 4)))
            shape = (side, side)
        if len(data) != 4 * shape[0] * shape[1]:
            raise CorruptFileError(f"{raw_path.name}: expected {4 * shape[0] * shape[1]} bytes, got {len(data)}")
        return np.frombuffer(data, dtype="<f4").reshape(shape).astype(np.float32)
    if not pgm_path.exists():
        raise DataError(f"missing frame file {pgm_path}")
    return decode_pgm(pgm_path.read_bytes())


def _read_manifest(directory: Path, schema):
    path = directory / MANIFEST_NAME
    if not path.exists():
        raise DataError(f"no {MANIFEST_NAME} in {directory}")
    try:
        return schema.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    except ValidationError as exc:
        raise DataError(f"{path}: invalid manifest: {exc}") from exc


def _dump(model) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


# ====================
# SERIES
# ====================
def save_series(series: VariationSeries, directory: str | Path) -> Path:
    """Write frames, sidecars and the manifest (last) into `directory`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frame_files = _write_frames(directory, series.frames)
    manifest = SeriesManifest(
        kind=series.kind,
        series_id=series.series_id,
        thetas=[float(t) for t in series.thetas],
        frame_files=frame_files,
        params=dict(series.meta),
    )
    atomic_write_text(directory / MANIFEST_NAME, _dump(manifest))
    logger.info("saved series %s (%d frames) to %s", series.series_id, len(series), directory)
    return directory


def load_series(directory: str | Path) -> VariationSeries:
    """
    Read a series directory.

    Raises:
        DataError: missing/invalid manifest, frame count mismatch, non-increasing
            thetas or missing frame file
        CorruptFileError: unreadable manifest or frame data
    """
    directory = Path(directory)
    manifest = _read_manifest(directory, SeriesManifest)
    first = _read_frame(directory, manifest.frame_files[0], None) if manifest.frame_files else None
    if first is None:
        raise DataError(f"{directory}: series has no frames")
    frames = [first] + [_read_frame(directory, name, first.shape) for name in manifest.frame_files[1:]]
    return VariationSeries(
        kind=manifest.kind,
        series_id=manifest.series_id,
        frames=np.stack(frames),
        thetas=np.asarray(manifest.thetas, dtype=np.float64),
        meta=manifest.params,
    )


# ====================
# LABELED DATASETS
# ====================
def save_dataset(data: LabeledImages, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frame_files = _write_frames(directory, data.images, prefix="image")
    manifest = DatasetManifest(
        seed=data.seed,
        class_names=data.class_names,
        labels=[int(v) for v in data.labels],
        frame_files=frame_files,
    )
    atomic_write_text(directory / MANIFEST_NAME, _dump(manifest))
    logger.info("saved %d labeled images to %s", len(data), directory)
    return directory


def load_dataset(directory: str | Path) -> LabeledImages:
    directory = Path(directory)
    manifest = _read_manifest(directory, DatasetManifest)
    if not manifest.frame_files:
        raise DataError(f"{directory}: dataset has no images")
    first = _read_frame(directory, manifest.frame_files[0], None)
    images = [first] + [_read_frame(directory, name, first.shape) for name in manifest.frame_files[1:]]
    return LabeledImages(
        images=np.stack(images),
        labels=np.asarray(manifest.labels, dtype=np.int64),
        seed=manifest.seed,
        class_names=tuple(manifest.class_names),
    )
