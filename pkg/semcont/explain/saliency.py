"""
Saliency maps: the heatmap E(M; x) an explainer produces for one image.

On disk a map is a JSON sidecar plus a raw little-endian float32 blob.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np
from pydantic import ValidationError

from semcont.errors import CorruptFileError, DataError, NumericError
from semcont.schemas.explainer import SaliencySidecar
from semcont.utils.files import atomic_write_bytes, atomic_write_text


@dataclass(frozen=True, eq=False)
class SaliencyMap:
    """
    Attribution heatmap for the positive class.

    Attributes:
        values: (H, W) float32, finite
        explainer_id: Name of the explainer
        rng_seed: Seed used, None for deterministic explainers
        empty: True when the explainer produced no signal (all-zero map)
        config: Echo of the explainer hyperparameters
    """

    values: np.ndarray
    explainer_id: str
    rng_seed: int | None = None
    empty: bool = False
    target_class: str = "positive"
    config: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float32, copy=True)
        if values.ndim != 2:
            raise DataError(f"saliency values must be 2-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericError(f"{self.explainer_id}: saliency map has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "config", MappingProxyType(dict(self.config)))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def normalize_map(saliency: SaliencyMap) -> SaliencyMap:
    """
    Min-max rescale to [0, 1]; constant maps become all zeros.

    Example:
        values [2, 4, 6] -> [0, 0.5, 1]
    """
    values = np.asarray(saliency.values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NumericError("cannot normalize a map with non-finite values")
    low, high = values.min(), values.max()
    if high > low:
        scaled = (values - low) / (high - low)
    else:
        scaled = np.zeros_like(values)
    return replace(saliency, values=scaled.astype(np.float32))


# ====================
# STORAGE
# ====================
def save_map(saliency: SaliencyMap, path_stem: str | Path) -> Path:
    """Write <stem>.json and <stem>.f32; returns the JSON path."""
    stem = Path(path_stem)
    sidecar = SaliencySidecar(
        explainer_id=saliency.explainer_id,
        target_class=saliency.target_class,
        width=saliency.width,
        height=saliency.height,
        seed=saliency.rng_seed,
        empty=saliency.empty,
        config=dict(saliency.config),
    )
    atomic_write_bytes(stem.with_suffix(".f32"), saliency.values.astype("<f4").tobytes(order="C"))
    json_path = stem.with_suffix(".json")
    atomic_write_text(json_path, json.dumps(sidecar.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")
    return json_path


def load_map(path_stem: str | Path) -> SaliencyMap:
    """
    Read a map written by save_map.

    Raises:
        DataError: missing files or invalid sidecar
        CorruptFileError: blob size does not match the sidecar dimensions
    """
    stem = Path(path_stem)
    json_path, blob_path = stem.with_suffix(".json"), stem.with_suffix(".f32")
    if not json_path.exists() or not blob_path.exists():
        raise DataError(f"missing saliency files for {stem}")
    try:
        sidecar = SaliencySidecar.model_validate(json.loads(json_path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise DataError(f"{json_path}: invalid sidecar: {exc}") from exc
    blob = blob_path.read_bytes()
    if len(blob) != 4 * sidecar.width * sidecar.height:
        raise CorruptFileError(f"{blob_path}: size {len(blob)} does not match {sidecar.height}x{sidecar.width}")
    values = np.frombuffer(blob, dtype="<f4").reshape(sidecar.height, sidecar.width)
    return SaliencyMap(
        values=values,
        explainer_id=sidecar.explainer_id,
        rng_seed=sidecar.seed,
        empty=sidecar.empty,
        target_class=sidecar.target_class,
        config=sidecar.config,
    )
