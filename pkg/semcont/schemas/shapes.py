"""Pydantic schemas for shape specifications and on-disk series/dataset manifests."""

import enum
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ShapeKind(str, enum.Enum):
    """Shape enumeration; MORPH interpolates circle (t=0) to triangle (t=1)."""
    TRIANGLE = "triangle"
    CIRCLE = "circle"
    MORPH = "morph"


class SeriesKind(str, enum.Enum):
    """Semantic variation enumeration."""
    ROTATION = "rotation"
    CONTRAST = "contrast"
    TRANSITION = "transition"


class ShapeSpec(BaseModel):
    """
    One centred shape on a uniform background.

    Contrast is |fill_level - background_level|. Rotation is clockwise in
    degrees; at 0 the first triangle vertex points up.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ShapeKind = ShapeKind.TRIANGLE
    morph_t: float = Field(0.0, ge=0.0, le=1.0, description="Only used by MORPH")
    rotation_deg: float = 0.0
    fill_level: float = Field(0.1, ge=0.0, le=1.0)
    background_level: float = Field(0.9, ge=0.0, le=1.0)
    circumradius_px: float = Field(20.0, gt=0.0)
    center: Tuple[float, float] = (32.0, 32.0)

    @property
    def contrast(self) -> float:
        return abs(self.fill_level - self.background_level)


class SeriesManifest(BaseModel):
    """manifest.json of a series directory."""
    model_config = ConfigDict(extra="forbid")

    format_version: int = 1
    kind: SeriesKind
    series_id: str
    thetas: List[float]
    frame_files: List[str]
    params: Dict[str, object] = {}

    @field_validator("thetas")
    @classmethod
    def thetas_strictly_increasing(cls, thetas: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError("thetas must be strictly increasing")
        return thetas

    @model_validator(mode="after")
    def frame_count_matches(self) -> "SeriesManifest":
        if len(self.frame_files) != len(self.thetas):
            raise ValueError(f"{len(self.frame_files)} frame files for {len(self.thetas)} thetas")
        return self


class DatasetManifest(BaseModel):
    """manifest.json of a labeled training set directory."""
    model_config = ConfigDict(extra="forbid")

    format_version: int = 1
    seed: int
    class_names: Tuple[str, str] = ("circle", "triangle")
    labels: List[int]
    frame_files: List[str]

    @model_validator(mode="after")
    def frame_count_matches(self) -> "DatasetManifest":
        if len(self.frame_files) != len(self.labels):
            raise ValueError(f"{len(self.frame_files)} frame files for {len(self.labels)} labels")
        return self
