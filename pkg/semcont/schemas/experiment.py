"""
Experiment configuration (TOML) and the artifact manifest.

Unknown keys are rejected everywhere so that typos surface as errors naming
the offending key path.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from semcont.schemas.continuity import EvaluationMode
from semcont.schemas.explainer import (
    ExplainerKind,
    GradCamConfig,
    KernelShapConfig,
    LimeConfig,
    RiseConfig,
)
from semcont.schemas.shapes import SeriesKind, ShapeKind
from semcont.schemas.statistics import DistanceKind
from semcont.schemas.training import TrainConfig

MANIFEST_FORMAT_VERSION = 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ExperimentSection(_Strict):
    name: str = "experiment"
    seed: int = Field(0, ge=0, description="Master seed; explainer seeds derive from it")


class DataSection(_Strict):
    n_per_class: int = Field(500, ge=2)
    n_test: int = Field(100, ge=2, description="Held-out images, half per class")
    image_size: int = Field(64, ge=16)


class ModelSection(_Strict):
    path: Optional[str] = Field(None, description="Pre-trained model file; trained from [train] when unset")


class SeriesSection(_Strict):
    kinds: List[SeriesKind] = [SeriesKind.ROTATION, SeriesKind.CONTRAST, SeriesKind.TRANSITION]
    n_frames: int = Field(100, ge=3)
    rotation_deg: float = Field(120.0, gt=0.0)
    contrast_shapes: List[ShapeKind] = [ShapeKind.TRIANGLE, ShapeKind.CIRCLE]

    @field_validator("contrast_shapes")
    @classmethod
    def _no_morph(cls, value: List[ShapeKind]) -> List[ShapeKind]:
        if ShapeKind.MORPH in value:
            raise ValueError("contrast series are made of triangles or circles")
        return value


class ExplainersSection(_Strict):
    names: List[ExplainerKind] = list(ExplainerKind)
    rise: RiseConfig = RiseConfig()
    lime: LimeConfig = LimeConfig()
    kernelshap: KernelShapConfig = KernelShapConfig()
    gradcam: GradCamConfig = GradCamConfig()


class EvaluationSection(_Strict):
    distances: List[DistanceKind] = [DistanceKind.MSD, DistanceKind.WASSERSTEIN1]
    modes: List[EvaluationMode] = [EvaluationMode.VARIATION_INDEXED]
    # series kind -> largest theta kept (e.g. rotation = 30.0 for the first 30 degrees)
    windows: Dict[SeriesKind, float] = {}
    strip_stride: int = Field(10, ge=1)


class ExperimentConfig(_Strict):
    experiment: ExperimentSection = ExperimentSection()
    data: DataSection = DataSection()
    model: ModelSection = ModelSection()
    train: TrainConfig = TrainConfig()
    series: SeriesSection = SeriesSection()
    explainers: ExplainersSection = ExplainersSection()
    evaluation: EvaluationSection = EvaluationSection()


class CellRecord(BaseModel):
    """One finished (series x explainer) cell in the manifest."""
    series_id: str
    explainer_id: str
    evaluation: str
    saliency_dir: str


class RunManifest(BaseModel):
    """manifest.json of an artifact directory; written last, complete == True when done."""
    format_version: int = MANIFEST_FORMAT_VERSION
    tool_version: str
    config_hash: str
    config: Dict[str, object]
    seeds: Dict[str, int]
    model_hash: Optional[str] = None
    train_accuracy: Optional[float] = None
    test_accuracy: Optional[float] = None
    series: List[str] = []
    cells: List[CellRecord] = []
    tables: List[str] = []
    plots: List[str] = []
    strips: List[str] = []
    complete: bool = False
