"""
Evaluation artifacts and continuity verdicts.

A SeriesEvaluation is immutable once built; it is also the on-disk JSON format
of `semcont eval` (format_version 1).
"""

import enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from semcont.schemas.statistics import CorrelationMethod, CorrelationResult, DistanceKind

EVALUATION_FORMAT_VERSION = 1


class EvaluationMode(str, enum.Enum):
    """x-axis of the explainer continuity check."""
    VARIATION_INDEXED = "variation_indexed"      # distances vs theta
    CONFIDENCE_INDEXED = "confidence_indexed"    # distances vs |conf_i - conf_0|

    @classmethod
    def parse(cls, value: str) -> "EvaluationMode":
        """Accept the short CLI names "variation" and "confidence" too."""
        value = str(value)
        for mode in cls:
            if value in (mode.value, mode.value.split("_")[0]):
                return mode
        raise ValueError(f"unknown evaluation mode {value!r}")


class PredictorStatus(str, enum.Enum):
    CONTINUOUS = "continuous"
    NOT_CONTINUOUS = "not_continuous"
    INDETERMINATE = "indeterminate"


class PredictiveCase(str, enum.Enum):
    TRUE_POSITIVE = "TP"
    FALSE_POSITIVE = "FP"
    FALSE_NEGATIVE = "FN"
    TRUE_NEGATIVE = "TN"


class SeriesEvaluation(BaseModel):
    """
    Per-frame confidences and saliency distances to frame 0.

    Attributes:
        thetas: Variation indicator of every frame
        confidences: Positive-class confidence of every frame
        saliency_distances: Per distance kind, distance of frame i's map to frame 0's
        confidence_changes: |conf_i - conf_0|
        window: Inclusive frame range (0, b) when restricted, else None
        empty_maps: Indices of frames whose explanation was empty
        meta: image_msd per frame, seeds, explainer config echo
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    format_version: int = EVALUATION_FORMAT_VERSION
    series_id: str
    explainer_id: str
    thetas: List[float]
    confidences: List[float]
    saliency_distances: Dict[DistanceKind, List[float]]
    confidence_changes: List[float]
    window: Optional[Tuple[int, int]] = None
    empty_maps: List[int] = []
    meta: Dict[str, object] = {}

    @model_validator(mode="after")
    def _check_lengths(self):
        n = len(self.thetas)
        if n == 0:
            raise ValueError("evaluation has no frames")
        lists = {"confidences": self.confidences, "confidence_changes": self.confidence_changes}
        lists.update({f"saliency_distances.{k.value}": v for k, v in self.saliency_distances.items()})
        for name, values in lists.items():
            if len(values) != n:
                raise ValueError(f"{name} has {len(values)} entries for {n} frames")
        if self.confidence_changes[0] != 0.0 or any(v[0] != 0.0 for v in self.saliency_distances.values()):
            raise ValueError("frame 0 is the reference: its distance and confidence change must be 0")
        return self

    def __len__(self) -> int:
        return len(self.thetas)


class PredictorCheck(BaseModel):
    """Kendall tau of confidence against theta, with the resulting status."""
    model_config = ConfigDict(frozen=True)

    correlation: Optional[CorrelationResult] = None
    status: PredictorStatus
    expected_direction: int = Field(1, ge=-1, le=1)


class ContinuityCell(BaseModel):
    """One (correlation method, distance) entry; result None means undefined."""
    model_config = ConfigDict(frozen=True)

    method: CorrelationMethod
    distance: DistanceKind
    result: Optional[CorrelationResult] = None

    @property
    def significant_positive(self) -> bool:
        return self.result is not None and self.result.significant and self.result.coefficient > 0


class ContinuityVerdict(BaseModel):
    """Outcome of checking one explainer on one series."""
    model_config = ConfigDict(frozen=True)

    series_id: str
    explainer_id: str
    mode: EvaluationMode
    cells: List[ContinuityCell]
    predictor: PredictorCheck
    pairwise_concordance: Dict[DistanceKind, Optional[float]] = {}
    notes: List[str] = []
    verdict: str = ""

    def cell(self, method: CorrelationMethod | str, distance: DistanceKind | str) -> ContinuityCell | None:
        method, distance = CorrelationMethod(method), DistanceKind(distance)
        for cell in self.cells:
            if cell.method is method and cell.distance is distance:
                return cell
        return None
