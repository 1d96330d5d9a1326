"""Correlation results and distance kinds."""

import enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from semcont.config import settings


class DistanceKind(str, enum.Enum):
    """Distance between two normalized saliency maps."""
    MSD = "msd"
    WASSERSTEIN1 = "wasserstein1"


class CorrelationMethod(str, enum.Enum):
    PEARSON = "pearson"
    SPEARMAN = "spearman"
    KENDALL = "kendall"


class CorrelationResult(BaseModel):
    """
    One correlation coefficient with its two-sided p-value.

    `significant` is always p_value < settings.SIGNIFICANCE_LEVEL.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    method: CorrelationMethod
    coefficient: float = Field(..., ge=-1.0, le=1.0)
    p_value: float = Field(..., ge=0.0, le=1.0)
    n: int = Field(..., ge=3)
    significant: bool = False

    @model_validator(mode="before")
    @classmethod
    def _fill_significance(cls, data):
        if isinstance(data, dict) and "p_value" in data:
            data = dict(data)
            data["significant"] = float(data["p_value"]) < settings.SIGNIFICANCE_LEVEL
        return data
