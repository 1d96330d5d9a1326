"""
Pydantic schemas for explainer hyperparameters and saliency map sidecars.

All defaults are frozen and echoed into every saved map and evaluation.
`baseline=None` means "use the image's background level" (median border pixel).
"""

import enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class ExplainerKind(str, enum.Enum):
    """Explainer enumeration."""
    RISE = "rise"
    LIME = "lime"
    KERNELSHAP = "kernelshap"
    GRADCAM = "gradcam"


class RiseConfig(BaseModel):
    """RISE: random coarse masks, confidence-weighted average."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_masks: int = Field(1000, ge=1)
    cell_grid: Tuple[int, int] = (7, 7)
    keep_prob: float = Field(0.5, gt=0.0, le=1.0)
    baseline: Optional[float] = Field(None, ge=0.0, le=1.0)
    batch_size: int = Field(100, ge=1)
    seed: int = Field(0, ge=0)


class LimeConfig(BaseModel):
    """LIME on a fixed grid of superpixels with a ridge surrogate."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    segments: Tuple[int, int] = (8, 8)
    n_samples: int = Field(500, ge=1)
    kernel_width: float = Field(0.25, gt=0.0)
    ridge_lambda: float = Field(1e-3, ge=0.0)
    baseline: Optional[float] = Field(None, ge=0.0, le=1.0)
    seed: int = Field(0, ge=0)


class KernelShapConfig(BaseModel):
    """
    KernelSHAP on grid superpixels.

    exhaustive=True enumerates every coalition (only sensible for few
    superpixels) and solves the exact, unregularized Shapley system.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    segments: Tuple[int, int] = (8, 8)
    n_samples: int = Field(500, ge=1)
    ridge_lambda: float = Field(1e-3, ge=0.0)
    baseline: Optional[float] = Field(None, ge=0.0, le=1.0)
    exhaustive: bool = False
    seed: int = Field(0, ge=0)


class GradCamConfig(BaseModel):
    """GradCAM on a named activation of the micro-CNN."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    layer: str = "conv2"
    upsample: str = Field("bilinear", pattern="^bilinear$")


STOCHASTIC = ("rise", "lime", "kernelshap")


class ExplainerConfig(BaseModel):
    """Hyperparameters of all four explainers."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    rise: RiseConfig = RiseConfig()
    lime: LimeConfig = LimeConfig()
    kernelshap: KernelShapConfig = KernelShapConfig()
    gradcam: GradCamConfig = GradCamConfig()

    def for_kind(self, kind: ExplainerKind) -> BaseModel:
        return getattr(self, ExplainerKind(kind).value)

    def with_seed(self, seed: int, keep_explicit: bool = False) -> "ExplainerConfig":
        """
        Copy with every stochastic explainer reseeded.

        With keep_explicit, sections whose seed was set explicitly keep it.
        """
        update = {}
        for name in STOCHASTIC:
            section = getattr(self, name)
            if keep_explicit and "seed" in section.model_fields_set:
                continue
            update[name] = section.model_copy(update={"seed": seed})
        return self.model_copy(update=update)


class SaliencySidecar(BaseModel):
    """JSON sidecar of a saved saliency map (pixels live in the .f32 blob)."""
    model_config = ConfigDict(extra="forbid")

    format_version: int = 1
    explainer_id: str
    target_class: str = "positive"
    width: int
    height: int
    seed: Optional[int] = None
    empty: bool = False
    config: Dict[str, object] = {}
