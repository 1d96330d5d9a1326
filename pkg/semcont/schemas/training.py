"""Pydantic schemas for training the micro-CNN."""

import enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field


class OptimizerKind(str, enum.Enum):
    """Optimizer enumeration."""
    SGD = "sgd"
    ADAM = "adam"


class TrainConfig(BaseModel):
    """
    Training hyperparameters.

    Defaults follow a binary cross-entropy + Adam setup.
    `learning_rate` may be 0 (no update), which is useful for checks.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    epochs: int = Field(10, ge=1, description="Passes over the training set")
    batch_size: int = Field(32, ge=1)
    learning_rate: float = Field(1e-3, ge=0.0)
    seed: int = Field(0, ge=0, description="Seeds shuffling of mini-batches")
    optimizer: OptimizerKind = OptimizerKind.ADAM
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)


class EpochLog(BaseModel):
    """Loss and accuracy after one epoch."""
    epoch: int
    loss: float
    accuracy: float


class TrainLog(BaseModel):
    """Per-epoch history plus the final training accuracy."""
    epochs: List[EpochLog] = []
    final_accuracy: float = 0.0
    test_accuracy: float | None = None
