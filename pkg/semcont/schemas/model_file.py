"""Pydantic schema for the JSON header of a model file."""

from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict


class ParamEntry(BaseModel):
    """One parameter tensor in blob order."""
    name: str
    shape: List[int]


class ModelHeader(BaseModel):
    """JSON header stored between the magic/version prefix and the parameter blob."""
    model_config = ConfigDict(extra="forbid")

    arch: Dict[str, object]
    params: List[ParamEntry]
    input_size: Tuple[int, int]
    class_names: Tuple[str, str]
    seed: int
