"""Wire messages of the external classifier protocol (one JSON object per line)."""

from pydantic import BaseModel, ConfigDict, Field


class ClassifyRequest(BaseModel):
    """Request sent to the child process: little-endian float32 pixels, base64."""
    id: int
    pixels_f32_b64: str
    w: int = Field(..., ge=1)
    h: int = Field(..., ge=1)


class ClassifyResponse(BaseModel):
    """Reply read back from the child process."""
    model_config = ConfigDict(extra="ignore")

    id: int
    confidence: float
