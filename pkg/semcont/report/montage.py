"""
Saliency strips: every stride-th map side by side, darker = higher attribution.

Written as a binary PGM (one grayscale raster) or as an SVG with one embedded
PNG panel per map, depending on the file suffix.
"""

import base64
import io
import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image as PILImage

from semcont.errors import ConfigError, DataError
from semcont.explain.saliency import SaliencyMap, normalize_map
from semcont.report.svg import SVG
from semcont.utils.files import atomic_write_bytes, atomic_write_text

logger = logging.getLogger(__name__)

GAP_PX = 2
LABEL_PX = 16


def select_panels(maps: Sequence[SaliencyMap], stride: int) -> list[SaliencyMap]:
    """
    Every stride-th map, starting at the reference; ceil(n / stride) panels.

    Raises:
        ConfigError: stride < 1
        DataError: no maps
    """
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}", key_path="stride")
    if not maps:
        raise DataError("saliency strip needs at least one map")
    return list(maps[::stride])


def panel_pixels(saliency: SaliencyMap) -> np.ndarray:
    """uint8 grayscale panel of a normalized map, 0 (black) at the highest value."""
    values = normalize_map(saliency).values.astype(np.float64)
    return np.rint(255.0 * (1.0 - values)).astype(np.uint8)


def montage_array(maps: Sequence[SaliencyMap], stride: int) -> np.ndarray:
    """Panels joined horizontally with white gaps."""
    panels = [panel_pixels(m) for m in select_panels(maps, stride)]
    height = max(p.shape[0] for p in panels)
    width = sum(p.shape[1] for p in panels) + GAP_PX * (len(panels) - 1)
    canvas = np.full((height, width), 255, dtype=np.uint8)
    x = 0
    for panel in panels:
        canvas[: panel.shape[0], x:x + panel.shape[1]] = panel
        x += panel.shape[1] + GAP_PX
    return canvas


def _png_data_uri(pixels: np.ndarray) -> str:
    buffer = io.BytesIO()
    PILImage.fromarray(pixels).save(buffer, format="PNG")
    return "data:image/png;base64," + base64.b64encode(buffer.getvalue()).decode("ascii")


def strip_svg(maps: Sequence[SaliencyMap], stride: int, thetas: Sequence[float] | None = None, scale: int = 2) -> str:
    panels = select_panels(maps, stride)
    labels = list(thetas[::stride]) if thetas is not None else None
    panel_w = max(p.width for p in panels) * scale
    panel_h = max(p.height for p in panels) * scale
    svg = SVG(len(panels) * (panel_w + GAP_PX) - GAP_PX, panel_h + LABEL_PX)
    svg.rect(0, 0, svg.width, svg.height, fill="#ffffff")
    for i, saliency in enumerate(panels):
        x = i * (panel_w + GAP_PX)
        svg.image(x, 0, panel_w, panel_h, _png_data_uri(panel_pixels(saliency)))
        if labels is not None:
            svg.text(x + panel_w / 2, panel_h + 12, f"{labels[i]:.2f}", size=10, anchor="middle")
    return svg.render()


def emit_saliency_strip(
    maps: Sequence[SaliencyMap],
    stride: int,
    path: str | Path,
    thetas: Sequence[float] | None = None,
) -> Path:
    """
    Write a strip to `path` (.pgm or .svg).

    Raises:
        ConfigError: stride < 1 or unsupported suffix
        DataError: no maps
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        buffer = io.BytesIO()
        PILImage.fromarray(montage_array(maps, stride)).save(buffer, format="PPM")
        atomic_write_bytes(path, buffer.getvalue())
    elif suffix == ".svg":
        atomic_write_text(path, strip_svg(maps, stride, thetas))
    else:
        raise ConfigError(f"saliency strips are written as .pgm or .svg, not {suffix!r}")
    logger.info("wrote saliency strip %s (%d panels)", path, math.ceil(len(maps) / stride))
    return path
