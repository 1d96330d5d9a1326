"""
Shared perturbation machinery for the black-box explainers.

A black-box model is any function mapping a stack of images (N, H, W) to
positive-class confidences (N,). Perturbed images blend the original with a
baseline level wherever a mask is off.
"""

from typing import Callable

import numpy as np
from scipy.ndimage import map_coordinates

from semcont.errors import NumericError, SingularSystemError
from semcont.shapes.image import estimate_background
from semcont.utils.parallel import parallel_map

ConfidenceFn = Callable[[np.ndarray], np.ndarray]

MAX_CONDITION = 1e12


def batched(fn: Callable[[np.ndarray], float]) -> ConfidenceFn:
    """Lift a single-image function into a batch ConfidenceFn."""
    def _apply(images: np.ndarray) -> np.ndarray:
        return np.array([float(fn(image)) for image in images], dtype=np.float64)

    return _apply


def resolve_baseline(image: np.ndarray, baseline: float | None) -> float:
    """Configured baseline, or the image's background level when None."""
    return estimate_background(image) if baseline is None else float(baseline)


def evaluate_confidences(
    model_fn: ConfidenceFn,
    images: np.ndarray,
    batch_size: int = 100,
    threads: int | None = 1,
) -> np.ndarray:
    """
    Confidences for a stack of images, evaluated in fixed-size chunks.

    Chunk boundaries never depend on the thread count, so results are identical
    for any degree of parallelism.

    Raises:
        NumericError: the model returned a non-finite or mis-shaped result
    """
    starts = list(range(0, images.shape[0], batch_size))

    def _chunk(start: int) -> np.ndarray:
        chunk = images[start:start + batch_size]
        out = np.asarray(model_fn(chunk), dtype=np.float64).reshape(-1)
        if out.shape[0] != chunk.shape[0]:
            raise NumericError(f"model returned {out.shape[0]} confidences for {chunk.shape[0]} images")
        return out

    values = np.concatenate(parallel_map(_chunk, starts, threads=threads)) if starts else np.zeros(0)
    if not np.all(np.isfinite(values)):
        raise NumericError("model returned a non-finite confidence")
    return values


def blend(image: np.ndarray, masks: np.ndarray, baseline: float) -> np.ndarray:
    """image where masks == 1, baseline where masks == 0, linear in between."""
    image = np.asarray(image, dtype=np.float32)
    masks = np.asarray(masks, dtype=np.float32)
    out = image[None] * masks + np.float32(baseline) * (np.float32(1.0) - masks)
    return np.clip(out, 0.0, 1.0)


def bilinear_resize(values: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """
    Resize a 2-D array with bilinear interpolation on pixel centres.

    Edge pixels are clamped (no corner alignment), matching the usual
    feature-map upsampling of CAM methods.
    """
    values = np.asarray(values, dtype=np.float64)
    in_h, in_w = values.shape
    out_h, out_w = shape
    rows = (np.arange(out_h) + 0.5) * in_h / out_h - 0.5
    cols = (np.arange(out_w) + 0.5) * in_w / out_w - 0.5
    grid_r, grid_c = np.meshgrid(np.clip(rows, 0, in_h - 1), np.clip(cols, 0, in_w - 1), indexing="ij")
    return map_coordinates(values, [grid_r, grid_c], order=1, mode="nearest")


# ====================
# SUPERPIXELS
# ====================
def grid_segments(height: int, width: int, rows: int, cols: int) -> np.ndarray:
    """
    Label image of a rows x cols grid of superpixels, numbered row-major.

    Example:
        >>> grid_segments(4, 4, 2, 2)[0]
        array([0, 0, 1, 1])
    """
    y = np.arange(height) * rows // height
    x = np.arange(width) * cols // width
    return (y[:, None] * cols + x[None, :]).astype(np.int64)


class SegmentGame:
    """
    Cooperative game over superpixels.

    A coalition z (length M, 0/1) keeps the superpixels with z_j = 1 and
    replaces the rest by the baseline level; its value is the model confidence.
    """

    def __init__(self, model_fn: ConfidenceFn, image: np.ndarray, segments: np.ndarray, baseline: float):
        self.model_fn = model_fn
        self.image = np.asarray(image, dtype=np.float32)
        self.segments = segments
        self.n_players = int(segments.max()) + 1
        self.baseline = baseline

    def images(self, coalitions: np.ndarray) -> np.ndarray:
        keep = np.asarray(coalitions, dtype=bool)[:, self.segments]  # (n, H, W)
        return blend(self.image, keep.astype(np.float32), self.baseline)

    def values(self, coalitions: np.ndarray, batch_size: int = 100, threads: int | None = 1) -> np.ndarray:
        coalitions = np.asarray(coalitions)
        out = np.empty(coalitions.shape[0], dtype=np.float64)
        for start in range(0, coalitions.shape[0], batch_size * 10):
            block = coalitions[start:start + batch_size * 10]
            out[start:start + block.shape[0]] = evaluate_confidences(
                self.model_fn, self.images(block), batch_size, threads
            )
        return out

    def to_pixels(self, player_values: np.ndarray) -> np.ndarray:
        """Paint each superpixel with its value."""
        return np.asarray(player_values, dtype=np.float64)[self.segments]


def solve_system(matrix: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    """
    Solve a small symmetric linear system.

    Raises:
        SingularSystemError: the matrix is singular or numerically so
    """
    if matrix.size == 0:
        return np.zeros(0)
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystemError(f"{what}: singular regression system (condition number {cond:.3g})")
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"{what}: {exc}") from exc
