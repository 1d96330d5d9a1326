"""Helpers for single grayscale images (H x W float32 arrays in [0, 1])."""

import numpy as np

from semcont.errors import DataError, DimensionMismatchError


def validate_image(image: np.ndarray, size: tuple[int, int] | None = None) -> np.ndarray:
    """
    Return `image` as float32 after checking range and, optionally, size.

    Raises:
        DimensionMismatchError: not 2-D or not of the requested size
        DataError: values outside [0, 1] or non-finite
    """
    image = np.asarray(image)
    if image.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D image, got shape {image.shape}")
    if size is not None and tuple(image.shape) != tuple(size):
        raise DimensionMismatchError(f"image shape {image.shape} does not match {tuple(size)}")
    if not np.all(np.isfinite(image)):
        raise DataError("image contains non-finite pixels")
    if image.min() < 0.0 or image.max() > 1.0:
        raise DataError("pixel values must lie in [0, 1]")
    return image.astype(np.float32, copy=False)


def image_msd(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared pixel deviation between two images of equal shape."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"image shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def estimate_background(image: np.ndarray) -> float:
    """Median of the one-pixel border; the background level for centred shapes."""
    image = np.asarray(image, dtype=np.float64)
    border = np.concatenate([image[0, :], image[-1, :], image[1:-1, 0], image[1:-1, -1]])
    return float(np.median(border))
