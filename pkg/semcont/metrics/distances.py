"""
Distances between saliency maps.

Both metrics expect maps already min-max normalized (see normalize_map);
`saliency_distance` does that for you.
"""

import numpy as np
from scipy.stats import wasserstein_distance

from semcont.errors import DimensionMismatchError
from semcont.explain.saliency import SaliencyMap, normalize_map
from semcont.schemas.statistics import DistanceKind

MapLike = SaliencyMap | np.ndarray


def _values(saliency: MapLike) -> np.ndarray:
    values = saliency.values if isinstance(saliency, SaliencyMap) else saliency
    return np.asarray(values, dtype=np.float64)


def _pair(a: MapLike, b: MapLike) -> tuple[np.ndarray, np.ndarray]:
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise DimensionMismatchError(f"saliency maps differ in shape: {va.shape} vs {vb.shape}")
    return va, vb


def msd(a: MapLike, b: MapLike) -> float:
    """
    Mean squared deviation over pixels.

    Example:
        >>> msd(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        1.0
    """
    va, vb = _pair(a, b)
    return float(np.mean((va - vb) ** 2))


def wasserstein1(a: MapLike, b: MapLike) -> float:
    """First Wasserstein distance between the flattened pixel-value distributions."""
    va, vb = _pair(a, b)
    return float(wasserstein_distance(va.ravel(), vb.ravel()))


DISTANCES = {
    DistanceKind.MSD: msd,
    DistanceKind.WASSERSTEIN1: wasserstein1,
}


def saliency_distance(kind: DistanceKind | str, a: SaliencyMap, b: SaliencyMap) -> float:
    """Distance of two maps after normalizing both to [0, 1]."""
    return DISTANCES[DistanceKind(kind)](normalize_map(a), normalize_map(b))
