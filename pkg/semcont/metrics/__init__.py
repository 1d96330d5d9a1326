"""Saliency distances and correlation statistics."""

from semcont.metrics.correlation import CORRELATIONS, correlate, kendall, midranks, pearson, spearman
from semcont.metrics.distances import DISTANCES, msd, saliency_distance, wasserstein1
from semcont.schemas.statistics import CorrelationMethod, CorrelationResult, DistanceKind

__all__ = [
    "CORRELATIONS",
    "DISTANCES",
    "CorrelationMethod",
    "CorrelationResult",
    "DistanceKind",
    "correlate",
    "kendall",
    "midranks",
    "msd",
    "pearson",
    "saliency_distance",
    "spearman",
    "wasserstein1",
]
