"""
Series evaluation: run one model and one explainer over a variation series.

Frames are explained independently (explainers are pure), possibly on several
threads; results are assembled in frame order.
"""

import logging
from typing import Sequence

import numpy as np

from semcont.errors import ConfigError, DataError, FrameError, SemcontError
from semcont.explain import explain
from semcont.explain.base import ConfidenceFn, evaluate_confidences
from semcont.explain.saliency import SaliencyMap
from semcont.metrics.distances import saliency_distance
from semcont.nn.network import ModelSnapshot, confidence_fn
from semcont.schemas.continuity import PredictiveCase, SeriesEvaluation
from semcont.schemas.explainer import ExplainerConfig, ExplainerKind
from semcont.schemas.statistics import DistanceKind
from semcont.shapes.image import image_msd
from semcont.shapes.series import VariationSeries
from semcont.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

DEFAULT_DISTANCES: tuple[DistanceKind, ...] = (DistanceKind.MSD, DistanceKind.WASSERSTEIN1)


def _check_compatible(model: ModelSnapshot | None, series: VariationSeries) -> None:
    if model is not None and tuple(series.image_size) != tuple(model.input_size):
        raise DataError(f"series frames are {series.image_size}, model expects {tuple(model.input_size)}")


def explain_series(
    model: ModelSnapshot | None,
    series: VariationSeries,
    explainer: ExplainerKind | str,
    cfg: ExplainerConfig = ExplainerConfig(),
    model_fn: ConfidenceFn | None = None,
    threads: int | None = None,
) -> list[SaliencyMap]:
    """
    One saliency map per frame.

    Raises:
        FrameError: the explainer failed on a frame (carries the frame index)
    """
    _check_compatible(model, series)
    kind = ExplainerKind(explainer)

    def _frame(index: int) -> SaliencyMap:
        try:
            return explain(kind, model, series.frames[index], cfg, model_fn=model_fn, threads=1)
        except ConfigError:
            raise
        except SemcontError as exc:
            raise FrameError(index, exc) from exc

    logger.info("explaining %s with %s (%d frames)", series.series_id, kind.value, len(series))
    return parallel_map(_frame, list(range(len(series))), threads=threads, desc=f"{kind.value} {series.series_id}")


def evaluate_series(
    model: ModelSnapshot | None,
    series: VariationSeries,
    explainer: ExplainerKind | str,
    cfg: ExplainerConfig = ExplainerConfig(),
    distance_kinds: Sequence[DistanceKind] = DEFAULT_DISTANCES,
    model_fn: ConfidenceFn | None = None,
    maps: Sequence[SaliencyMap] | None = None,
    threads: int | None = None,
) -> SeriesEvaluation:
    """
    Confidences and reference-anchored saliency distances for every frame.

    Args:
        model: Built-in model; may be None when model_fn is a black box
        series: The variation series; frame 0 is the reference
        explainer: Which explainer produced / produces the maps
        cfg: Explainer hyperparameters
        distance_kinds: Distances computed between normalized maps
        model_fn: Black-box confidence function overriding the model
        maps: Precomputed maps (one per frame); computed when None
        threads: Worker cap

    Raises:
        FrameError: explainer failure on a frame
        DataError: model and series sizes disagree, or wrong number of maps
    """
    kind = ExplainerKind(explainer)
    _check_compatible(model, series)
    if model_fn is None:
        if model is None:
            raise ConfigError("evaluation needs a model or a black-box classifier")
        model_fn = confidence_fn(model)
    if maps is None:
        maps = explain_series(model, series, kind, cfg, model_fn=model_fn, threads=threads)
    if len(maps) != len(series):
        raise DataError(f"{len(maps)} saliency maps for {len(series)} frames")

    confidences = evaluate_confidences(model_fn, series.frames, batch_size=128)
    distances = {
        DistanceKind(d): [saliency_distance(d, m, maps[0]) for m in maps]
        for d in distance_kinds
    }
    explainer_cfg = cfg.for_kind(kind)
    return SeriesEvaluation(
        series_id=series.series_id,
        explainer_id=kind.value,
        thetas=[float(t) for t in series.thetas],
        confidences=[float(c) for c in confidences],
        saliency_distances=distances,
        confidence_changes=[float(abs(c - confidences[0])) for c in confidences],
        empty_maps=[i for i, m in enumerate(maps) if m.empty],
        meta={
            "series_kind": series.kind.value,
            "image_msd": [image_msd(frame, series.reference) for frame in series.frames],
            "seed": getattr(explainer_cfg, "seed", None),
            "explainer_config": explainer_cfg.model_dump(mode="json"),
            "distance_normalization": "min-max per map before distance",
            "correlation_input": "raw distance lists",
        },
    )


def predictive_case(evaluation: SeriesEvaluation, expected_label: int, threshold: float = 0.5) -> PredictiveCase:
    """
    Confusion-matrix case of the series' final frame.

    Args:
        expected_label: 1 when the final frame truly belongs to the positive class
    """
    predicted = evaluation.confidences[-1] >= threshold
    if expected_label not in (0, 1):
        raise DataError(f"expected_label must be 0 or 1, got {expected_label}")
    if predicted:
        return PredictiveCase.TRUE_POSITIVE if expected_label == 1 else PredictiveCase.FALSE_POSITIVE
    return PredictiveCase.FALSE_NEGATIVE if expected_label == 1 else PredictiveCase.TRUE_NEGATIVE


def window_for_theta(evaluation: SeriesEvaluation, max_theta: float) -> tuple[int, int]:
    """Inclusive frame window (0, b) covering thetas up to max_theta."""
    thetas = np.asarray(evaluation.thetas)
    last = int(np.searchsorted(thetas, max_theta + 1e-9, side="right")) - 1
    return 0, max(last, 0)
