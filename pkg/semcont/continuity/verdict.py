"""
Continuity checks over a SeriesEvaluation.

The predictor is continuous on a series when its confidence rises with theta
(Kendall tau significant, in the expected direction). An explainer is
continuous when its saliency distances to the reference rise monotonically
with theta (variation-indexed) or with the confidence change
(confidence-indexed).
"""

import itertools
import logging
from typing import Sequence

import numpy as np

from semcont.errors import DataError
from semcont.metrics.correlation import CORRELATIONS, correlate
from semcont.schemas.continuity import (
    ContinuityCell,
    ContinuityVerdict,
    EvaluationMode,
    PredictorCheck,
    PredictorStatus,
    SeriesEvaluation,
)
from semcont.schemas.statistics import CorrelationMethod, DistanceKind

logger = logging.getLogger(__name__)

MIN_WINDOW = 3


def check_predictor_continuity(evaluation: SeriesEvaluation, expected_direction: int = 1) -> PredictorCheck:
    """
    Kendall tau between thetas and confidences.

    Constant confidence is reported as indeterminate, not as a failure.
    """
    if expected_direction not in (-1, 1):
        raise DataError("expected_direction must be +1 or -1")
    result = correlate(CorrelationMethod.KENDALL, evaluation.thetas, evaluation.confidences)
    if result is None:
        status = PredictorStatus.INDETERMINATE
    elif result.significant and np.sign(result.coefficient) == expected_direction:
        status = PredictorStatus.CONTINUOUS
    else:
        status = PredictorStatus.NOT_CONTINUOUS
    return PredictorCheck(correlation=result, status=status, expected_direction=expected_direction)


def pairwise_concordance(x: Sequence[float], distances: Sequence[float]) -> float:
    """
    Fraction of pairs with x_j > x_i whose distances satisfy d_j > d_i.

    Raises:
        DataError: no pair has distinct x values
    """
    x = np.asarray(x, dtype=np.float64)
    d = np.asarray(distances, dtype=np.float64)
    if x.shape != d.shape:
        raise DataError(f"length mismatch: {x.size} vs {d.size}")
    ordered = satisfied = 0
    for i, j in itertools.combinations(range(x.size), 2):
        if x[i] == x[j]:
            continue
        lo, hi = (i, j) if x[i] < x[j] else (j, i)
        ordered += 1
        satisfied += int(d[hi] > d[lo])
    if ordered == 0:
        raise DataError("no pair of frames has distinct x values")
    return satisfied / ordered


def _x_axis(evaluation: SeriesEvaluation, mode: EvaluationMode) -> list[float]:
    if mode is EvaluationMode.VARIATION_INDEXED:
        return evaluation.thetas
    return evaluation.confidence_changes


def _summarize(explainer_id: str, cells: list[ContinuityCell]) -> str:
    positive = sum(cell.significant_positive for cell in cells)
    if cells and positive == len(cells):
        label = "continuous"
    elif positive:
        label = "partially continuous"
    else:
        label = "not continuous"
    return f"{explainer_id}: {label} ({positive}/{len(cells)} significant positive correlations)"


def check_explainer_continuity(
    evaluation: SeriesEvaluation,
    mode: EvaluationMode | str = EvaluationMode.VARIATION_INDEXED,
    expected_direction: int = 1,
) -> ContinuityVerdict:
    """
    Correlate saliency distances with the mode's x-axis for every method x distance.

    Undefined correlations (constant distances) become None cells, shown as "-".
    """
    mode = EvaluationMode(mode)
    if len(evaluation) < MIN_WINDOW:
        raise DataError(f"continuity needs at least {MIN_WINDOW} frames, got {len(evaluation)}")
    x = _x_axis(evaluation, mode)
    notes: list[str] = []
    if evaluation.empty_maps:
        notes.append(f"{len(evaluation.empty_maps)} empty explanation(s) at frames {evaluation.empty_maps[:10]}")
    if evaluation.window is not None:
        notes.append(f"window {evaluation.window[0]}:{evaluation.window[1]} applied")
    if len(set(evaluation.confidences)) == 1:
        notes.append("constant confidence")

    cells = []
    concordance: dict[DistanceKind, float | None] = {}
    for distance, values in evaluation.saliency_distances.items():
        if len(set(values)) == 1:
            notes.append(f"constant {distance.value} distances")
        for method in CORRELATIONS:
            cells.append(ContinuityCell(method=method, distance=distance, result=correlate(method, x, values)))
        try:
            concordance[distance] = pairwise_concordance(x, values)
        except DataError:
            concordance[distance] = None

    verdict = ContinuityVerdict(
        series_id=evaluation.series_id,
        explainer_id=evaluation.explainer_id,
        mode=mode,
        cells=cells,
        predictor=check_predictor_continuity(evaluation, expected_direction),
        pairwise_concordance=concordance,
        notes=notes,
        verdict=_summarize(evaluation.explainer_id, cells),
    )
    logger.info("%s on %s (%s): %s", evaluation.explainer_id, evaluation.series_id, mode.value, verdict.verdict)
    return verdict


def apply_window(evaluation: SeriesEvaluation, window: tuple[int, int]) -> SeriesEvaluation:
    """
    Restrict an evaluation to the inclusive frame range [a, b].

    Frame 0 is the reference, so a must be 0. The full range returns the
    evaluation unchanged.

    Raises:
        DataError: window excludes the reference, is out of bounds or has fewer than 3 frames
    """
    start, stop = int(window[0]), int(window[1])
    n = len(evaluation)
    if start != 0:
        raise DataError(f"window {start}:{stop} excludes the reference frame 0")
    if stop >= n:
        raise DataError(f"window {start}:{stop} is out of bounds for {n} frames")
    if stop - start + 1 < MIN_WINDOW:
        raise DataError(f"window {start}:{stop} has fewer than {MIN_WINDOW} frames")
    if stop == n - 1:
        return evaluation

    keep = slice(start, stop + 1)
    meta = dict(evaluation.meta)
    if isinstance(meta.get("image_msd"), list):
        meta["image_msd"] = meta["image_msd"][keep]
    return evaluation.model_copy(
        update={
            "thetas": evaluation.thetas[keep],
            "confidences": evaluation.confidences[keep],
            "saliency_distances": {k: v[keep] for k, v in evaluation.saliency_distances.items()},
            "confidence_changes": evaluation.confidence_changes[keep],
            "window": (start, stop),
            "empty_maps": [i for i in evaluation.empty_maps if i <= stop],
            "meta": meta,
        }
    )
