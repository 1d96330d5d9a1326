"""
Relational plots: normalized saliency distance against theta or confidence change.

One polyline per (explainer x distance kind) plus an optional dashed
confidence overlay. All variables are min-max normalized to [0, 1]. Output is
byte-deterministic for identical inputs.
"""

import enum
import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from semcont.errors import DataError
from semcont.report.svg import SVG
from semcont.schemas.continuity import SeriesEvaluation
from semcont.schemas.statistics import DistanceKind
from semcont.utils.files import atomic_write_text

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
CONFIDENCE_COLOR = "#555555"
WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 60, 190, 40, 50


class PlotAxis(str, enum.Enum):
    THETA = "theta"
    CONFIDENCE_CHANGE = "confidence_change"


def normalize_unit(values: Sequence[float]) -> np.ndarray:
    """Min-max to [0, 1]; constant sequences become zeros."""
    v = np.asarray(values, dtype=np.float64)
    span = v.max() - v.min()
    return (v - v.min()) / span if span > 0 else np.zeros_like(v)


def _x_values(evaluation: SeriesEvaluation, axis: PlotAxis) -> list[float]:
    return evaluation.thetas if axis is PlotAxis.THETA else evaluation.confidence_changes


def relational_plot_svg(
    evaluations: Sequence[SeriesEvaluation],
    axis: PlotAxis | str = PlotAxis.THETA,
    distance_kinds: Sequence[DistanceKind] | None = None,
    confidence_overlay: bool = True,
) -> str:
    """
    SVG text of a relational plot.

    Raises:
        DataError: no evaluations, or evaluations of different series
    """
    if not evaluations:
        raise DataError("relational plot needs at least one evaluation")
    series_ids = {e.series_id for e in evaluations}
    if len(series_ids) != 1:
        raise DataError(f"cannot mix series in one plot: {sorted(series_ids)}")
    axis = PlotAxis(axis)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def to_px(x: float, y: float) -> tuple[float, float]:
        return MARGIN_LEFT + x * plot_w, MARGIN_TOP + (1.0 - y) * plot_h

    svg = SVG(WIDTH, HEIGHT)
    svg.rect(0, 0, WIDTH, HEIGHT, fill="#ffffff")
    svg.text(WIDTH / 2, 22, f"Saliency distance vs {axis.value}: {evaluations[0].series_id}", size=14, anchor="middle")
    svg.line(MARGIN_LEFT, MARGIN_TOP + plot_h, MARGIN_LEFT + plot_w, MARGIN_TOP + plot_h)
    svg.line(MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT, MARGIN_TOP + plot_h)
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        x, y = to_px(tick, tick)
        svg.line(x, MARGIN_TOP + plot_h, x, MARGIN_TOP + plot_h + 4)
        svg.text(x, MARGIN_TOP + plot_h + 16, f"{tick:.2f}", size=10, anchor="middle")
        svg.line(MARGIN_LEFT - 4, y, MARGIN_LEFT, y)
        svg.text(MARGIN_LEFT - 6, y + 3, f"{tick:.2f}", size=10, anchor="end")
    svg.text(MARGIN_LEFT + plot_w / 2, HEIGHT - 12, f"{axis.value} (normalized)", anchor="middle")
    svg.text(16, MARGIN_TOP + plot_h / 2, "distance (normalized)", anchor="middle",
             extra=f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.2f})"')

    legend: list[tuple[str, str, str | None]] = []
    color_index = 0
    for evaluation in evaluations:
        x = normalize_unit(_x_values(evaluation, axis))
        order = np.argsort(x, kind="stable")
        kinds = distance_kinds or list(evaluation.saliency_distances)
        for kind in kinds:
            kind = DistanceKind(kind)
            if kind not in evaluation.saliency_distances:
                continue
            y = normalize_unit(evaluation.saliency_distances[kind])
            color = PALETTE[color_index % len(PALETTE)]
            color_index += 1
            svg.polyline([to_px(x[i], y[i]) for i in order], stroke=color)
            legend.append((f"{evaluation.explainer_id} {kind.value}", color, None))

    if confidence_overlay:
        first = evaluations[0]
        x = normalize_unit(_x_values(first, axis))
        y = normalize_unit(first.confidences)
        order = np.argsort(x, kind="stable")
        svg.polyline([to_px(x[i], y[i]) for i in order], stroke=CONFIDENCE_COLOR, dash="4,3")
        legend.append(("confidence", CONFIDENCE_COLOR, "4,3"))

    legend_x = WIDTH - MARGIN_RIGHT + 16
    for i, (label, color, dash) in enumerate(legend):
        y = MARGIN_TOP + 10 + 18 * i
        svg.polyline([(legend_x, y), (legend_x + 22, y)], stroke=color, width=2.0, dash=dash)
        svg.text(legend_x + 28, y + 4, label, size=11)
    return svg.render()


def emit_relational_plot(
    evaluations: Sequence[SeriesEvaluation],
    path: str | Path,
    axis: PlotAxis | str = PlotAxis.THETA,
    distance_kinds: Sequence[DistanceKind] | None = None,
    confidence_overlay: bool = True,
) -> Path:
    path = Path(path)
    atomic_write_text(path, relational_plot_svg(evaluations, axis, distance_kinds, confidence_overlay))
    logger.info("wrote relational plot %s", path)
    return path
