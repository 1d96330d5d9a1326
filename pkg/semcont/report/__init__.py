"""Correlation tables, relational plots and saliency strips."""

from semcont.report.montage import emit_saliency_strip, montage_array, select_panels
from semcont.report.plots import PlotAxis, emit_relational_plot, relational_plot_svg
from semcont.report.tables import (
    build_table,
    emit_table,
    load_report_json,
    rank_explainers,
    table_to_csv,
)
from semcont.schemas.report import ContinuityReport, Provenance

__all__ = [
    "ContinuityReport",
    "PlotAxis",
    "Provenance",
    "build_table",
    "emit_relational_plot",
    "emit_saliency_strip",
    "emit_table",
    "load_report_json",
    "montage_array",
    "rank_explainers",
    "relational_plot_svg",
    "select_panels",
    "table_to_csv",
]
