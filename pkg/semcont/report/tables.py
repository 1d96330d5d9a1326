"""
Correlation tables.

Rows are (correlation method x distance), columns are explainers. A cell holds
the coefficient when significant (p < 0.05) and "-" otherwise, including when
the correlation is undefined. The JSON form flags the highest coefficient of
every row.
"""

import csv
import io
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from semcont.errors import CorruptFileError, DataError
from semcont.schemas.report import ContinuityReport, CorrelationTable, TableDocument, TableRow
from semcont.schemas.statistics import CorrelationMethod, DistanceKind
from semcont.utils.files import atomic_write_text

logger = logging.getLogger(__name__)

ROW_ORDER: tuple[tuple[CorrelationMethod, DistanceKind], ...] = tuple(
    (method, distance)
    for method in (CorrelationMethod.KENDALL, CorrelationMethod.PEARSON, CorrelationMethod.SPEARMAN)
    for distance in (DistanceKind.WASSERSTEIN1, DistanceKind.MSD)
)

METHOD_LABELS = {
    CorrelationMethod.KENDALL: "Kendall",
    CorrelationMethod.PEARSON: "Pearson",
    CorrelationMethod.SPEARMAN: "Spearman",
}
DISTANCE_LABELS = {DistanceKind.WASSERSTEIN1: "Wasserstein", DistanceKind.MSD: "MSD"}
DASH = "-"


def build_table(report: ContinuityReport, series_id: str) -> CorrelationTable:
    """
    Table for one series.

    Raises:
        DataError: no run for the series
    """
    runs = [run for run in report.runs if run.series_id == series_id]
    if not runs:
        raise DataError(f"report has no runs for series {series_id!r}")
    explainers = [run.explainer_id for run in runs]
    rows = []
    for method, distance in ROW_ORDER:
        if all(run.cell(method, distance) is None for run in runs):
            continue
        cells: dict[str, float | None] = {}
        for run in runs:
            cell = run.cell(method, distance)
            result = cell.result if cell is not None else None
            cells[run.explainer_id] = result.coefficient if result is not None and result.significant else None
        values = [v for v in cells.values() if v is not None]
        best = max(values) if values else None
        rows.append(
            TableRow(
                method=method,
                distance=distance,
                cells=cells,
                highest=[e for e, v in cells.items() if best is not None and v is not None and round(v, 3) == round(best, 3)],
            )
        )
    return CorrelationTable(series_id=series_id, mode=runs[0].mode, explainers=explainers, rows=rows)


def format_cell(value: float | None) -> str:
    return DASH if value is None else f"{value:.3f}"


def table_to_csv(table: CorrelationTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["Correlation", "Metric", *table.explainers])
    for row in table.rows:
        writer.writerow(
            [METHOD_LABELS[row.method], DISTANCE_LABELS[row.distance], *(format_cell(row.cells[e]) for e in table.explainers)]
        )
    return buffer.getvalue()


def emit_table(report: ContinuityReport, directory: str | Path) -> list[Path]:
    """
    Write <series_id>.csv and <series_id>.json for every series in the report.

    Raises:
        DataError: the report has no runs
    """
    if not report.runs:
        raise DataError("cannot emit tables for an empty report")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for series_id in report.series_ids():
        table = build_table(report, series_id)
        document = TableDocument(table=table, report=report.for_series(series_id))
        csv_path = directory / f"{series_id}.csv"
        json_path = directory / f"{series_id}.json"
        atomic_write_text(csv_path, table_to_csv(table))
        atomic_write_text(json_path, json.dumps(document.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")
        written += [csv_path, json_path]
        logger.info("wrote table %s", csv_path)
    return written


def load_table_document(path: str | Path) -> TableDocument:
    """
    Raises:
        DataError: missing or invalid file
        CorruptFileError: not JSON
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no table file at {path}")
    try:
        return TableDocument.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    except ValidationError as exc:
        raise DataError(f"{path}: invalid table document: {exc}") from exc


def load_report_json(path: str | Path) -> ContinuityReport:
    return load_table_document(path).report


def rank_explainers(report: ContinuityReport) -> list[tuple[str, float]]:
    """
    Explainers ordered by mean coefficient over all cells.

    Non-significant or undefined cells count as 0; ties keep report order.
    """
    totals: dict[str, list[float]] = {}
    for run in report.runs:
        scores = totals.setdefault(run.explainer_id, [])
        for cell in run.cells:
            scores.append(cell.result.coefficient if cell.result is not None and cell.result.significant else 0.0)
    ranking = [(explainer, sum(s) / len(s) if s else 0.0) for explainer, s in totals.items()]
    return sorted(ranking, key=lambda item: -item[1])
