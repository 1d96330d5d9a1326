"""Report schemas: provenance, the continuity report and its correlation tables."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from semcont.schemas.continuity import ContinuityVerdict, EvaluationMode
from semcont.schemas.statistics import CorrelationMethod, DistanceKind

REPORT_FORMAT_VERSION = 1


class Provenance(BaseModel):
    """
    Where every number came from.

    timestamp is None for deterministic runs so that reruns are byte-identical.
    """
    model_hash: Optional[str] = None
    seeds: Dict[str, int] = {}
    config: Dict[str, object] = {}
    tool_version: str
    timestamp: Optional[str] = None
    distance_normalization: str = "min-max per map before distance"
    correlation_input: str = "raw distance lists"


class ContinuityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = REPORT_FORMAT_VERSION
    runs: List[ContinuityVerdict]
    provenance: Provenance

    def series_ids(self) -> List[str]:
        """Series in first-appearance order."""
        seen: List[str] = []
        for run in self.runs:
            if run.series_id not in seen:
                seen.append(run.series_id)
        return seen

    def for_series(self, series_id: str) -> "ContinuityReport":
        return self.model_copy(update={"runs": [r for r in self.runs if r.series_id == series_id]})


class TableRow(BaseModel):
    """One correlation method x distance row; cells are None where shown as "-"."""
    method: CorrelationMethod
    distance: DistanceKind
    cells: Dict[str, Optional[float]]
    highest: List[str] = []


class CorrelationTable(BaseModel):
    series_id: str
    mode: EvaluationMode
    explainers: List[str]
    rows: List[TableRow]


class TableDocument(BaseModel):
    """JSON table artifact: the table plus the report it was built from."""
    table: CorrelationTable
    report: ContinuityReport
