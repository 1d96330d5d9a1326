"""SQLAlchemy models for the run ledger."""

from semcont.models.run import EvaluationRecord, ExperimentRun, RunStatus

__all__ = [
    "EvaluationRecord",
    "ExperimentRun",
    "RunStatus",
]
