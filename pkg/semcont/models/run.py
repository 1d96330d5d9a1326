"""Ledger models: one ExperimentRun per `run`, one EvaluationRecord per (series x explainer)."""

import enum
from datetime import datetime

from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy import Enum as SQLEnum
from sqlalchemy.orm import relationship

from semcont.database import Base


class RunStatus(str, enum.Enum):
    """Run status enumeration."""
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"
    SKIPPED = "skipped"


class ExperimentRun(Base):
    """
    One invocation of `semcont run`.

    Attributes:
        id: Primary key
        artifact_dir: Output directory of the run
        config_hash: sha256 of the canonical experiment config
        model_hash: sha256 of the model file (set once the model exists)
        seeds: JSON text of the seeds used
        status: Current run status
        error: Error message of a failed run
    """
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    artifact_dir = Column(String, nullable=False)
    config_hash = Column(String(64), index=True, nullable=False)
    model_hash = Column(String(64), nullable=True)
    seeds = Column(Text, nullable=False, default="{}")
    tool_version = Column(String, nullable=False)
    status = Column(SQLEnum(RunStatus), default=RunStatus.RUNNING, nullable=False)
    error = Column(Text, nullable=True)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False)
    finished_at = Column(DateTime, nullable=True)

    # Relationships
    evaluations = relationship("EvaluationRecord", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<ExperimentRun(id={self.id}, config={self.config_hash[:8]}, status={self.status})>"


class EvaluationRecord(Base):
    """
    One evaluated (series x explainer) cell of a run.

    Attributes:
        kendall_msd: Kendall tau of MSD distances against theta (None if undefined)
        evaluation_path: Path of the saved SeriesEvaluation JSON
    """
    __tablename__ = "evaluation_records"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id"), nullable=False)
    series_id = Column(String, nullable=False)
    explainer_id = Column(String, nullable=False)
    n_frames = Column(Integer, nullable=False)
    kendall_msd = Column(Float, nullable=True)
    verdict = Column(Text, nullable=False, default="")
    evaluation_path = Column(String, nullable=False)

    # Relationships
    run = relationship("ExperimentRun", back_populates="evaluations")

    def __repr__(self):
        return f"<EvaluationRecord(run={self.run_id}, series={self.series_id}, explainer={self.explainer_id})>"
