"""
Run ledger: records runs and their evaluated cells via SQLAlchemy.

Ledger failures never abort an experiment; they are logged and ignored.
"""

import json
import logging
from datetime import datetime

from sqlalchemy.exc import SQLAlchemyError

from semcont.database import get_db
from semcont.models import EvaluationRecord, ExperimentRun, RunStatus

logger = logging.getLogger(__name__)


class Ledger:
    """Thin session wrapper; a Ledger with url None records nothing."""

    def __init__(self, url: str | None):
        self.url = url
        self.run_id: int | None = None

    def _session(self):
        return get_db(self.url)

    def start_run(self, artifact_dir: str, config_hash: str, seeds: dict, tool_version: str) -> None:
        if self.url is None:
            return
        try:
            for db in self._session():
                run = ExperimentRun(
                    artifact_dir=artifact_dir,
                    config_hash=config_hash,
                    seeds=json.dumps(seeds, sort_keys=True),
                    tool_version=tool_version,
                    status=RunStatus.RUNNING,
                )
                db.add(run)
                db.commit()
                db.refresh(run)
                self.run_id = run.id
        except SQLAlchemyError as exc:
            logger.warning("ledger unavailable (%s); continuing without it", exc)
            self.url = None

    def record_evaluation(
        self,
        series_id: str,
        explainer_id: str,
        n_frames: int,
        kendall_msd: float | None,
        verdict: str,
        evaluation_path: str,
    ) -> None:
        if self.url is None or self.run_id is None:
            return
        try:
            for db in self._session():
                db.add(
                    EvaluationRecord(
                        run_id=self.run_id,
                        series_id=series_id,
                        explainer_id=explainer_id,
                        n_frames=n_frames,
                        kendall_msd=kendall_msd,
                        verdict=verdict,
                        evaluation_path=evaluation_path,
                    )
                )
                db.commit()
        except SQLAlchemyError as exc:
            logger.warning("could not record %s/%s in ledger: %s", series_id, explainer_id, exc)

    def finish_run(self, status: RunStatus, model_hash: str | None = None, error: str | None = None) -> None:
        if self.url is None or self.run_id is None:
            return
        try:
            for db in self._session():
                run = db.get(ExperimentRun, self.run_id)
                if run is None:
                    return
                run.status = status
                run.model_hash = model_hash or run.model_hash
                run.error = error
                run.finished_at = datetime.utcnow()
                db.commit()
        except SQLAlchemyError as exc:
            logger.warning("could not finish run %s in ledger: %s", self.run_id, exc)


def list_runs(url: str) -> list[dict]:
    """Recorded runs, newest first, as plain dicts."""
    rows = []
    for db in get_db(url):
        for run in db.query(ExperimentRun).order_by(ExperimentRun.id.desc()).all():
            rows.append(
                {
                    "id": run.id,
                    "artifact_dir": run.artifact_dir,
                    "config_hash": run.config_hash,
                    "model_hash": run.model_hash,
                    "status": run.status.value,
                    "n_evaluations": len(run.evaluations),
                    "created_at": run.created_at.isoformat(timespec="seconds"),
                }
            )
    return rows
