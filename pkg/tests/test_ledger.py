"""Tests for the SQLAlchemy run ledger."""

from semcont.config import settings
from semcont.database import LEDGER_FILENAME, ledger_url
from semcont.ledger import Ledger, list_runs
from semcont.models import RunStatus


def test_ledger_records_a_run(tmp_path):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    ledger = Ledger(url)
    ledger.start_run(str(tmp_path), "abc123", {"experiment": 0}, "0.1.0")
    ledger.record_evaluation("rotation-triangle", "rise", 10, 0.42, "rise: continuous (6/6 ...)", "evaluations/x.json")
    ledger.record_evaluation("rotation-triangle", "gradcam", 10, None, "gradcam: not continuous (0/6 ...)", "evaluations/y.json")
    ledger.finish_run(RunStatus.COMPLETED, model_hash="deadbeef")

    runs = list_runs(url)
    assert len(runs) == 1
    assert runs[0]["status"] == "completed"
    assert runs[0]["model_hash"] == "deadbeef"
    assert runs[0]["n_evaluations"] == 2
    assert runs[0]["config_hash"] == "abc123"


def test_failed_runs_keep_their_error(tmp_path):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    first = Ledger(url)
    first.start_run("a", "h1", {}, "0.1.0")
    first.finish_run(RunStatus.FAILED, error="boom")
    second = Ledger(url)
    second.start_run("b", "h2", {}, "0.1.0")
    runs = list_runs(url)
    assert [r["status"] for r in runs] == ["running", "failed"]


def test_disabled_ledger_is_a_no_op():
    ledger = Ledger(None)
    ledger.start_run("x", "h", {}, "0")
    ledger.record_evaluation("s", "e", 3, None, "v", "p")
    ledger.finish_run(RunStatus.COMPLETED)
    assert ledger.run_id is None


def test_unreachable_database_does_not_raise(tmp_path):
    ledger = Ledger(f"sqlite:///{tmp_path / 'missing' / 'dir' / 'ledger.db'}")
    ledger.start_run("x", "h", {}, "0")
    assert ledger.url is None
    ledger.finish_run(RunStatus.COMPLETED)


def test_ledger_url_resolution(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "SEMCONT_LEDGER_URL", None)
    assert ledger_url(tmp_path) == f"sqlite:///{(tmp_path / LEDGER_FILENAME).resolve()}"
    assert ledger_url(None) is None
    monkeypatch.setattr(settings, "SEMCONT_LEDGER_URL", "")
    assert ledger_url(tmp_path) is None
    monkeypatch.setattr(settings, "SEMCONT_LEDGER_URL", "sqlite:///elsewhere.db")
    assert ledger_url(tmp_path) == "sqlite:///elsewhere.db"
