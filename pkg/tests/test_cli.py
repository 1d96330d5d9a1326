"""Tests for the `semcont` command line."""

import json
import sys

import pytest

from semcont.main import build_parser, main


@pytest.fixture
def workspace(tmp_path):
    assert main(["gen", "--kind", "train", "--out", str(tmp_path / "train"), "--n-per-class", "8", "--seed", "1"]) == 0
    assert main(["gen", "--kind", "rotation", "--out", str(tmp_path / "rot"), "--frames", "5"]) == 0
    assert main(["train", "--data", str(tmp_path / "train"), "--out", str(tmp_path / "model.scmn"),
                 "--epochs", "1", "--batch-size", "8", "--n-test", "4"]) == 0
    return tmp_path


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "semcont" in capsys.readouterr().out


REQUIRED = {
    "gen": ["--kind", "rotation", "--out", "x"],
    "train": ["--data", "d", "--out", "m"],
    "explain": ["--series", "s", "--out", "o", "--explainer", "rise"],
    "eval": ["--series", "s", "--out", "o", "--explainer", "rise"],
    "report": [],
    "run": ["c.toml", "--out", "o"],
}


@pytest.mark.parametrize("verb", sorted(REQUIRED))
def test_every_verb_is_registered(verb):
    assert build_parser().parse_args([verb, *REQUIRED[verb]]).command == verb


def test_gen_writes_series(workspace):
    manifest = json.loads((workspace / "rot" / "manifest.json").read_text())
    assert manifest["series_id"] == "rotation-triangle"
    assert len(manifest["thetas"]) == 5
    log = json.loads((workspace / "model.log.json").read_text())
    assert log["test_accuracy"] is not None


def test_gen_train_writes_a_labeled_dataset(workspace):
    from semcont.commands import gen

    assert "train" in gen.KINDS
    manifest = json.loads((workspace / "train" / "manifest.json").read_text())
    assert len(manifest["labels"]) == len(manifest["frame_files"]) == 16
    assert sorted(set(manifest["labels"])) == [0, 1]
    assert manifest["seed"] == 1


def test_explain_eval_report_pipeline(workspace, capsys):
    maps = workspace / "maps"
    assert main(["explain", "--model", str(workspace / "model.scmn"), "--series", str(workspace / "rot"),
                 "--explainer", "gradcam", "--out", str(maps), "--strip-stride", "2"]) == 0
    assert (maps / "frame_0004.json").exists()
    assert (maps / "strip.svg").exists()

    capsys.readouterr()
    evaluation = workspace / "evals" / "rot__gradcam.json"
    assert main(["eval", "--model", str(workspace / "model.scmn"), "--series", str(workspace / "rot"),
                 "--explainer", "gradcam", "--saliency", str(maps), "--out", str(evaluation)]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["explainer_id"] == "gradcam"
    assert verdict["mode"] == "variation_indexed"
    assert len(verdict["cells"]) == 6

    assert main(["report", str(workspace / "evals"), "--out", str(workspace / "report"), "--mode", "confidence"]) == 0
    assert (workspace / "report" / "tables" / "rotation-triangle.csv").exists()
    assert (workspace / "report" / "plots" / "rotation-triangle__confidence_indexed.svg").exists()


def test_eval_with_window(workspace, capsys):
    out = workspace / "windowed.json"
    assert main(["eval", "--model", str(workspace / "model.scmn"), "--series", str(workspace / "rot"),
                 "--explainer", "gradcam", "--window", "0:3", "--out", str(out)]) == 0
    saved = json.loads(out.read_text())
    assert saved["window"] == [0, 3]
    assert len(saved["thetas"]) == 4


def test_blackbox_eval(tmp_path, capsys):
    series = tmp_path / "small"
    assert main(["gen", "--kind", "rotation", "--out", str(series), "--frames", "3", "--size", "16"]) == 0
    script = tmp_path / "child.py"
    script.write_text(
        "import base64, json, sys\n"
        "import numpy as np\n"
        "for line in sys.stdin:\n"
        "    r = json.loads(line)\n"
        "    px = np.frombuffer(base64.b64decode(r['pixels_f32_b64']), dtype='<f4')\n"
        "    print(json.dumps({'id': r['id'], 'confidence': float(1.0 - px.mean())}), flush=True)\n"
    )
    out = tmp_path / "bb.json"
    command = f"{sys.executable} {script}"
    assert main(["eval", "--series", str(series), "--explainer", "rise", "--blackbox", command, "--out", str(out)]) == 0
    saved = json.loads(out.read_text())
    assert saved["explainer_id"] == "rise"
    assert len(saved["confidences"]) == 3


@pytest.mark.parametrize(
    "argv,code",
    [
        (["eval", "--series", "SERIES", "--explainer", "rise", "--out", "o.json"], 2),
        (["eval", "--series", "SERIES", "--explainer", "gradcam", "--blackbox", "cat", "--out", "o.json"], 2),
        (["eval", "--model", "MODEL", "--series", "SERIES", "--explainer", "rise", "--mode", "theta", "--out", "o.json"], 2),
        (["eval", "--model", "MODEL", "--series", "SERIES", "--explainer", "gradcam", "--window", "1:3", "--out", "o.json"], 3),
        (["eval", "--model", "MODEL", "--series", "MISSING", "--explainer", "rise", "--out", "o.json"], 3),
        (["explain", "--model", "MISSING", "--series", "SERIES", "--explainer", "rise", "--out", "maps"], 3),
        (["train", "--data", "SERIES", "--out", "m.scmn", "--epochs", "0"], 2),
        (["report", "--out", "r"], 2),
        (["run", "MISSING", "--out", "r"], 2),
    ],
)
def test_exit_codes(workspace, argv, code):
    replace = {
        "SERIES": str(workspace / "rot"),
        "MODEL": str(workspace / "model.scmn"),
        "MISSING": str(workspace / "missing"),
    }
    argv = [replace.get(a, a) for a in argv]
    argv = [str(workspace / a) if a in ("o.json", "maps", "m.scmn", "r") else a for a in argv]
    assert main(argv) == code


def test_report_lists_ledger_runs(tmp_path, capsys):
    from semcont.ledger import Ledger
    from semcont.models import RunStatus

    ledger = Ledger(f"sqlite:///{tmp_path / 'ledger.db'}")
    ledger.start_run(str(tmp_path), "cafe", {}, "0.1.0")
    ledger.finish_run(RunStatus.COMPLETED)
    capsys.readouterr()
    assert main(["report", "--ledger", str(tmp_path)]) == 0
    runs = json.loads(capsys.readouterr().out)
    assert runs[0]["config_hash"] == "cafe"
