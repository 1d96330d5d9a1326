"""Tests for settings, experiment configs and the error hierarchy."""

from pathlib import Path

import pytest

from semcont.config import settings
from semcont.errors import ConfigError, CorruptFileError, DataError, DivergenceError, FrameError, NumericError
from semcont.experiment import config_hash, explainer_config, load_config, parse_config
from semcont.schemas.continuity import EvaluationMode
from semcont.schemas.explainer import ExplainerKind
from semcont.schemas.shapes import SeriesKind
from semcont.utils.parallel import parallel_map, resolve_threads

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def test_bundled_config_loads():
    cfg = load_config(CONFIG_DIR / "shapes.toml")
    assert cfg.data.n_per_class == 500
    assert cfg.series.n_frames == 100
    assert cfg.explainers.names == list(ExplainerKind)
    assert cfg.evaluation.modes == [EvaluationMode.VARIATION_INDEXED, EvaluationMode.CONFIDENCE_INDEXED]
    assert cfg.evaluation.windows == {SeriesKind.ROTATION: 30.0}
    assert cfg.explainers.rise.n_masks == 1000


@pytest.mark.parametrize(
    "data,key_path",
    [
        ({"explainers": {"names": ["rise", "occlusion"]}}, "explainers.names.1"),
        ({"data": {"n_per_clas": 3}}, "data.n_per_clas"),
        ({"series": {"contrast_shapes": ["morph"]}}, "series.contrast_shapes"),
        ({"train": {"epochs": 0}}, "train.epochs"),
    ],
)
def test_invalid_configs_name_the_key(data, key_path):
    with pytest.raises(ConfigError) as excinfo:
        parse_config(data)
    assert excinfo.value.key_path == key_path
    assert excinfo.value.exit_code == 2


def test_missing_and_malformed_config_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[data\nn_per_class = 3\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_config_hash_tracks_content():
    base = parse_config({})
    assert config_hash(base) == config_hash(parse_config({}))
    assert config_hash(base) != config_hash(parse_config({"experiment": {"seed": 1}}))


def test_explainer_seeds_follow_the_master_seed():
    cfg = explainer_config(parse_config({"experiment": {"seed": 9}}))
    assert cfg.rise.seed == cfg.lime.seed == cfg.kernelshap.seed == 9


def test_explicit_explainer_seeds_survive_the_master_seed():
    cfg = explainer_config(parse_config({"experiment": {"seed": 9}, "explainers": {"rise": {"seed": 5}}}))
    assert cfg.rise.seed == 5
    assert cfg.lime.seed == cfg.kernelshap.seed == 9


def test_exit_codes():
    assert DataError("x").exit_code == 3
    assert CorruptFileError("x").exit_code == 3
    assert NumericError("x").exit_code == 4
    assert DivergenceError("x").exit_code == 4
    frame = FrameError(7, CorruptFileError("bad"))
    assert frame.exit_code == 3
    assert "frame 7" in str(frame)


def test_thread_cap(monkeypatch):
    monkeypatch.setattr(settings, "SEMCONT_THREADS", 3)
    assert resolve_threads(None) == 3
    assert resolve_threads(8) == 3
    assert resolve_threads(0) == 1


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setattr(settings, "SEMCONT_THREADS", 4)
    assert parallel_map(lambda x: x * x, list(range(20)), threads=4) == [x * x for x in range(20)]
