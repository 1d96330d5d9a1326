"""Tests for shape rendering and variation series."""

import json

import numpy as np
import pytest

from semcont.errors import CorruptFileError, DataError
from semcont.schemas.shapes import SeriesKind, ShapeKind, ShapeSpec
from semcont.shapes import (
    estimate_background,
    image_msd,
    load_dataset,
    load_series,
    make_contrast_series,
    make_rotation_series,
    make_training_set,
    make_transition_series,
    render,
    save_dataset,
    save_series,
    train_test_split,
)


def test_render_levels_and_shape():
    image = render(ShapeSpec(kind=ShapeKind.CIRCLE, fill_level=0.2, background_level=0.8))
    assert image.shape == (64, 64)
    assert image.dtype == np.float32
    assert image[32, 32] == pytest.approx(0.2)
    assert image[0, 0] == pytest.approx(0.8)
    assert image.min() == pytest.approx(0.2)
    assert image.max() == pytest.approx(0.8)


def test_render_is_deterministic():
    spec = ShapeSpec(kind=ShapeKind.TRIANGLE, rotation_deg=17.0)
    np.testing.assert_array_equal(render(spec), render(spec))


def test_circle_area_matches_radius():
    image = render(ShapeSpec(kind=ShapeKind.CIRCLE, fill_level=0.0, background_level=1.0, circumradius_px=16))
    covered = float(np.sum(1.0 - image))
    assert covered == pytest.approx(np.pi * 16 ** 2, rel=0.01)


def test_triangle_has_120_degree_symmetry():
    a = render(ShapeSpec(kind=ShapeKind.TRIANGLE, rotation_deg=10.0))
    b = render(ShapeSpec(kind=ShapeKind.TRIANGLE, rotation_deg=130.0))
    np.testing.assert_array_equal(a, b)


def test_morph_endpoints_equal_pure_shapes():
    circle = ShapeSpec(kind=ShapeKind.CIRCLE)
    triangle = ShapeSpec(kind=ShapeKind.TRIANGLE)
    np.testing.assert_array_equal(render(circle.model_copy(update={"kind": ShapeKind.MORPH, "morph_t": 0.0})), render(circle))
    np.testing.assert_array_equal(render(circle.model_copy(update={"kind": ShapeKind.MORPH, "morph_t": 1.0})), render(triangle))


def test_shape_leaving_canvas_is_rejected():
    with pytest.raises(DataError, match="exceeds"):
        render(ShapeSpec(circumradius_px=40.0))


def test_rotation_series():
    series = make_rotation_series(ShapeSpec(), n_frames=5, total_deg=120.0)
    assert series.kind is SeriesKind.ROTATION
    assert series.series_id == "rotation-triangle"
    np.testing.assert_allclose(series.thetas, [0, 30, 60, 90, 120])
    np.testing.assert_array_equal(series.frames[0], render(ShapeSpec()))
    np.testing.assert_array_equal(series.frames[-1], series.frames[0])
    assert image_msd(series.frames[0], series.frames[2]) > 0


def test_rotation_series_needs_a_triangle():
    with pytest.raises(DataError, match="triangle"):
        make_rotation_series(ShapeSpec(kind=ShapeKind.CIRCLE), n_frames=3)


def test_contrast_series_fades_to_background():
    series = make_contrast_series(ShapeSpec(kind=ShapeKind.CIRCLE), n_frames=4)
    assert series.series_id == "contrast-circle"
    assert series.thetas[0] == 0.0 and series.thetas[-1] == 1.0
    last = series.frames[-1]
    assert np.ptp(last) == pytest.approx(0.0, abs=1e-6)
    distances = [image_msd(series.frames[0], f) for f in series.frames]
    assert distances == sorted(distances)


def test_contrast_series_needs_contrast():
    with pytest.raises(DataError, match="contrast"):
        make_contrast_series(ShapeSpec(fill_level=0.5, background_level=0.5), n_frames=3)


def test_transition_series_goes_from_circle_to_triangle():
    series = make_transition_series(ShapeSpec(kind=ShapeKind.CIRCLE), n_frames=3)
    assert series.series_id == "transition-circle-triangle"
    np.testing.assert_array_equal(series.frames[0], render(ShapeSpec(kind=ShapeKind.CIRCLE)))
    np.testing.assert_array_equal(series.frames[-1], render(ShapeSpec(kind=ShapeKind.TRIANGLE)))


def test_series_frames_are_read_only():
    series = make_transition_series(ShapeSpec(kind=ShapeKind.CIRCLE), n_frames=3)
    with pytest.raises(ValueError):
        series.frames[0, 0, 0] = 0.0


@pytest.mark.parametrize("n_frames", [0, 1])
def test_series_needs_two_frames(n_frames):
    with pytest.raises(DataError):
        make_rotation_series(ShapeSpec(), n_frames=n_frames)


def test_training_set_is_balanced_and_reproducible():
    a = make_training_set(6, seed=4)
    b = make_training_set(6, seed=4)
    assert len(a) == 12
    assert int(a.labels.sum()) == 6
    np.testing.assert_array_equal(a.images, b.images)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert not np.array_equal(a.images, make_training_set(6, seed=5).images)


def test_train_test_split_holds_out_both_classes():
    data = make_training_set(6, seed=1)
    train, test = train_test_split(data, 4)
    assert len(train) == 8 and len(test) == 4
    assert int(test.labels.sum()) == 2


def test_train_test_split_rejects_oversized_holdout():
    with pytest.raises(DataError):
        train_test_split(make_training_set(2, seed=1), 4)


def test_estimate_background_uses_border():
    image = render(ShapeSpec(kind=ShapeKind.TRIANGLE, fill_level=0.1, background_level=0.7))
    assert estimate_background(image) == pytest.approx(0.7)


# ====================
# STORAGE
# ====================
@pytest.fixture
def saved_series(tmp_path):
    series = make_rotation_series(ShapeSpec(), n_frames=4, total_deg=90.0)
    save_series(series, tmp_path / "rot")
    return series, tmp_path / "rot"


def _edit_manifest(directory, **changes):
    path = directory / "manifest.json"
    manifest = json.loads(path.read_text())
    manifest.update(changes)
    path.write_text(json.dumps(manifest))


def test_series_round_trip(saved_series):
    series, directory = saved_series
    loaded = load_series(directory)
    assert loaded.kind is series.kind
    assert loaded.series_id == series.series_id
    np.testing.assert_array_equal(loaded.thetas, series.thetas)
    np.testing.assert_array_equal(loaded.frames, series.frames)


def test_series_falls_back_to_pgm(saved_series):
    series, directory = saved_series
    for raw in directory.glob("*.f32"):
        raw.unlink()
    loaded = load_series(directory)
    np.testing.assert_allclose(loaded.frames, series.frames, atol=0.5 / 255 + 1e-6)


def test_series_frame_count_must_match_manifest(saved_series):
    _, directory = saved_series
    manifest = json.loads((directory / "manifest.json").read_text())
    _edit_manifest(directory, frame_files=manifest["frame_files"][:-1])
    with pytest.raises(DataError, match="frame files"):
        load_series(directory)


def test_series_thetas_must_increase(saved_series):
    _, directory = saved_series
    _edit_manifest(directory, thetas=[0.0, 30.0, 30.0, 90.0])
    with pytest.raises(DataError, match="strictly increasing"):
        load_series(directory)


def test_series_missing_frame(saved_series):
    _, directory = saved_series
    (directory / "frame_0002.f32").unlink()
    (directory / "frame_0002.pgm").unlink()
    with pytest.raises(DataError, match="missing frame"):
        load_series(directory)


def test_series_corrupt_frame(saved_series):
    _, directory = saved_series
    raw = directory / "frame_0001.f32"
    raw.write_bytes(raw.read_bytes()[:-8])
    with pytest.raises(CorruptFileError):
        load_series(directory)


def test_series_manifest_errors(saved_series, tmp_path):
    _, directory = saved_series
    (directory / "manifest.json").write_text("{not json")
    with pytest.raises(CorruptFileError):
        load_series(directory)
    with pytest.raises(DataError, match="no manifest.json"):
        load_series(tmp_path / "nowhere")


def test_dataset_round_trip(tmp_path):
    data = make_training_set(3, seed=4)
    save_dataset(data, tmp_path / "train")
    loaded = load_dataset(tmp_path / "train")
    np.testing.assert_array_equal(loaded.images, data.images)
    np.testing.assert_array_equal(loaded.labels, data.labels)
    assert tuple(loaded.class_names) == tuple(data.class_names)
