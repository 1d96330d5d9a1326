"""Tests for series evaluation, continuity verdicts and windows."""

import numpy as np
import pytest
from pydantic import ValidationError

from semcont.continuity import (
    apply_window,
    check_explainer_continuity,
    check_predictor_continuity,
    evaluate_series,
    explain_series,
    load_evaluation,
    pairwise_concordance,
    predictive_case,
    save_evaluation,
    window_for_theta,
)
from semcont.errors import ConfigError, CorruptFileError, DataError, FrameError, VersionError
from semcont.explain.saliency import SaliencyMap
from semcont.metrics import correlate
from semcont.schemas.continuity import EvaluationMode, PredictiveCase, PredictorStatus, SeriesEvaluation
from semcont.schemas.explainer import ExplainerConfig, RiseConfig
from semcont.schemas.shapes import SeriesKind, ShapeSpec
from semcont.schemas.statistics import CorrelationMethod, DistanceKind
from semcont.shapes import make_rotation_series
from semcont.shapes.series import VariationSeries


def make_evaluation(n=8, distances=None, confidences=None, **extra):
    thetas = [float(i) for i in range(n)]
    confidences = confidences if confidences is not None else [0.5 + 0.05 * i for i in range(n)]
    distances = distances if distances is not None else [float(i) ** 2 for i in range(n)]
    return SeriesEvaluation(
        series_id="toy",
        explainer_id="rise",
        thetas=thetas,
        confidences=confidences,
        saliency_distances={DistanceKind.MSD: distances, DistanceKind.WASSERSTEIN1: [d / 2 for d in distances]},
        confidence_changes=[abs(c - confidences[0]) for c in confidences],
        **extra,
    )


def ramp_series(n=6):
    """Frames brighten uniformly; theta is the added brightness."""
    thetas = np.linspace(0.0, 0.5, n)
    frames = np.stack([np.full((8, 8), 0.2 + t, dtype=np.float32) for t in thetas])
    return VariationSeries(kind=SeriesKind.CONTRAST, series_id="ramp", frames=frames, thetas=thetas)


def mean_model(images):
    return np.asarray(images, dtype=np.float64).reshape(len(images), -1).mean(axis=1)


# ====================
# EVALUATION SCHEMA
# ====================
def test_evaluation_validates_lengths():
    with pytest.raises(ValidationError):
        make_evaluation(confidences=[0.5] * 7)


def test_evaluation_requires_zero_reference_distance():
    with pytest.raises(ValidationError):
        make_evaluation(distances=[1.0] + [2.0] * 7)


def test_evaluation_mode_short_names():
    assert EvaluationMode.parse("variation") is EvaluationMode.VARIATION_INDEXED
    assert EvaluationMode.parse("confidence_indexed") is EvaluationMode.CONFIDENCE_INDEXED
    with pytest.raises(ValueError):
        EvaluationMode.parse("theta")


# ====================
# EVALUATE SERIES
# ====================
def test_evaluate_series_with_precomputed_maps():
    series = ramp_series()
    maps = [SaliencyMap(np.eye(8) * (1 + i) + np.tril(np.ones((8, 8))) * i, "rise") for i in range(len(series))]
    evaluation = evaluate_series(None, series, "rise", model_fn=mean_model, maps=maps)
    assert len(evaluation) == 6
    np.testing.assert_allclose(evaluation.confidences, 0.2 + series.thetas, rtol=1e-6)
    assert evaluation.confidence_changes[0] == 0.0
    assert evaluation.saliency_distances[DistanceKind.MSD][0] == 0.0
    assert set(evaluation.saliency_distances) == {DistanceKind.MSD, DistanceKind.WASSERSTEIN1}
    assert evaluation.meta["series_kind"] == "contrast"
    assert evaluation.meta["image_msd"][0] == 0.0


def test_evaluate_series_runs_the_explainer():
    series = ramp_series(4)
    cfg = ExplainerConfig(rise=RiseConfig(n_masks=8, cell_grid=(2, 2), seed=5))
    evaluation = evaluate_series(None, series, "rise", cfg, model_fn=mean_model, threads=2)
    assert evaluation.explainer_id == "rise"
    assert evaluation.meta["seed"] == 5
    assert evaluation.meta["explainer_config"]["n_masks"] == 8


def test_evaluate_series_errors(tiny_model):
    series = ramp_series()
    with pytest.raises(ConfigError):
        evaluate_series(None, series, "rise")
    with pytest.raises(DataError, match="saliency maps"):
        evaluate_series(None, series, "rise", model_fn=mean_model, maps=[SaliencyMap(np.zeros((8, 8)), "rise")])
    with pytest.raises(DataError, match="model expects"):
        evaluate_series(tiny_model, series, "gradcam")


def test_frame_failures_carry_the_frame_index():
    series = ramp_series(3)
    cfg = ExplainerConfig(rise=RiseConfig(n_masks=4, cell_grid=(2, 2)))
    with pytest.raises(FrameError) as excinfo:
        explain_series(None, series, "rise", cfg, model_fn=lambda x: np.full(len(x), np.nan), threads=1)
    assert excinfo.value.frame_index == 0
    assert excinfo.value.exit_code == 4


def test_gradcam_rotation_distance_returns_to_zero(trained_model):
    series = make_rotation_series(ShapeSpec(), n_frames=5, total_deg=120.0)
    evaluation = evaluate_series(trained_model, series, "gradcam")
    assert evaluation.saliency_distances[DistanceKind.MSD][-1] == 0.0
    assert evaluation.confidences[-1] == pytest.approx(evaluation.confidences[0], rel=1e-6)


# ====================
# PREDICTOR
# ====================
def test_predictor_continuity_statuses():
    assert check_predictor_continuity(make_evaluation()).status is PredictorStatus.CONTINUOUS
    falling = make_evaluation(confidences=[0.9 - 0.05 * i for i in range(8)])
    assert check_predictor_continuity(falling).status is PredictorStatus.NOT_CONTINUOUS
    assert check_predictor_continuity(falling, expected_direction=-1).status is PredictorStatus.CONTINUOUS
    flat = make_evaluation(confidences=[0.5] * 8)
    check = check_predictor_continuity(flat)
    assert check.status is PredictorStatus.INDETERMINATE
    assert check.correlation is None


def test_predictive_case():
    evaluation = make_evaluation()
    assert predictive_case(evaluation, 1) is PredictiveCase.TRUE_POSITIVE
    assert predictive_case(evaluation, 0) is PredictiveCase.FALSE_POSITIVE
    low = make_evaluation(confidences=[0.4 - 0.01 * i for i in range(8)])
    assert predictive_case(low, 1) is PredictiveCase.FALSE_NEGATIVE
    assert predictive_case(low, 0) is PredictiveCase.TRUE_NEGATIVE


# ====================
# EXPLAINER
# ====================
def test_monotone_distances_are_continuous():
    verdict = check_explainer_continuity(make_evaluation())
    assert len(verdict.cells) == 6
    assert all(cell.significant_positive for cell in verdict.cells)
    assert verdict.verdict == "rise: continuous (6/6 significant positive correlations)"
    assert verdict.pairwise_concordance[DistanceKind.MSD] == 1.0
    assert verdict.cell("kendall", "msd").result.coefficient == pytest.approx(1.0)


def test_non_monotone_distances_are_not_continuous():
    distances = [0.0, 5.0, 1.0, 4.0, 2.0, 3.0, 0.5, 2.5]
    verdict = check_explainer_continuity(make_evaluation(distances=distances))
    assert not any(cell.significant_positive for cell in verdict.cells)
    assert verdict.verdict.startswith("rise: not continuous (0/6")


def test_constant_distances_give_undefined_cells():
    verdict = check_explainer_continuity(make_evaluation(distances=[0.0] * 8))
    assert all(cell.result is None for cell in verdict.cells)
    assert verdict.pairwise_concordance[DistanceKind.MSD] == 0.0
    assert "constant msd distances" in verdict.notes


def test_confidence_indexed_mode_uses_confidence_changes():
    confidences = [0.5, 0.9, 0.6, 0.8, 0.7, 0.55, 0.85, 0.65]
    changes = [abs(c - 0.5) for c in confidences]
    evaluation = make_evaluation(confidences=confidences, distances=[c * 3 for c in changes])
    variation = check_explainer_continuity(evaluation, EvaluationMode.VARIATION_INDEXED)
    indexed = check_explainer_continuity(evaluation, "confidence_indexed")
    assert indexed.cell(CorrelationMethod.SPEARMAN, DistanceKind.MSD).result.coefficient == pytest.approx(1.0)
    assert not variation.cell(CorrelationMethod.SPEARMAN, DistanceKind.MSD).significant_positive


def test_notes_report_empty_maps_and_constant_confidence():
    verdict = check_explainer_continuity(make_evaluation(confidences=[0.5] * 8, empty_maps=[2, 3]))
    assert "constant confidence" in verdict.notes
    assert any(note.startswith("2 empty explanation") for note in verdict.notes)


def test_too_short_series():
    with pytest.raises(DataError):
        check_explainer_continuity(make_evaluation(n=2))


def test_pairwise_concordance():
    assert pairwise_concordance([0, 1, 2], [0, 2, 1]) == pytest.approx(2 / 3)
    with pytest.raises(DataError):
        pairwise_concordance([1, 1, 1], [0, 1, 2])


def test_pairwise_ordered_distances_give_perfect_agreement():
    rng = np.random.default_rng(8)
    for _ in range(40):
        n = int(rng.integers(4, 13))
        x = rng.permutation(n) + rng.uniform(0.0, 0.5, size=n)
        d = np.sort(rng.uniform(0.0, 1.0, size=n))[np.argsort(np.argsort(x))]
        assert all(d[j] > d[i] for i in range(n) for j in range(n) if x[j] > x[i])
        assert correlate(CorrelationMethod.KENDALL, x, d).coefficient == pytest.approx(1.0)
        assert pairwise_concordance(x, d) == 1.0

        lo, hi = np.argsort(x)[:2]
        d[lo], d[hi] = d[hi], d[lo]
        assert correlate(CorrelationMethod.KENDALL, x, d).coefficient < 1.0
        assert pairwise_concordance(x, d) < 1.0


def test_increasing_confidence_gives_the_same_verdict_in_both_modes():
    rng = np.random.default_rng(3)
    confidences = list(0.3 + np.cumsum(rng.uniform(0.01, 0.06, size=10)))
    distances = [0.0, *np.cumsum(rng.uniform(0.1, 1.0, size=9))]
    evaluation = make_evaluation(n=10, confidences=confidences, distances=distances)
    variation = check_explainer_continuity(evaluation, EvaluationMode.VARIATION_INDEXED)
    indexed = check_explainer_continuity(evaluation, EvaluationMode.CONFIDENCE_INDEXED)
    assert variation.verdict == indexed.verdict == "rise: continuous (6/6 significant positive correlations)"
    for a, b in zip(variation.cells, indexed.cells):
        assert (a.method, a.distance) == (b.method, b.distance)
        assert a.significant_positive == b.significant_positive
        if a.method is not CorrelationMethod.PEARSON:
            assert a.result.coefficient == pytest.approx(b.result.coefficient)
            assert a.result.p_value == pytest.approx(b.result.p_value)
    assert variation.pairwise_concordance == indexed.pairwise_concordance


# ====================
# WINDOWS
# ====================
def test_apply_window_slices_every_list():
    evaluation = make_evaluation(n=8, empty_maps=[1, 6], meta={"image_msd": list(range(8))})
    windowed = apply_window(evaluation, (0, 4))
    assert len(windowed) == 5
    assert windowed.window == (0, 4)
    assert windowed.saliency_distances[DistanceKind.WASSERSTEIN1] == evaluation.saliency_distances[DistanceKind.WASSERSTEIN1][:5]
    assert windowed.empty_maps == [1]
    assert windowed.meta["image_msd"] == [0, 1, 2, 3, 4]
    assert apply_window(evaluation, (0, 7)) is evaluation


@pytest.mark.parametrize("window", [(1, 5), (0, 8), (0, 1)])
def test_invalid_windows(window):
    with pytest.raises(DataError):
        apply_window(make_evaluation(n=8), window)


def test_window_for_theta():
    evaluation = make_evaluation(n=8)
    assert window_for_theta(evaluation, 3.0) == (0, 3)
    assert window_for_theta(evaluation, 100.0) == (0, 7)


# ====================
# STORAGE
# ====================
def test_saved_evaluation_reads_back(tmp_path):
    evaluation = apply_window(make_evaluation(meta={"seed": 3}), (0, 5))
    path = save_evaluation(evaluation, tmp_path / "eval.json")
    assert load_evaluation(path).model_dump() == evaluation.model_dump()


def test_load_evaluation_errors(tmp_path):
    with pytest.raises(DataError):
        load_evaluation(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CorruptFileError):
        load_evaluation(bad)
    future = tmp_path / "future.json"
    future.write_text('{"format_version": 2}')
    with pytest.raises(VersionError):
        load_evaluation(future)
