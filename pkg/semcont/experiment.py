"""
Full experiment runs.

    <out>/manifest.json          RunManifest, written last
    <out>/model/                 model.scmn, train_log.json
    <out>/datasets/              train/, test/, one directory per series
    <out>/saliency/<series>/<explainer>/frame_0000.{json,f32}
    <out>/evaluations/           <series>__<explainer>.json (+ .window.json)
    <out>/tables/<mode>/         <series>.csv, <series>.json
    <out>/plots/                 <series>__<mode>.svg
    <out>/strips/                <series>__<explainer>.svg
    <out>/ledger.db              run ledger (unless disabled)

A directory whose manifest is complete for the same config hash is left
untouched.
"""

import json
import logging
import tomllib
from pathlib import Path

from pydantic import ValidationError

from semcont import __version__
from semcont.continuity import (
    EvaluationMode,
    SeriesEvaluation,
    apply_window,
    check_explainer_continuity,
    evaluate_series,
    explain_series,
    save_evaluation,
    window_for_theta,
)
from semcont.database import ledger_url
from semcont.errors import ConfigError, DataError
from semcont.explain.saliency import save_map
from semcont.ledger import Ledger
from semcont.models import RunStatus
from semcont.nn import evaluate_accuracy, init_model, load_model, model_hash, save_model, train
from semcont.nn.network import ModelSnapshot
from semcont.report import ContinuityReport, Provenance, emit_relational_plot, emit_saliency_strip, emit_table, rank_explainers
from semcont.report.plots import PlotAxis
from semcont.schemas.continuity import ContinuityVerdict
from semcont.schemas.experiment import CellRecord, ExperimentConfig, RunManifest
from semcont.schemas.explainer import ExplainerConfig, ExplainerKind
from semcont.schemas.shapes import SeriesKind, ShapeKind, ShapeSpec
from semcont.schemas.statistics import CorrelationMethod, DistanceKind
from semcont.shapes import (
    VariationSeries,
    make_contrast_series,
    make_rotation_series,
    make_training_set,
    make_transition_series,
    save_dataset,
    save_series,
    train_test_split,
)
from semcont.utils.files import atomic_write_text, sha256_bytes
from semcont.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
MODEL_FILE = "model.scmn"


# ====================
# CONFIG
# ====================
def parse_config(data: dict) -> ExperimentConfig:
    """
    Validate a config mapping.

    Raises:
        ConfigError: first validation error, with its dotted key path
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        key_path = ".".join(str(part) for part in error["loc"])
        raise ConfigError(error["msg"], key_path=key_path) from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)


def config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return sha256_bytes(canonical.encode("utf-8"))


def explainer_config(cfg: ExperimentConfig) -> ExplainerConfig:
    """Explainer hyperparameters; sections without their own seed take the master seed."""
    section = cfg.explainers
    return ExplainerConfig(
        rise=section.rise, lime=section.lime, kernelshap=section.kernelshap, gradcam=section.gradcam
    ).with_seed(cfg.experiment.seed, keep_explicit=True)


def read_manifest(out_dir: Path) -> RunManifest | None:
    path = out_dir / MANIFEST_NAME
    if not path.exists():
        return None
    try:
        return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise DataError(f"{path}: invalid manifest: {exc}") from exc


def _write_manifest(out_dir: Path, manifest: RunManifest) -> None:
    atomic_write_text(out_dir / MANIFEST_NAME, json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")


def _rel(path: Path, root: Path) -> str:
    return path.relative_to(root).as_posix()


# ====================
# STAGES
# ====================
def prepare_model(cfg: ExperimentConfig, out_dir: Path, threads: int | None) -> tuple[ModelSnapshot, float | None, float | None]:
    """Load the configured model, or generate data and train one."""
    if cfg.model.path:
        model = load_model(cfg.model.path)
        logger.info("using pre-trained model %s", cfg.model.path)
        return model, None, None

    size = cfg.data.image_size
    data = make_training_set(cfg.data.n_per_class, cfg.experiment.seed, size=size, threads=threads)
    train_set, test_set = train_test_split(data, cfg.data.n_test)
    save_dataset(train_set, out_dir / "datasets" / "train")
    save_dataset(test_set, out_dir / "datasets" / "test")

    logger.info("training on %d images, holding out %d", len(train_set), len(test_set))
    result = train(init_model(cfg.experiment.seed, (size, size)), train_set.images, train_set.labels, cfg.train)
    test_accuracy = evaluate_accuracy(result.model, test_set.images, test_set.labels)
    log = result.log.model_copy(update={"test_accuracy": test_accuracy})
    save_model(result.model, out_dir / "model" / MODEL_FILE)
    atomic_write_text(out_dir / "model" / "train_log.json", log.model_dump_json(indent=2) + "\n")
    logger.info("train accuracy %.4f, test accuracy %.4f", log.final_accuracy, test_accuracy)
    return result.model, log.final_accuracy, test_accuracy


def build_series(cfg: ExperimentConfig, threads: int | None) -> list[VariationSeries]:
    size = cfg.data.image_size
    centre = (size / 2.0, size / 2.0)
    radius = 20.0 * size / 64.0
    n = cfg.series.n_frames
    series = []
    for kind in cfg.series.kinds:
        if kind is SeriesKind.ROTATION:
            base = ShapeSpec(kind=ShapeKind.TRIANGLE, center=centre, circumradius_px=radius)
            series.append(make_rotation_series(base, n, cfg.series.rotation_deg, size=size, threads=threads))
        elif kind is SeriesKind.CONTRAST:
            for shape in cfg.series.contrast_shapes:
                base = ShapeSpec(kind=shape, center=centre, circumradius_px=radius)
                series.append(make_contrast_series(base, n, size=size, threads=threads))
        else:
            base = ShapeSpec(kind=ShapeKind.CIRCLE, center=centre, circumradius_px=radius)
            series.append(make_transition_series(base, n, size=size, threads=threads))
    return series


def expected_direction(series_id: str, kind: SeriesKind) -> int:
    """Direction in which the triangle confidence should move along the series."""
    if kind is SeriesKind.CONTRAST and series_id.endswith(ShapeKind.TRIANGLE.value):
        return -1
    return 1


def windowed(evaluation: SeriesEvaluation, cfg: ExperimentConfig, kind: SeriesKind) -> SeriesEvaluation:
    max_theta = cfg.evaluation.windows.get(kind)
    if max_theta is None:
        return evaluation
    return apply_window(evaluation, window_for_theta(evaluation, max_theta))


def _kendall_msd(verdict: ContinuityVerdict) -> float | None:
    cell = verdict.cell(CorrelationMethod.KENDALL, DistanceKind.MSD)
    return cell.result.coefficient if cell is not None and cell.result is not None else None


# ====================
# RUN
# ====================
def run_experiment(
    cfg: ExperimentConfig | str | Path,
    out_dir: str | Path,
    threads: int | None = None,
) -> RunManifest:
    """
    Run a whole experiment into `out_dir`.

    Args:
        cfg: Parsed config or path to a TOML file
        out_dir: Artifact directory (created if missing)
        threads: Worker cap for cells; None -> settings.SEMCONT_THREADS

    Returns:
        The complete manifest

    Raises:
        ConfigError: invalid config
        DataError: out_dir holds a different experiment, or bad inputs
        NumericError: training divergence or numerical failure in a cell
    """
    if not isinstance(cfg, ExperimentConfig):
        cfg = load_config(cfg)
    out_dir = Path(out_dir)
    chash = config_hash(cfg)

    existing = read_manifest(out_dir)
    if existing is not None and existing.complete:
        if existing.config_hash == chash:
            logger.info("%s is already complete for this config; nothing to do", out_dir)
            ledger = Ledger(ledger_url(out_dir))
            ledger.start_run(str(out_dir.resolve()), chash, existing.seeds, __version__)
            ledger.finish_run(RunStatus.SKIPPED, model_hash=existing.model_hash)
            return existing
        raise DataError(f"{out_dir} holds a different experiment (config hash {existing.config_hash[:12]})")
    out_dir.mkdir(parents=True, exist_ok=True)

    exp_cfg = explainer_config(cfg)
    seeds = {
        "experiment": cfg.experiment.seed,
        "train": cfg.train.seed,
        **{kind.value: getattr(exp_cfg.for_kind(kind), "seed") for kind in ExplainerKind if kind is not ExplainerKind.GRADCAM},
    }
    ledger = Ledger(ledger_url(out_dir))
    ledger.start_run(str(out_dir.resolve()), chash, seeds, __version__)
    mhash = None
    try:
        model, train_acc, test_acc = prepare_model(cfg, out_dir, threads)
        mhash = model_hash(model)
        series_list = build_series(cfg, threads)
        for series in series_list:
            save_series(series, out_dir / "datasets" / series.series_id)

        cells = [(series, kind) for series in series_list for kind in cfg.explainers.names]

        def _run_cell(cell: tuple[VariationSeries, ExplainerKind]) -> tuple[SeriesEvaluation, CellRecord]:
            series, kind = cell
            maps = explain_series(model, series, kind, exp_cfg, threads=1)
            saliency_dir = out_dir / "saliency" / series.series_id / kind.value
            for i, saliency in enumerate(maps):
                save_map(saliency, saliency_dir / f"frame_{i:04d}")
            evaluation = evaluate_series(model, series, kind, exp_cfg, cfg.evaluation.distances, maps=maps, threads=1)
            eval_path = out_dir / "evaluations" / f"{series.series_id}__{kind.value}.json"
            save_evaluation(evaluation, eval_path)
            restricted = windowed(evaluation, cfg, series.kind)
            if restricted is not evaluation:
                save_evaluation(restricted, eval_path.with_suffix(".window.json"))
            emit_saliency_strip(
                maps,
                cfg.evaluation.strip_stride,
                out_dir / "strips" / f"{series.series_id}__{kind.value}.svg",
                thetas=series.thetas,
            )
            record = CellRecord(
                series_id=series.series_id,
                explainer_id=kind.value,
                evaluation=_rel(eval_path, out_dir),
                saliency_dir=_rel(saliency_dir, out_dir),
            )
            return evaluation, record

        results = parallel_map(_run_cell, cells, threads=threads, desc="cells")

        provenance = Provenance(
            model_hash=mhash,
            seeds=seeds,
            config=cfg.model_dump(mode="json"),
            tool_version=__version__,
        )
        tables, plots = [], []
        for mode in cfg.evaluation.modes:
            verdicts = []
            for (series, _), (evaluation, record) in zip(cells, results):
                verdict = check_explainer_continuity(
                    windowed(evaluation, cfg, series.kind), mode, expected_direction(series.series_id, series.kind)
                )
                verdicts.append(verdict)
                if mode is cfg.evaluation.modes[0]:
                    ledger.record_evaluation(
                        series.series_id, record.explainer_id, len(evaluation), _kendall_msd(verdict), verdict.verdict, record.evaluation
                    )
            report = ContinuityReport(runs=verdicts, provenance=provenance)
            tables += [_rel(p, out_dir) for p in emit_table(report, out_dir / "tables" / mode.value)]
            axis = PlotAxis.THETA if mode is EvaluationMode.VARIATION_INDEXED else PlotAxis.CONFIDENCE_CHANGE
            for series_id in report.series_ids():
                evals = [e for (s, _), (e, _) in zip(cells, results) if s.series_id == series_id]
                path = emit_relational_plot(evals, out_dir / "plots" / f"{series_id}__{mode.value}.svg", axis)
                plots.append(_rel(path, out_dir))
            ranking = ", ".join(f"{name} {score:.3f}" for name, score in rank_explainers(report))
            logger.info("continuity ranking (%s): %s", mode.value, ranking)

        manifest = RunManifest(
            tool_version=__version__,
            config_hash=chash,
            config=cfg.model_dump(mode="json"),
            seeds=seeds,
            model_hash=mhash,
            train_accuracy=train_acc,
            test_accuracy=test_acc,
            series=[s.series_id for s in series_list],
            cells=[record for _, record in results],
            tables=tables,
            plots=plots,
            strips=sorted(f"strips/{s.series_id}__{k.value}.svg" for s, k in cells),
            complete=True,
        )
        _write_manifest(out_dir, manifest)
    except Exception as exc:
        ledger.finish_run(RunStatus.FAILED, model_hash=mhash, error=f"{type(exc).__name__}: {exc}")
        raise
    ledger.finish_run(RunStatus.COMPLETED, model_hash=mhash)
    logger.info("experiment %s complete in %s (%d cells)", cfg.experiment.name, out_dir, len(cells))
    return manifest
