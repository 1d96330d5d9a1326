"""Pydantic schemas: configs, file sidecars, evaluation and report artifacts."""

from semcont.schemas.blackbox import ClassifyRequest, ClassifyResponse
from semcont.schemas.continuity import (
    ContinuityCell,
    ContinuityVerdict,
    EvaluationMode,
    PredictiveCase,
    PredictorCheck,
    PredictorStatus,
    SeriesEvaluation,
)
from semcont.schemas.experiment import ExperimentConfig, RunManifest
from semcont.schemas.explainer import (
    ExplainerConfig,
    ExplainerKind,
    GradCamConfig,
    KernelShapConfig,
    LimeConfig,
    RiseConfig,
    SaliencySidecar,
)
from semcont.schemas.model_file import ModelHeader, ParamEntry
from semcont.schemas.report import ContinuityReport, CorrelationTable, Provenance, TableRow
from semcont.schemas.shapes import DatasetManifest, SeriesKind, SeriesManifest, ShapeKind, ShapeSpec
from semcont.schemas.statistics import CorrelationMethod, CorrelationResult, DistanceKind
from semcont.schemas.training import EpochLog, OptimizerKind, TrainConfig, TrainLog
