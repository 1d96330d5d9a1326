"""Series evaluation and semantic-continuity checks."""

from semcont.continuity.evaluation import (
    DEFAULT_DISTANCES,
    evaluate_series,
    explain_series,
    predictive_case,
    window_for_theta,
)
from semcont.continuity.storage import load_evaluation, save_evaluation
from semcont.continuity.verdict import (
    apply_window,
    check_explainer_continuity,
    check_predictor_continuity,
    pairwise_concordance,
)
from semcont.schemas.continuity import (
    ContinuityVerdict,
    EvaluationMode,
    PredictiveCase,
    PredictorCheck,
    PredictorStatus,
    SeriesEvaluation,
)

__all__ = [
    "DEFAULT_DISTANCES",
    "ContinuityVerdict",
    "EvaluationMode",
    "PredictiveCase",
    "PredictorCheck",
    "PredictorStatus",
    "SeriesEvaluation",
    "apply_window",
    "check_explainer_continuity",
    "check_predictor_continuity",
    "evaluate_series",
    "explain_series",
    "load_evaluation",
    "pairwise_concordance",
    "predictive_case",
    "save_evaluation",
    "window_for_theta",
]
