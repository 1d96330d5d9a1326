"""Micro-CNN: tensor primitives, forward/backward passes, training and model files."""

from semcont.nn.network import (
    ARCH,
    LAYERS,
    ForwardTrace,
    ModelSnapshot,
    confidence_fn,
    forward,
    forward_batch,
    grad_wrt_activations,
    init_model,
    logits_from,
    predict_confidences,
    zero_model,
)
from semcont.nn.serialization import load_model, model_hash, save_model
from semcont.nn.training import TrainResult, evaluate_accuracy, train

__all__ = [
    "ARCH",
    "LAYERS",
    "ForwardTrace",
    "ModelSnapshot",
    "confidence_fn",
    "forward",
    "forward_batch",
    "grad_wrt_activations",
    "init_model",
    "logits_from",
    "predict_confidences",
    "zero_model",
    "load_model",
    "model_hash",
    "save_model",
    "TrainResult",
    "evaluate_accuracy",
    "train",
]
