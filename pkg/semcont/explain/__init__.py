"""Saliency explainers: RISE, LIME, KernelSHAP (black-box) and GradCAM (white-box)."""

import numpy as np

from semcont.errors import ConfigError
from semcont.explain.base import ConfidenceFn, batched, grid_segments
from semcont.explain.blackbox import SubprocessClassifier
from semcont.explain.gradcam import gradcam
from semcont.explain.kernelshap import kernelshap
from semcont.explain.lime import lime
from semcont.explain.rise import MaskSet, generate_masks, rise
from semcont.explain.saliency import SaliencyMap, load_map, normalize_map, save_map
from semcont.nn.network import ModelSnapshot, confidence_fn
from semcont.schemas.explainer import ExplainerConfig, ExplainerKind


def explain(
    kind: ExplainerKind | str,
    model: ModelSnapshot | None,
    image: np.ndarray,
    cfg: ExplainerConfig = ExplainerConfig(),
    model_fn: ConfidenceFn | None = None,
    threads: int | None = 1,
) -> SaliencyMap:
    """
    Run one explainer on one image.

    Black-box explainers use `model_fn` when given (e.g. a SubprocessClassifier),
    otherwise the snapshot's own confidence function. GradCAM always needs the
    snapshot.

    Raises:
        ConfigError: unknown explainer, or GradCAM without a model snapshot
    """
    try:
        kind = ExplainerKind(kind)
    except ValueError as exc:
        raise ConfigError(f"unknown explainer {kind!r}", key_path="explainers") from exc
    if kind is ExplainerKind.GRADCAM:
        if model is None:
            raise ConfigError("gradcam needs the model weights, not a black-box classifier", key_path="explainers")
        return gradcam(model, image, cfg.gradcam)
    if model_fn is None:
        if model is None:
            raise ConfigError(f"{kind.value} needs a model or a black-box classifier", key_path="explainers")
        model_fn = confidence_fn(model)
    if kind is ExplainerKind.RISE:
        return rise(model_fn, image, cfg.rise, threads=threads)
    if kind is ExplainerKind.LIME:
        return lime(model_fn, image, cfg.lime, threads=threads)
    return kernelshap(model_fn, image, cfg.kernelshap, threads=threads)


__all__ = [
    "ConfidenceFn",
    "ExplainerConfig",
    "ExplainerKind",
    "MaskSet",
    "SaliencyMap",
    "SubprocessClassifier",
    "batched",
    "explain",
    "generate_masks",
    "gradcam",
    "grid_segments",
    "kernelshap",
    "lime",
    "load_map",
    "normalize_map",
    "rise",
    "save_map",
]
