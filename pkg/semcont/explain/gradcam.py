"""GradCAM for the micro-CNN (white-box: needs activation gradients)."""

import logging

import numpy as np

from semcont.errors import ConfigError
from semcont.explain.base import bilinear_resize
from semcont.explain.saliency import SaliencyMap
from semcont.nn.network import LAYERS, ModelSnapshot, forward, grad_wrt_activations
from semcont.schemas.explainer import GradCamConfig
from semcont.shapes.image import validate_image

logger = logging.getLogger(__name__)


def class_activation(model: ModelSnapshot, image: np.ndarray, layer: str) -> np.ndarray:
    """
    sum_k alpha_k * A^k at the layer's resolution, before the ReLU.

    alpha_k is the spatial mean of dlogit/dA^k.
    """
    activation = forward(model, image).activations[layer]
    grad = grad_wrt_activations(model, image, layer)
    alpha = grad.astype(np.float64).mean(axis=(1, 2))
    return np.tensordot(alpha, activation.astype(np.float64), axes=(0, 0))


def gradcam(model: ModelSnapshot, image: np.ndarray, cfg: GradCamConfig = GradCamConfig()) -> SaliencyMap:
    """
    GradCAM map, ReLU-ed and bilinearly upsampled to the input size.

    A map with no positive evidence is returned all-zero and flagged empty.

    Raises:
        ConfigError: unknown layer
    """
    if cfg.layer not in LAYERS or cfg.layer == "input":
        raise ConfigError(f"unknown layer {cfg.layer!r}", key_path="explainers.gradcam.layer")
    image = validate_image(image, model.input_size)
    cam = np.maximum(class_activation(model, image, cfg.layer), 0.0)
    empty = not np.any(cam > 0.0)
    values = np.zeros(image.shape) if empty else np.maximum(bilinear_resize(cam, image.shape), 0.0)
    if empty:
        logger.debug("gradcam: empty explanation")
    return SaliencyMap(values=values, explainer_id="gradcam", empty=empty, config=cfg.model_dump(mode="json"))
