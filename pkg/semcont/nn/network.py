"""
The fixed micro-CNN.

    input (1 x 64 x 64)
      -> conv1: 8 filters 3x3, stride 1 -> ReLU -> maxpool 2x2
      -> conv2: 16 filters 3x3, stride 1 -> ReLU -> maxpool 2x2
      -> dense: 3136 -> 1 (logit) -> sigmoid (confidence of the positive class)

Forward passes cache every intermediate tensor so that exact reverse-mode
gradients can be taken with respect to parameters (training) or to any named
activation (GradCAM). A ModelSnapshot is immutable; all functions here are pure
and safe to call from many threads.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from semcont.config import settings
from semcont.errors import DataError, DimensionMismatchError
from semcont.nn.tensor import (
    Tensor,
    check_finite,
    conv2d,
    conv2d_backward,
    maxpool2x2,
    maxpool2x2_backward,
    relu,
    relu_backward,
    sigmoid,
)

# ====================
# ARCHITECTURE
# ====================
ARCH: dict[str, object] = {
    "conv1": {"filters": 8, "kernel": [3, 3], "stride": 1, "activation": "relu", "pool": [2, 2]},
    "conv2": {"filters": 16, "kernel": [3, 3], "stride": 1, "activation": "relu", "pool": [2, 2]},
    "dense": {"units": 1},
    "output": "sigmoid",
}

# Activation names in forward order; each is the output of that stage.
# "conv1"/"conv2" are post-ReLU feature maps.
LAYERS: tuple[str, ...] = ("input", "conv1", "pool1", "conv2", "pool2")

PARAM_ORDER: tuple[str, ...] = (
    "conv1.weight",
    "conv1.bias",
    "conv2.weight",
    "conv2.bias",
    "dense.weight",
    "dense.bias",
)

DEFAULT_CLASS_NAMES: tuple[str, str] = ("circle", "triangle")


def param_shapes(input_size: tuple[int, int]) -> dict[str, tuple[int, ...]]:
    """Parameter shapes implied by ARCH for a given input size."""
    h, w = input_size
    h1, w1 = (h - 2) // 2, (w - 2) // 2
    h2, w2 = (h1 - 2) // 2, (w1 - 2) // 2
    if h2 < 1 or w2 < 1:
        raise DimensionMismatchError(f"input size {input_size} too small for the micro-CNN")
    return {
        "conv1.weight": (8, 1, 3, 3),
        "conv1.bias": (8,),
        "conv2.weight": (16, 8, 3, 3),
        "conv2.bias": (16,),
        "dense.weight": (1, 16 * h2 * w2),
        "dense.bias": (1,),
    }


# ====================
# MODEL SNAPSHOT
# ====================
@dataclass(frozen=True, eq=False)
class ModelSnapshot:
    """
    Immutable weights of the micro-CNN.

    Attributes:
        params: Named parameter tensors (read-only arrays)
        input_size: (H, W) of accepted images
        class_names: (negative_label, positive_label)
        seed: Seed used to initialize the weights
        arch: Architecture descriptor
    """

    params: Mapping[str, np.ndarray]
    input_size: tuple[int, int] = (settings.IMAGE_SIZE, settings.IMAGE_SIZE)
    class_names: tuple[str, str] = DEFAULT_CLASS_NAMES
    seed: int = 0
    arch: Mapping[str, object] = field(default_factory=lambda: ARCH)

    def __post_init__(self):
        expected = param_shapes(self.input_size)
        if set(self.params) != set(expected):
            raise DataError(f"parameters {sorted(self.params)} do not match architecture {sorted(expected)}")
        frozen = {}
        for name in PARAM_ORDER:
            value = np.array(self.params[name], copy=True)
            if value.shape != expected[name]:
                raise DimensionMismatchError(f"{name}: shape {value.shape}, expected {expected[name]}")
            check_finite(name, value)
            value.setflags(write=False)
            frozen[name] = value
        object.__setattr__(self, "params", MappingProxyType(frozen))

    @property
    def dtype(self) -> np.dtype:
        return self.params["conv1.weight"].dtype

    def with_params(self, params: Mapping[str, np.ndarray]) -> "ModelSnapshot":
        """Copy of this snapshot with some or all parameters replaced."""
        merged = dict(self.params)
        merged.update(params)
        return ModelSnapshot(merged, self.input_size, self.class_names, self.seed, self.arch)

    def cast(self, dtype) -> "ModelSnapshot":
        """Copy with every parameter converted to `dtype` (float64 for oracles)."""
        return self.with_params({k: v.astype(dtype) for k, v in self.params.items()})


def init_model(
    seed: int = 0,
    input_size: tuple[int, int] = (settings.IMAGE_SIZE, settings.IMAGE_SIZE),
    class_names: tuple[str, str] = DEFAULT_CLASS_NAMES,
) -> ModelSnapshot:
    """
    Fresh float32 model with uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights.

    Example:
        >>> model = init_model(seed=7)
        >>> model.params["conv1.weight"].shape
        (8, 1, 3, 3)
    """
    rng = np.random.default_rng(seed)
    shapes = param_shapes(input_size)
    fan_in = {
        "conv1": 1 * 3 * 3,
        "conv2": 8 * 3 * 3,
        "dense": shapes["dense.weight"][1],
    }
    params = {}
    for name in PARAM_ORDER:
        bound = np.sqrt(1.0 / fan_in[name.split(".")[0]])
        params[name] = rng.uniform(-bound, bound, size=shapes[name]).astype(np.float32)
    return ModelSnapshot(params, tuple(input_size), tuple(class_names), seed)


def zero_model(**kwargs) -> ModelSnapshot:
    """Model whose parameters are all zero (logit 0, confidence 0.5)."""
    base = init_model(**kwargs)
    return base.with_params({k: np.zeros_like(v) for k, v in base.params.items()})


# ====================
# FORWARD
# ====================
@dataclass(frozen=True, eq=False)
class ForwardTrace:
    """
    Result of one forward pass.

    confidence == sigmoid(logit); activations are keyed by LAYERS names and
    have no batch dimension (C, h, w).
    """

    confidence: float
    logit: float
    activations: Mapping[str, np.ndarray]


def validate_images(model: ModelSnapshot, images: np.ndarray) -> np.ndarray:
    """
    Check a stack of images against the model and return it as (N, 1, H, W).

    Raises:
        DimensionMismatchError: wrong spatial size
        DataError: pixels outside [0, 1] or non-finite
    """
    images = np.asarray(images)
    if images.ndim == 2:
        images = images[None]
    if images.ndim != 3 or tuple(images.shape[1:]) != tuple(model.input_size):
        raise DimensionMismatchError(
            f"image shape {images.shape[-2:]} does not match model input {tuple(model.input_size)}"
        )
    if not np.all(np.isfinite(images)):
        raise DataError("image contains non-finite pixels")
    if images.size and (images.min() < 0.0 or images.max() > 1.0):
        raise DataError("pixel values must lie in [0, 1]")
    return images.astype(model.dtype, copy=False)[:, None, :, :]


def _stage(model: ModelSnapshot, name: str, x: Tensor, cache: dict | None) -> Tensor:
    """Apply the stage that produces activation `name` from the previous one."""
    p = model.params
    if name == "conv1":
        pre = conv2d(x, p["conv1.weight"], p["conv1.bias"])
        if cache is not None:
            cache["conv1_pre"] = pre
        return relu(pre)
    if name == "conv2":
        pre = conv2d(x, p["conv2.weight"], p["conv2.bias"])
        if cache is not None:
            cache["conv2_pre"] = pre
        return relu(pre)
    if name in ("pool1", "pool2"):
        pooled, argmax = maxpool2x2(x)
        if cache is not None:
            cache[f"{name}_argmax"] = argmax
        return pooled
    raise KeyError(name)


def _dense(model: ModelSnapshot, pooled: Tensor) -> np.ndarray:
    flat = pooled.reshape(pooled.shape[0], -1)
    logits = flat @ model.params["dense.weight"][0] + model.params["dense.bias"][0]
    return logits.astype(model.dtype, copy=False)


def forward_batch(model: ModelSnapshot, images: np.ndarray) -> tuple[np.ndarray, dict]:
    """
    Forward a stack of images.

    Args:
        model: The micro-CNN
        images: (N, H, W) pixels in [0, 1]

    Returns:
        (logits (N,), cache) where cache maps every LAYERS name and the
        pre-activation/argmax helpers to batched tensors
    """
    x = validate_images(model, images)
    cache: dict = {"input": x}
    for name in LAYERS[1:]:
        x = _stage(model, name, x, cache)
        cache[name] = x
    logits = _dense(model, x)
    check_finite("logits", logits)
    return logits, cache


def logits_from(model: ModelSnapshot, layer: str, activation: Tensor) -> np.ndarray:
    """
    Continue a forward pass from a named activation.

    Args:
        layer: One of LAYERS
        activation: Batched (N, C, h, w) or single (C, h, w) tensor of that layer

    Returns:
        logits (N,)
    """
    if layer not in LAYERS:
        raise KeyError(f"unknown layer {layer!r}; expected one of {LAYERS}")
    x = np.asarray(activation)
    if x.ndim == 3:
        x = x[None]
    for name in LAYERS[LAYERS.index(layer) + 1:]:
        x = _stage(model, name, x, None)
    return _dense(model, x)


def forward(model: ModelSnapshot, image: np.ndarray) -> ForwardTrace:
    """
    Forward one image and keep its activations.

    Example:
        >>> trace = forward(zero_model(), np.zeros((64, 64)))
        >>> trace.confidence
        0.5
    """
    logits, cache = forward_batch(model, image)
    logit = float(logits[0])
    activations = {name: cache[name][0] for name in LAYERS}
    return ForwardTrace(confidence=float(sigmoid(logit)), logit=logit, activations=MappingProxyType(activations))


def predict_confidences(model: ModelSnapshot, images: np.ndarray, chunk_size: int = 128) -> np.ndarray:
    """Positive-class confidences (float64) for a stack of images, in fixed-size chunks."""
    images = np.asarray(images)
    if images.ndim == 2:
        images = images[None]
    out = np.empty(images.shape[0], dtype=np.float64)
    for start in range(0, images.shape[0], chunk_size):
        logits, _ = forward_batch(model, images[start:start + chunk_size])
        out[start:start + chunk_size] = sigmoid(logits)
    return out


def confidence_fn(model: ModelSnapshot) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap a model as a black-box batch function (N, H, W) -> (N,) confidences."""
    def _predict(images: np.ndarray) -> np.ndarray:
        return predict_confidences(model, images)

    return _predict


# ====================
# BACKWARD
# ====================
def backward_batch(
    model: ModelSnapshot,
    cache: dict,
    grad_logits: np.ndarray,
    stop_at: str = "input",
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """
    Reverse-mode pass through the cached forward.

    Args:
        model: Model used for the forward pass
        cache: Cache returned by forward_batch
        grad_logits: dLoss/dlogit per sample (N,)
        stop_at: Stop once the gradient of this activation is known

    Returns:
        (param_grads, activation_grads); param grads are complete only when
        stop_at == "input"
    """
    p = model.params
    dtype = model.dtype
    grad_logits = np.asarray(grad_logits, dtype=dtype)
    pooled = cache["pool2"]
    n = pooled.shape[0]

    param_grads: dict[str, np.ndarray] = {}
    act_grads: dict[str, np.ndarray] = {}

    flat = pooled.reshape(n, -1)
    param_grads["dense.weight"] = (grad_logits @ flat)[None, :].astype(dtype, copy=False)
    param_grads["dense.bias"] = np.array([grad_logits.sum()], dtype=dtype)
    grad = np.outer(grad_logits, p["dense.weight"][0]).reshape(pooled.shape).astype(dtype, copy=False)
    act_grads["pool2"] = grad
    if stop_at == "pool2":
        return param_grads, act_grads

    grad = maxpool2x2_backward(grad, cache["pool2_argmax"], cache["conv2"].shape)
    act_grads["conv2"] = grad
    if stop_at == "conv2":
        return param_grads, act_grads

    grad = relu_backward(cache["conv2_pre"], grad)
    grad, param_grads["conv2.weight"], param_grads["conv2.bias"] = conv2d_backward(
        cache["pool1"], p["conv2.weight"], grad
    )
    act_grads["pool1"] = grad
    if stop_at == "pool1":
        return param_grads, act_grads

    grad = maxpool2x2_backward(grad, cache["pool1_argmax"], cache["conv1"].shape)
    act_grads["conv1"] = grad
    if stop_at == "conv1":
        return param_grads, act_grads

    grad = relu_backward(cache["conv1_pre"], grad)
    grad, param_grads["conv1.weight"], param_grads["conv1.bias"] = conv2d_backward(
        cache["input"], p["conv1.weight"], grad
    )
    act_grads["input"] = grad
    return param_grads, act_grads


def grad_wrt_activations(model: ModelSnapshot, image: np.ndarray, layer: str) -> np.ndarray:
    """
    Gradient of the logit with respect to a named activation.

    Args:
        model: The micro-CNN
        image: (H, W) pixels in [0, 1]
        layer: One of LAYERS ("conv2" is the last convolutional feature map)

    Returns:
        dlogit/dA with the same shape as the activation (C, h, w)

    Raises:
        KeyError: unknown layer name
    """
    if layer not in LAYERS:
        raise KeyError(f"unknown layer {layer!r}; expected one of {LAYERS}")
    logits, cache = forward_batch(model, image)
    _, act_grads = backward_batch(model, cache, np.ones_like(logits), stop_at=layer)
    grad = act_grads[layer][0]
    check_finite(f"gradient of {layer}", grad)
    return grad
