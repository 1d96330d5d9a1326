"""
Tensor primitives for the micro-CNN.

Tensors are plain numpy arrays laid out NCHW. Every primitive works in the
dtype of its inputs, so the same code runs in float32 for the model and in
float64 for numerical oracles.
"""

import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

from semcont.errors import NumericError

Tensor = npt.NDArray[np.floating]


def check_finite(name: str, value: np.ndarray | float) -> None:
    """Raise NumericError if `value` holds NaN or Inf."""
    if not np.all(np.isfinite(value)):
        raise NumericError(f"non-finite values in {name}")


# ====================
# CONVOLUTION
# ====================
def conv2d(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """
    Valid 2-D convolution (cross-correlation), stride 1.

    Args:
        x: (N, C, H, W)
        weight: (K, C, kh, kw)
        bias: (K,)

    Returns:
        (N, K, H - kh + 1, W - kw + 1)
    """
    kh, kw = weight.shape[2:]
    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))  # (N, C, H', W', kh, kw)
    out = np.tensordot(windows, weight, axes=([1, 4, 5], [1, 2, 3]))  # (N, H', W', K)
    out = out.transpose(0, 3, 1, 2) + bias[None, :, None, None]
    return np.ascontiguousarray(out, dtype=x.dtype)


def conv2d_backward(
    x: Tensor, weight: Tensor, grad_out: Tensor
) -> tuple[Tensor, Tensor, Tensor]:
    """
    Gradients of a valid convolution.

    Returns:
        (grad_x, grad_weight, grad_bias)
    """
    kh, kw = weight.shape[2:]
    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))
    grad_weight = np.tensordot(grad_out, windows, axes=([0, 2, 3], [0, 2, 3]))  # (K, C, kh, kw)
    grad_bias = grad_out.sum(axis=(0, 2, 3))

    padded = np.pad(grad_out, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
    grad_windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))  # (N, K, H, W, kh, kw)
    flipped = weight[:, :, ::-1, ::-1]
    grad_x = np.tensordot(grad_windows, flipped, axes=([1, 4, 5], [0, 2, 3]))  # (N, H, W, C)
    grad_x = grad_x.transpose(0, 3, 1, 2)
    return (
        np.ascontiguousarray(grad_x, dtype=x.dtype),
        grad_weight.astype(weight.dtype, copy=False),
        grad_bias.astype(weight.dtype, copy=False),
    )


# ====================
# ACTIVATIONS
# ====================
def relu(x: Tensor) -> Tensor:
    return np.maximum(x, 0).astype(x.dtype, copy=False)


def relu_backward(pre_activation: Tensor, grad_out: Tensor) -> Tensor:
    return np.where(pre_activation > 0, grad_out, 0).astype(grad_out.dtype, copy=False)


def sigmoid(logit: np.ndarray | float) -> np.ndarray:
    """
    Logistic function in float64, kept strictly inside (0, 1).

    Saturated logits are clamped to the nearest representable values.
    """
    value = expit(np.asarray(logit, dtype=np.float64))
    return np.clip(value, np.finfo(np.float64).tiny, np.nextafter(1.0, 0.0))


# ====================
# POOLING
# ====================
def maxpool2x2(x: Tensor) -> tuple[Tensor, np.ndarray]:
    """
    2x2 max pooling, stride 2; odd trailing rows/columns are dropped.

    Returns:
        (pooled, argmax) where argmax holds the winning index 0..3 per window
    """
    n, c, h, w = x.shape
    ph, pw = h // 2, w // 2
    blocks = x[:, :, : 2 * ph, : 2 * pw].reshape(n, c, ph, 2, pw, 2)
    blocks = blocks.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, ph, pw, 4)
    argmax = blocks.argmax(axis=-1)
    pooled = np.take_along_axis(blocks, argmax[..., None], axis=-1)[..., 0]
    return np.ascontiguousarray(pooled), argmax


def maxpool2x2_backward(grad_out: Tensor, argmax: np.ndarray, input_shape: tuple[int, ...]) -> Tensor:
    """Route each pooled gradient to the first maximal entry of its window."""
    n, c, h, w = input_shape
    ph, pw = grad_out.shape[2:]
    one_hot = np.zeros((n, c, ph, pw, 4), dtype=grad_out.dtype)
    np.put_along_axis(one_hot, argmax[..., None], grad_out[..., None], axis=-1)
    blocks = one_hot.reshape(n, c, ph, pw, 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, 2 * ph, 2 * pw)
    grad_x = np.zeros(input_shape, dtype=grad_out.dtype)
    grad_x[:, :, : 2 * ph, : 2 * pw] = blocks
    return grad_x
