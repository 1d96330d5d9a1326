"""
Mini-batch training of the micro-CNN with binary cross-entropy.

Training is single-threaded and fully determined by the initial snapshot,
the dataset and `TrainConfig.seed`.
"""

import logging
from dataclasses import dataclass

import numpy as np

from semcont.errors import DataError, DivergenceError, NumericError
from semcont.nn.network import PARAM_ORDER, ModelSnapshot, backward_batch, forward_batch, predict_confidences
from semcont.schemas.training import EpochLog, OptimizerKind, TrainConfig, TrainLog
from semcont.utils.parallel import progress

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrainResult:
    """Trained snapshot and its per-epoch log."""
    model: ModelSnapshot
    log: TrainLog


# ====================
# LOSS
# ====================
def bce_with_logits(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Mean binary cross-entropy on logits and its gradient.

    Returns:
        (loss, dloss/dlogits)
    """
    z = logits.astype(np.float64)
    y = labels.astype(np.float64)
    loss = np.mean(np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z))))
    grad = (1.0 / (1.0 + np.exp(-z)) - y) / z.shape[0]
    return float(loss), grad.astype(logits.dtype)


# ====================
# OPTIMIZERS
# ====================
class _Sgd:
    def __init__(self, cfg: TrainConfig):
        self.lr = np.float32(cfg.learning_rate)

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        for name in PARAM_ORDER:
            params[name] = params[name] - self.lr * grads[name]


class _Adam:
    def __init__(self, cfg: TrainConfig, params: dict[str, np.ndarray]):
        self.lr = cfg.learning_rate
        self.beta1 = cfg.beta1
        self.beta2 = cfg.beta2
        self.eps = cfg.eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name in PARAM_ORDER:
            g = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            update = (self.lr * m_hat / (np.sqrt(v_hat) + self.eps)).astype(params[name].dtype)
            params[name] = params[name] - update


def _make_optimizer(cfg: TrainConfig, params: dict[str, np.ndarray]):
    if cfg.optimizer == OptimizerKind.SGD:
        return _Sgd(cfg)
    return _Adam(cfg, params)


# ====================
# TRAINING LOOP
# ====================
def _check_dataset(images: np.ndarray, labels: np.ndarray) -> None:
    if images.shape[0] == 0:
        raise DataError("training set is empty")
    if images.shape[0] != labels.shape[0]:
        raise DataError(f"{images.shape[0]} images but {labels.shape[0]} labels")
    if not np.isin(labels, (0, 1)).all():
        raise DataError("labels must be 0 or 1")
    if np.unique(labels).size < 2:
        raise DataError("training set contains a single class")


def evaluate_accuracy(model: ModelSnapshot, images: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of images whose thresholded confidence (0.5) matches the label."""
    confidences = predict_confidences(model, images)
    predicted = (confidences >= 0.5).astype(int)
    return float(np.mean(predicted == np.asarray(labels).astype(int)))


def train(
    model: ModelSnapshot,
    images: np.ndarray,
    labels: np.ndarray,
    cfg: TrainConfig,
) -> TrainResult:
    """
    Train `model` on labeled images.

    Args:
        model: Initial snapshot (left untouched)
        images: (N, H, W) pixels in [0, 1]
        labels: (N,) in {0, 1}; 1 is the positive class
        cfg: Hyperparameters

    Returns:
        TrainResult with the new snapshot and per-epoch loss/accuracy

    Raises:
        DataError: empty, mismatched or single-class dataset
        DivergenceError: loss became NaN/Inf
    """
    images = np.asarray(images)
    labels = np.asarray(labels).astype(np.int64)
    _check_dataset(images, labels)

    rng = np.random.default_rng(cfg.seed)
    params = {k: np.array(v, copy=True) for k, v in model.params.items()}
    optimizer = _make_optimizer(cfg, params)
    n = images.shape[0]
    log = TrainLog()

    for epoch in progress(range(1, cfg.epochs + 1), desc="train", total=cfg.epochs):
        order = rng.permutation(n)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            try:
                current = model.with_params(params)
                logits, cache = forward_batch(current, images[batch])
                loss, grad_logits = bce_with_logits(logits, labels[batch])
            except NumericError:
                loss = float("nan")
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"loss became non-finite at epoch {epoch}, batch starting {start} "
                    f"(learning_rate={cfg.learning_rate})"
                )
            grads, _ = backward_batch(current, cache, grad_logits)
            optimizer.step(params, grads)
            total_loss += loss * batch.size
            correct += int(np.sum((logits >= 0) == (labels[batch] == 1)))
        entry = EpochLog(epoch=epoch, loss=total_loss / n, accuracy=correct / n)
        log.epochs.append(entry)
        logger.info("epoch %d/%d loss=%.5f accuracy=%.4f", epoch, cfg.epochs, entry.loss, entry.accuracy)

    trained = model.with_params(params)
    log.final_accuracy = evaluate_accuracy(trained, images, labels)
    logger.info("final train accuracy %.4f", log.final_accuracy)
    return TrainResult(model=trained, log=log)
