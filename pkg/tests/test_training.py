"""Tests for training the micro-CNN."""

import numpy as np
import pytest

from semcont.errors import DataError, DivergenceError
from semcont.nn import evaluate_accuracy, init_model, train
from semcont.nn.training import bce_with_logits
from semcont.schemas.training import OptimizerKind, TrainConfig


@pytest.fixture
def toy_data(rng):
    """Bright versus dark 16x16 squares: trivially separable."""
    n = 24
    labels = np.tile([0, 1], n // 2)
    images = np.where(labels[:, None, None] == 1, 0.8, 0.2) + rng.uniform(-0.1, 0.1, size=(n, 16, 16))
    return np.clip(images, 0, 1).astype(np.float32), labels


def test_bce_matches_closed_form():
    logits = np.array([0.0, 2.0, -1.0])
    labels = np.array([1, 0, 1])
    loss, grad = bce_with_logits(logits, labels)
    p = 1 / (1 + np.exp(-logits))
    expected = -np.mean(labels * np.log(p) + (1 - labels) * np.log(1 - p))
    assert loss == pytest.approx(expected, rel=1e-12)
    np.testing.assert_allclose(grad, (p - labels) / 3, rtol=1e-12)


@pytest.mark.parametrize("optimizer", list(OptimizerKind))
def test_zero_learning_rate_leaves_weights_unchanged(tiny_model, toy_data, optimizer):
    images, labels = toy_data
    cfg = TrainConfig(epochs=2, batch_size=8, learning_rate=0.0, optimizer=optimizer)
    result = train(tiny_model, images, labels, cfg)
    for name, value in tiny_model.params.items():
        np.testing.assert_array_equal(result.model.params[name], value)
    assert len(result.log.epochs) == 2


def test_training_reduces_loss(tiny_model, toy_data):
    images, labels = toy_data
    result = train(tiny_model, images, labels, TrainConfig(epochs=15, batch_size=8, learning_rate=1e-2))
    losses = [e.loss for e in result.log.epochs]
    assert losses[-1] < losses[0]
    assert result.log.final_accuracy == evaluate_accuracy(result.model, images, labels)
    assert result.log.final_accuracy >= 0.9


def test_training_is_deterministic(tiny_model, toy_data):
    images, labels = toy_data
    cfg = TrainConfig(epochs=2, batch_size=8, learning_rate=1e-2, seed=5)
    a = train(tiny_model, images, labels, cfg).model
    b = train(tiny_model, images, labels, cfg).model
    for name in a.params:
        np.testing.assert_array_equal(a.params[name], b.params[name])


def test_initial_snapshot_is_untouched(tiny_model, toy_data):
    before = {k: v.copy() for k, v in tiny_model.params.items()}
    train(tiny_model, *toy_data, TrainConfig(epochs=1, learning_rate=0.1))
    for name, value in before.items():
        np.testing.assert_array_equal(tiny_model.params[name], value)


@pytest.mark.parametrize(
    "images,labels,message",
    [
        (np.zeros((0, 16, 16)), np.zeros(0), "empty"),
        (np.zeros((4, 16, 16)), np.array([0, 1, 0]), "labels"),
        (np.zeros((2, 16, 16)), np.array([0, 2]), "0 or 1"),
        (np.zeros((3, 16, 16)), np.array([1, 1, 1]), "single class"),
    ],
)
def test_invalid_training_sets(tiny_model, images, labels, message):
    with pytest.raises(DataError, match=message):
        train(tiny_model, images, labels, TrainConfig(epochs=1))


def test_divergence_is_reported(toy_data):
    images, labels = toy_data
    model = init_model(seed=0, input_size=(16, 16))
    huge = model.with_params({k: v * 1e30 for k, v in model.params.items()})
    with pytest.raises(DivergenceError):
        train(huge, images, labels, TrainConfig(epochs=3, optimizer=OptimizerKind.SGD, learning_rate=1e-2))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_shape_classifier_reaches_high_accuracy(seed):
    from semcont.shapes import make_training_set, train_test_split

    data = make_training_set(500, seed=seed)
    train_set, test_set = train_test_split(data, 100)
    result = train(init_model(seed=seed), train_set.images, train_set.labels, TrainConfig(epochs=10, seed=seed))
    assert result.log.final_accuracy >= 0.99
    assert evaluate_accuracy(result.model, test_set.images, test_set.labels) >= 0.99
