"""Shared fixtures: tiny models, small images and a trained shape model."""

import numpy as np
import pytest

from semcont.config import settings
from semcont.nn import init_model, train
from semcont.schemas.shapes import ShapeKind, ShapeSpec
from semcont.schemas.training import TrainConfig
from semcont.shapes import make_training_set, render

TINY = (16, 16)


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch):
    """No progress bars and no implicit ledger files during tests."""
    monkeypatch.setattr(settings, "SEMCONT_PROGRESS", False)
    monkeypatch.setattr(settings, "SEMCONT_LEDGER_URL", "")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_model():
    """Random float32 model on 16x16 inputs."""
    return init_model(seed=3, input_size=TINY)


@pytest.fixture
def tiny_model64(tiny_model):
    """The tiny model in float64 for finite-difference oracles."""
    return tiny_model.cast(np.float64)


@pytest.fixture
def tiny_image(rng):
    return rng.uniform(0.0, 1.0, size=TINY).astype(np.float32)


@pytest.fixture
def triangle_image():
    return render(ShapeSpec(kind=ShapeKind.TRIANGLE))


@pytest.fixture
def circle_image():
    return render(ShapeSpec(kind=ShapeKind.CIRCLE))


@pytest.fixture(scope="session")
def trained_model():
    """Shape classifier trained briefly on 64x64 triangles and circles."""
    data = make_training_set(60, seed=11)
    cfg = TrainConfig(epochs=6, batch_size=16, learning_rate=2e-3, seed=11)
    return train(init_model(seed=11), data.images, data.labels, cfg).model
