"""
LIME with grid superpixels and a weighted ridge surrogate.

Samples are uniform on/off superpixel vectors; the first sample is always the
unperturbed image. Each sample is weighted by an exponential kernel on its
cosine distance to the all-on vector.
"""

import logging

import numpy as np

from semcont.errors import SingularSystemError
from semcont.explain.base import ConfidenceFn, SegmentGame, grid_segments, resolve_baseline, solve_system
from semcont.explain.saliency import SaliencyMap
from semcont.schemas.explainer import LimeConfig
from semcont.shapes.image import validate_image

logger = logging.getLogger(__name__)


def sample_coalitions(n_players: int, n_samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.integers(0, 2, size=(n_samples, n_players)).astype(np.float64)
    z[0, :] = 1.0
    return z


def kernel_weights(coalitions: np.ndarray, kernel_width: float) -> np.ndarray:
    """exp(-d^2 / width^2) with d = 1 - cosine similarity to the all-on vector."""
    z = np.asarray(coalitions, dtype=np.float64)
    n_on = z.sum(axis=1)
    similarity = np.sqrt(n_on / z.shape[1])  # z . 1 / (|z| |1|) for binary z; 0 for the empty coalition
    distance = 1.0 - similarity
    return np.exp(-(distance ** 2) / kernel_width ** 2)


def lime_coefficients(
    coalitions: np.ndarray,
    values: np.ndarray,
    weights: np.ndarray,
    ridge_lambda: float,
) -> tuple[np.ndarray, float]:
    """
    Weighted ridge fit of values on coalitions with an unpenalized intercept.

    Returns:
        (coefficients (M,), intercept)

    Raises:
        SingularSystemError: the normal equations are singular
    """
    X = np.asarray(coalitions, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    total = w.sum()
    if total <= 0.0:
        raise SingularSystemError("lime: all sample weights are zero")
    x_mean = (w @ X) / total
    y_mean = float(w @ y) / total
    Xc = X - x_mean
    yc = y - y_mean
    gram = Xc.T @ (Xc * w[:, None]) + ridge_lambda * np.eye(X.shape[1])
    coef = solve_system(gram, Xc.T @ (w * yc), "lime")
    return coef, y_mean - float(x_mean @ coef)


def lime(
    model_fn: ConfidenceFn,
    image: np.ndarray,
    cfg: LimeConfig = LimeConfig(),
    threads: int | None = 1,
) -> SaliencyMap:
    """
    LIME saliency map: every pixel carries its superpixel's surrogate coefficient.

    Raises:
        SingularSystemError: the surrogate regression has no unique solution
        NumericError: non-finite confidence
    """
    image = validate_image(image)
    segments = grid_segments(*image.shape, *cfg.segments)
    baseline = resolve_baseline(image, cfg.baseline)
    game = SegmentGame(model_fn, image, segments, baseline)
    z = sample_coalitions(game.n_players, cfg.n_samples, cfg.seed)
    values = game.values(z, threads=threads)
    coef, intercept = lime_coefficients(z, values, kernel_weights(z, cfg.kernel_width), cfg.ridge_lambda)
    logger.debug("lime: intercept %.4f, max |coef| %.4f", intercept, float(np.abs(coef).max()))
    return SaliencyMap(
        values=game.to_pixels(coef),
        explainer_id="lime",
        rng_seed=cfg.seed,
        config=cfg.model_dump(mode="json") | {"resolved_baseline": baseline},
    )
