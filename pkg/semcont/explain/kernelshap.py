"""
KernelSHAP over grid superpixels.

Coalitions are weighted by the Shapley kernel

    pi(z) = (M - 1) / (C(M, |z|) * |z| * (M - |z|))

and the efficiency constraint sum(phi) = v(full) - v(empty) is enforced by
eliminating the last player. With every coalition enumerated and no ridge the
solution equals the exact Shapley values.
"""

import itertools
import logging
from math import comb

import numpy as np

from semcont.errors import ConfigError
from semcont.explain.base import ConfidenceFn, SegmentGame, grid_segments, resolve_baseline, solve_system
from semcont.explain.saliency import SaliencyMap
from semcont.schemas.explainer import KernelShapConfig
from semcont.shapes.image import validate_image

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_PLAYERS = 16


def shapley_kernel(n_players: int, size: int) -> float:
    """Kernel weight of one coalition of the given size (0 < size < M)."""
    return (n_players - 1) / (comb(n_players, size) * size * (n_players - size))


def all_coalitions(n_players: int) -> np.ndarray:
    """Every proper non-empty coalition, shape (2^M - 2, M)."""
    rows = [z for z in itertools.product((0.0, 1.0), repeat=n_players) if 0 < sum(z) < n_players]
    return np.asarray(rows, dtype=np.float64)


def sample_coalitions(n_players: int, n_samples: int, seed: int) -> np.ndarray:
    """
    Coalitions drawn with probability proportional to the Shapley kernel.

    A size s is drawn with weight (M-1)/(s(M-s)) (the kernel summed over all
    coalitions of that size), then a uniform subset of that size.
    """
    rng = np.random.default_rng(seed)
    sizes = np.arange(1, n_players)
    size_weights = (n_players - 1) / (sizes * (n_players - sizes))
    drawn = rng.choice(sizes, size=n_samples, p=size_weights / size_weights.sum())
    z = np.zeros((n_samples, n_players), dtype=np.float64)
    for i, s in enumerate(drawn):
        z[i, rng.permutation(n_players)[:s]] = 1.0
    return z


def shapley_estimate(
    coalitions: np.ndarray,
    values: np.ndarray,
    weights: np.ndarray,
    value_empty: float,
    value_full: float,
    ridge_lambda: float = 0.0,
) -> np.ndarray:
    """
    Constrained weighted least squares for the Shapley values.

    Args:
        coalitions: (n, M) proper coalitions
        values: v(z) for every coalition
        weights: Regression weight of every coalition
        value_empty: v of the empty coalition (baseline image)
        value_full: v of the full coalition (original image)
        ridge_lambda: Penalty on the M - 1 free coefficients

    Returns:
        phi (M,) with sum(phi) == value_full - value_empty

    Raises:
        SingularSystemError: the reduced system has no unique solution
    """
    z = np.asarray(coalitions, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    delta = value_full - value_empty
    target = np.asarray(values, dtype=np.float64) - value_empty - z[:, -1] * delta
    X = z[:, :-1] - z[:, -1:]
    gram = X.T @ (X * w[:, None]) + ridge_lambda * np.eye(X.shape[1])
    free = solve_system(gram, X.T @ (w * target), "kernelshap")
    return np.append(free, delta - free.sum())


def kernelshap(
    model_fn: ConfidenceFn,
    image: np.ndarray,
    cfg: KernelShapConfig = KernelShapConfig(),
    threads: int | None = 1,
) -> SaliencyMap:
    """
    KernelSHAP saliency map: every pixel carries its superpixel's Shapley estimate.

    Raises:
        ConfigError: fewer than two superpixels, or too many to enumerate
        SingularSystemError: the regression has no unique solution
        NumericError: non-finite confidence
    """
    image = validate_image(image)
    segments = grid_segments(*image.shape, *cfg.segments)
    n_players = int(segments.max()) + 1
    if n_players < 2:
        raise ConfigError("kernelshap needs at least two superpixels", key_path="explainers.kernelshap.segments")
    if cfg.exhaustive and n_players > MAX_EXHAUSTIVE_PLAYERS:
        raise ConfigError(
            f"{n_players} superpixels are too many to enumerate (max {MAX_EXHAUSTIVE_PLAYERS})",
            key_path="explainers.kernelshap.exhaustive",
        )

    baseline = resolve_baseline(image, cfg.baseline)
    game = SegmentGame(model_fn, image, segments, baseline)
    ends = game.values(np.stack([np.zeros(n_players), np.ones(n_players)]))
    if cfg.exhaustive:
        z = all_coalitions(n_players)
        weights = np.array([shapley_kernel(n_players, int(s)) for s in z.sum(axis=1)])
        ridge = 0.0
    else:
        z = sample_coalitions(n_players, cfg.n_samples, cfg.seed)
        weights = np.ones(z.shape[0])
        ridge = cfg.ridge_lambda
    phi = shapley_estimate(z, game.values(z, threads=threads), weights, ends[0], ends[1], ridge)
    logger.debug("kernelshap: %d coalitions, efficiency gap %.2e", z.shape[0], phi.sum() - (ends[1] - ends[0]))
    return SaliencyMap(
        values=game.to_pixels(phi),
        explainer_id="kernelshap",
        rng_seed=None if cfg.exhaustive else cfg.seed,
        config=cfg.model_dump(mode="json") | {"resolved_baseline": baseline},
    )
