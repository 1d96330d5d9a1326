"""
RISE: randomized input sampling.

    S(p) = 1 / (N * keep_prob) * sum_i conf(x perturbed by mask_i) * mask_i(p)

Masks are Bernoulli(keep_prob) on a coarse cell grid, bilinearly upsampled to
(grid + 1) cells and cropped at a random sub-cell shift.
"""

from dataclasses import dataclass, field

import numpy as np

from semcont.explain.base import ConfidenceFn, bilinear_resize, blend, evaluate_confidences, resolve_baseline
from semcont.explain.saliency import SaliencyMap
from semcont.schemas.explainer import RiseConfig
from semcont.shapes.image import validate_image


@dataclass(frozen=True, eq=False)
class MaskSet:
    """Soft masks in [0, 1] with the parameters that generated them."""
    masks: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        masks = np.asarray(self.masks, dtype=np.float32)
        if masks.ndim != 3 or masks.shape[0] == 0:
            raise ValueError("a mask set needs at least one (H, W) mask")
        if masks.min() < 0.0 or masks.max() > 1.0:
            raise ValueError("mask values must lie in [0, 1]")
        object.__setattr__(self, "masks", masks)

    def __len__(self) -> int:
        return self.masks.shape[0]


def generate_masks(cfg: RiseConfig, shape: tuple[int, int]) -> MaskSet:
    """Seeded RISE masks for images of `shape`."""
    rng = np.random.default_rng(cfg.seed)
    height, width = shape
    grid_h, grid_w = cfg.cell_grid
    cell_h = int(np.ceil(height / grid_h))
    cell_w = int(np.ceil(width / grid_w))
    up_h, up_w = (grid_h + 1) * cell_h, (grid_w + 1) * cell_w

    grids = (rng.random((cfg.n_masks, grid_h, grid_w)) < cfg.keep_prob).astype(np.float64)
    shifts_y = rng.integers(0, cell_h, size=cfg.n_masks)
    shifts_x = rng.integers(0, cell_w, size=cfg.n_masks)
    masks = np.empty((cfg.n_masks, height, width), dtype=np.float32)
    for i in range(cfg.n_masks):
        up = bilinear_resize(grids[i], (up_h, up_w))
        masks[i] = up[shifts_y[i]:shifts_y[i] + height, shifts_x[i]:shifts_x[i] + width]
    params = {"n_masks": cfg.n_masks, "cell_grid": list(cfg.cell_grid), "keep_prob": cfg.keep_prob, "seed": cfg.seed}
    return MaskSet(np.clip(masks, 0.0, 1.0), params)


def mask_mean_map(mask_set: MaskSet, keep_prob: float) -> np.ndarray:
    """sum_i mask_i / (N * keep_prob): the RISE map of a model returning 1 everywhere."""
    return mask_set.masks.astype(np.float64).sum(axis=0) / (len(mask_set) * keep_prob)


def rise(
    model_fn: ConfidenceFn,
    image: np.ndarray,
    cfg: RiseConfig = RiseConfig(),
    masks: MaskSet | None = None,
    threads: int | None = 1,
) -> SaliencyMap:
    """
    RISE saliency map.

    Args:
        model_fn: Batch confidence function
        image: (H, W) in [0, 1]
        cfg: Hyperparameters (seed, mask count, grid, keep probability)
        masks: Pre-built masks; generated from cfg when None
        threads: Worker cap for model evaluations

    Raises:
        NumericError: non-finite confidence
    """
    image = validate_image(image)
    mask_set = masks if masks is not None else generate_masks(cfg, image.shape)
    baseline = resolve_baseline(image, cfg.baseline)
    confidences = np.empty(len(mask_set), dtype=np.float64)
    for start in range(0, len(mask_set), cfg.batch_size):
        chunk = mask_set.masks[start:start + cfg.batch_size]
        confidences[start:start + chunk.shape[0]] = evaluate_confidences(
            model_fn, blend(image, chunk, baseline), cfg.batch_size, threads
        )
    flat = mask_set.masks.reshape(len(mask_set), -1).astype(np.float64)
    saliency = (confidences @ flat).reshape(image.shape) / (len(mask_set) * cfg.keep_prob)
    return SaliencyMap(
        values=saliency,
        explainer_id="rise",
        rng_seed=cfg.seed,
        config=cfg.model_dump(mode="json") | {"resolved_baseline": baseline},
    )
