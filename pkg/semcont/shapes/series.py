"""
Semantic variation series and the labeled training set.

A VariationSeries is the ordered sequence x_0..x_n = f(x_0; theta_i) for a
strictly increasing indicator theta, with theta_0 the identity transformation.
For synthetic shapes the generator parameter itself is the ground-truth
variation indicator.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from semcont.errors import DataError, DimensionMismatchError
from semcont.schemas.shapes import SeriesKind, ShapeKind, ShapeSpec
from semcont.shapes.render import render
from semcont.utils.parallel import parallel_map


@dataclass(frozen=True, eq=False)
class VariationSeries:
    """
    Ordered frames with their variation indicators.

    Attributes:
        kind: rotation, contrast or transition
        series_id: Stable name used in artifact paths and reports
        frames: (n, H, W) float32, read-only
        thetas: (n,) float64, strictly increasing
        meta: Generator parameters
    """

    kind: SeriesKind
    series_id: str
    frames: np.ndarray
    thetas: np.ndarray
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        frames = np.array(self.frames, dtype=np.float32, copy=True)
        thetas = np.array(self.thetas, dtype=np.float64, copy=True)
        if frames.ndim != 3:
            raise DimensionMismatchError(f"frames must be (n, H, W), got {frames.shape}")
        if frames.shape[0] != thetas.shape[0]:
            raise DataError(f"{frames.shape[0]} frames for {thetas.shape[0]} thetas")
        if frames.shape[0] == 0:
            raise DataError("series is empty")
        if np.any(np.diff(thetas) <= 0):
            raise DataError("thetas must be strictly increasing")
        if not np.all(np.isfinite(frames)) or frames.min() < 0.0 or frames.max() > 1.0:
            raise DataError("frame pixels must be finite and lie in [0, 1]")
        frames.setflags(write=False)
        thetas.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def reference(self) -> np.ndarray:
        """Frame 0, the identity transformation."""
        return self.frames[0]

    @property
    def image_size(self) -> tuple[int, int]:
        return tuple(self.frames.shape[1:])


# ====================
# GENERATORS
# ====================
def _check_frames(n_frames: int) -> None:
    if n_frames < 2:
        raise DataError(f"a series needs at least 2 frames, got {n_frames}")


def _render_all(specs: list[ShapeSpec], size: int, threads: int | None) -> np.ndarray:
    frames = parallel_map(lambda spec: render(spec, size), specs, threads=threads)
    return np.stack(frames)


def _unit_thetas(n_frames: int) -> np.ndarray:
    thetas = np.arange(n_frames, dtype=np.float64) / (n_frames - 1)
    thetas[-1] = 1.0
    return thetas


def make_rotation_series(
    base: ShapeSpec,
    n_frames: int = 100,
    total_deg: float = 120.0,
    size: int = 64,
    threads: int | None = None,
) -> VariationSeries:
    """
    Rotate a triangle clockwise over `total_deg` degrees.

    theta_i = i * total_deg / (n_frames - 1) is the rotation in degrees.

    Raises:
        DataError: base is not a triangle, n_frames < 2 or total_deg <= 0
    """
    if base.kind != ShapeKind.TRIANGLE:
        raise DataError(f"rotation series needs a triangle, got {base.kind.value}")
    _check_frames(n_frames)
    if total_deg <= 0:
        raise DataError("total_deg must be positive")
    thetas = np.linspace(0.0, total_deg, n_frames)
    specs = [base.model_copy(update={"rotation_deg": base.rotation_deg + float(theta)}) for theta in thetas]
    specs[0] = base
    return VariationSeries(
        kind=SeriesKind.ROTATION,
        series_id="rotation-triangle",
        frames=_render_all(specs, size, threads),
        thetas=thetas,
        meta={"base": base.model_dump(mode="json"), "n_frames": n_frames, "total_deg": total_deg},
    )


def make_contrast_series(
    base: ShapeSpec,
    n_frames: int = 100,
    size: int = 64,
    threads: int | None = None,
) -> VariationSeries:
    """
    Fade the shape into the background.

    theta_i = i / (n_frames - 1) is the fraction of contrast removed; the fill
    level moves linearly to the background level and the last frame is uniform.

    Raises:
        DataError: zero base contrast or n_frames < 2
    """
    _check_frames(n_frames)
    if base.contrast <= 0.0:
        raise DataError("contrast series needs a base with non-zero contrast")
    thetas = _unit_thetas(n_frames)
    specs = [
        base.model_copy(
            update={"fill_level": (1.0 - float(theta)) * base.fill_level + float(theta) * base.background_level}
        )
        for theta in thetas
    ]
    specs[0] = base
    return VariationSeries(
        kind=SeriesKind.CONTRAST,
        series_id=f"contrast-{base.kind.value}",
        frames=_render_all(specs, size, threads),
        thetas=thetas,
        meta={"base": base.model_dump(mode="json"), "n_frames": n_frames},
    )


def make_transition_series(
    base_circle: ShapeSpec,
    n_frames: int = 100,
    size: int = 64,
    threads: int | None = None,
) -> VariationSeries:
    """
    Morph a circle into an equilateral triangle at fixed rotation and contrast.

    theta_i = i / (n_frames - 1) is the morph parameter t.

    Raises:
        DataError: base is not a circle or n_frames < 2
    """
    if base_circle.kind != ShapeKind.CIRCLE:
        raise DataError(f"transition series starts from a circle, got {base_circle.kind.value}")
    _check_frames(n_frames)
    thetas = _unit_thetas(n_frames)
    specs = [base_circle.model_copy(update={"kind": ShapeKind.MORPH, "morph_t": float(t)}) for t in thetas]
    specs[0] = base_circle
    return VariationSeries(
        kind=SeriesKind.TRANSITION,
        series_id="transition-circle-triangle",
        frames=_render_all(specs, size, threads),
        thetas=thetas,
        meta={"base": base_circle.model_dump(mode="json"), "n_frames": n_frames},
    )


# ====================
# TRAINING DATA
# ====================
@dataclass(frozen=True, eq=False)
class LabeledImages:
    """Images with 0/1 labels (0 = circle, 1 = triangle)."""
    images: np.ndarray
    labels: np.ndarray
    seed: int = 0
    class_names: tuple[str, str] = ("circle", "triangle")

    def __len__(self) -> int:
        return self.images.shape[0]


def make_training_set(
    n_per_class: int,
    seed: int,
    size: int = 64,
    threads: int | None = None,
) -> LabeledImages:
    """
    Random triangles and circles, shuffled.

    Each sample draws rotation in [0, 120), circumradius in [10, 24] px and
    contrast in [0.3, 1.0] (dark shape centred on a lighter background).

    Raises:
        DataError: n_per_class < 1
    """
    if n_per_class < 1:
        raise DataError("n_per_class must be at least 1")
    rng = np.random.default_rng(seed)
    labels = np.concatenate([np.ones(n_per_class, dtype=np.int64), np.zeros(n_per_class, dtype=np.int64)])
    specs = []
    for label in labels:
        contrast = rng.uniform(0.3, 1.0)
        specs.append(
            ShapeSpec(
                kind=ShapeKind.TRIANGLE if label == 1 else ShapeKind.CIRCLE,
                rotation_deg=rng.uniform(0.0, 120.0),
                circumradius_px=rng.uniform(10.0, 24.0),
                fill_level=0.5 - contrast / 2.0,
                background_level=0.5 + contrast / 2.0,
                center=(size / 2.0, size / 2.0),
            )
        )
    order = rng.permutation(labels.size)
    images = _render_all([specs[i] for i in order], size, threads)
    return LabeledImages(images=images, labels=labels[order], seed=seed)


def train_test_split(data: LabeledImages, n_test: int) -> tuple[LabeledImages, LabeledImages]:
    """
    Hold out `n_test` images, half from each class, taken from the end.

    Raises:
        DataError: not enough images of a class
    """
    per_class = n_test // 2
    test_idx = []
    for label in (0, 1):
        idx = np.flatnonzero(data.labels == label)
        if idx.size <= per_class:
            raise DataError(f"class {label} has {idx.size} images; cannot hold out {per_class}")
        test_idx.extend(idx[-per_class:].tolist())
    test_mask = np.zeros(len(data), dtype=bool)
    test_mask[test_idx] = True
    train = LabeledImages(data.images[~test_mask], data.labels[~test_mask], data.seed, data.class_names)
    test = LabeledImages(data.images[test_mask], data.labels[test_mask], data.seed, data.class_names)
    return train, test
