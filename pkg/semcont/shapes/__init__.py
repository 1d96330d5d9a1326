"""Synthetic shape images, semantic variation series and their storage."""

from semcont.schemas.shapes import SeriesKind, ShapeKind, ShapeSpec
from semcont.shapes.image import estimate_background, image_msd, validate_image
from semcont.shapes.render import render
from semcont.shapes.series import (
    LabeledImages,
    VariationSeries,
    make_contrast_series,
    make_rotation_series,
    make_training_set,
    make_transition_series,
    train_test_split,
)
from semcont.shapes.storage import load_dataset, load_series, save_dataset, save_series

__all__ = [
    "SeriesKind",
    "ShapeKind",
    "ShapeSpec",
    "estimate_background",
    "image_msd",
    "validate_image",
    "render",
    "LabeledImages",
    "VariationSeries",
    "make_contrast_series",
    "make_rotation_series",
    "make_training_set",
    "make_transition_series",
    "train_test_split",
    "load_dataset",
    "load_series",
    "save_dataset",
    "save_series",
]
