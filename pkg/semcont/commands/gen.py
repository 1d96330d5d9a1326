"""`semcont gen`: render a variation series or a labeled training set."""

import argparse
import logging

from semcont.schemas.shapes import ShapeKind, ShapeSpec
from semcont.shapes import (
    make_contrast_series,
    make_rotation_series,
    make_training_set,
    make_transition_series,
    save_dataset,
    save_series,
)

logger = logging.getLogger(__name__)

KINDS = ("rotation", "contrast", "transition", "train")


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="Generate a shape series or training set")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--frames", type=int, default=100, help="Frames per series")
    parser.add_argument("--shape", choices=[ShapeKind.TRIANGLE.value, ShapeKind.CIRCLE.value], default="triangle",
                        help="Shape of a contrast series")
    parser.add_argument("--total-deg", type=float, default=120.0, help="Rotation span in degrees")
    parser.add_argument("--n-per-class", type=int, default=500, help="Training images per class")
    parser.add_argument("--seed", type=int, default=0, help="Training set seed")
    parser.add_argument("--size", type=int, default=64, help="Image side in pixels")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.kind == "train":
        data = make_training_set(args.n_per_class, args.seed, size=args.size)
        save_dataset(data, args.out)
        return 0
    centre = (args.size / 2.0, args.size / 2.0)
    radius = 20.0 * args.size / 64.0
    if args.kind == "rotation":
        base = ShapeSpec(kind=ShapeKind.TRIANGLE, center=centre, circumradius_px=radius)
        series = make_rotation_series(base, args.frames, args.total_deg, size=args.size)
    elif args.kind == "contrast":
        base = ShapeSpec(kind=ShapeKind(args.shape), center=centre, circumradius_px=radius)
        series = make_contrast_series(base, args.frames, size=args.size)
    else:
        base = ShapeSpec(kind=ShapeKind.CIRCLE, center=centre, circumradius_px=radius)
        series = make_transition_series(base, args.frames, size=args.size)
    save_series(series, args.out)
    return 0
