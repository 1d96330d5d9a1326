"""`semcont explain`: saliency maps for every frame of a series."""

import argparse
import logging
from pathlib import Path

from semcont.commands.common import add_explainer_args, blackbox, explainer_config
from semcont.continuity import explain_series
from semcont.explain.saliency import save_map
from semcont.nn import load_model
from semcont.report import emit_saliency_strip
from semcont.shapes import load_series

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("explain", help="Explain every frame of a series")
    parser.add_argument("--model", default=None, help="Model file (required unless --blackbox)")
    parser.add_argument("--series", required=True, help="Series directory")
    parser.add_argument("--out", required=True, help="Output directory for maps")
    parser.add_argument("--strip-stride", type=int, default=0, help="Also write strip.svg with every n-th map")
    parser.add_argument("--threads", type=int, default=None)
    add_explainer_args(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    series = load_series(args.series)
    model = load_model(args.model) if args.model else None
    with blackbox(args) as model_fn:
        maps = explain_series(model, series, args.explainer, explainer_config(args), model_fn=model_fn, threads=args.threads)
    out = Path(args.out)
    for i, saliency in enumerate(maps):
        save_map(saliency, out / f"frame_{i:04d}")
    if args.strip_stride > 0:
        emit_saliency_strip(maps, args.strip_stride, out / "strip.svg", thetas=series.thetas)
    logger.info("wrote %d %s maps to %s", len(maps), args.explainer, out)
    return 0
