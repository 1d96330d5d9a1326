"""`semcont eval`: evaluate one explainer on one series and print its verdict."""

import argparse
import logging
from pathlib import Path

from semcont.commands.common import add_explainer_args, blackbox, explainer_config, parse_mode, parse_window, print_json
from semcont.continuity import apply_window, check_explainer_continuity, evaluate_series, save_evaluation
from semcont.errors import ConfigError
from semcont.explain.saliency import load_map
from semcont.nn import load_model
from semcont.shapes import load_series

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="Evaluate explainer continuity on a series")
    parser.add_argument("--model", default=None, help="Model file (required unless --blackbox)")
    parser.add_argument("--series", required=True, help="Series directory")
    parser.add_argument("--mode", default="variation", help="variation or confidence")
    parser.add_argument("--window", default=None, help="Inclusive frame range A:B (A must be 0)")
    parser.add_argument("--saliency", default=None, help="Reuse maps written by `semcont explain`")
    parser.add_argument("--out", required=True, help="Evaluation JSON to write")
    parser.add_argument("--threads", type=int, default=None)
    add_explainer_args(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    mode = parse_mode(args.mode)
    window = parse_window(args.window)
    series = load_series(args.series)
    model = load_model(args.model) if args.model else None
    if model is None and not args.blackbox:
        raise ConfigError("either --model or --blackbox is required", key_path="--model")
    maps = None
    if args.saliency:
        maps = [load_map(Path(args.saliency) / f"frame_{i:04d}") for i in range(len(series))]
    with blackbox(args) as model_fn:
        evaluation = evaluate_series(
            model, series, args.explainer, explainer_config(args), model_fn=model_fn, maps=maps, threads=args.threads
        )
    if window is not None:
        evaluation = apply_window(evaluation, window)
    save_evaluation(evaluation, args.out)
    verdict = check_explainer_continuity(evaluation, mode)
    print_json(verdict.model_dump(mode="json"))
    return 0
