"""Argument helpers shared by the CLI verbs."""

import argparse
import json
import sys
from contextlib import contextmanager

from semcont.errors import ConfigError
from semcont.explain import SubprocessClassifier
from semcont.schemas.continuity import EvaluationMode
from semcont.schemas.explainer import ExplainerConfig, ExplainerKind


def add_explainer_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--explainer", required=True, choices=[k.value for k in ExplainerKind])
    parser.add_argument("--seed", type=int, default=None, help="Seed for stochastic explainers")
    parser.add_argument(
        "--blackbox",
        metavar="CMD",
        default=None,
        help="External classifier command (line-delimited JSON on stdin/stdout); rise/lime/kernelshap only",
    )


def explainer_config(args: argparse.Namespace) -> ExplainerConfig:
    cfg = ExplainerConfig()
    return cfg if args.seed is None else cfg.with_seed(args.seed)


@contextmanager
def blackbox(args: argparse.Namespace):
    """Yield a SubprocessClassifier when --blackbox is given, else None."""
    if not args.blackbox:
        yield None
        return
    if args.explainer == ExplainerKind.GRADCAM.value:
        raise ConfigError("gradcam needs the model weights, not a black-box classifier", key_path="--blackbox")
    with SubprocessClassifier(args.blackbox) as classifier:
        yield classifier


def parse_window(value: str | None) -> tuple[int, int] | None:
    """'A:B' -> (A, B), inclusive frame indices."""
    if value is None:
        return None
    try:
        start, stop = value.split(":")
        return int(start), int(stop)
    except ValueError as exc:
        raise ConfigError(f"window must look like A:B, got {value!r}", key_path="--window") from exc


def parse_mode(value: str) -> EvaluationMode:
    try:
        return EvaluationMode.parse(value)
    except ValueError as exc:
        raise ConfigError(str(exc), key_path="--mode") from exc


def print_json(data) -> None:
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
