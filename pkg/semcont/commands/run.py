"""`semcont run`: a full experiment from a TOML config."""

import argparse

from semcont.commands.common import print_json
from semcont.experiment import run_experiment


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="Run a full experiment")
    parser.add_argument("config", help="Experiment TOML file")
    parser.add_argument("--out", required=True, help="Artifact directory")
    parser.add_argument("--threads", type=int, default=None, help="Cap on parallel cells")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    manifest = run_experiment(args.config, args.out, threads=args.threads)
    print_json({"out": args.out, "complete": manifest.complete, "tables": manifest.tables})
    return 0
