"""`semcont report`: rebuild tables and plots from saved evaluations, or list the run ledger."""

import argparse
import logging
from collections import defaultdict
from pathlib import Path

from semcont import __version__
from semcont.commands.common import parse_mode, print_json
from semcont.continuity import check_explainer_continuity, load_evaluation
from semcont.database import LEDGER_FILENAME
from semcont.errors import ConfigError, DataError
from semcont.ledger import list_runs
from semcont.report import ContinuityReport, Provenance, emit_relational_plot, emit_table, rank_explainers
from semcont.report.plots import PlotAxis
from semcont.schemas.continuity import EvaluationMode

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Emit correlation tables and plots")
    parser.add_argument("evaluations", nargs="*", help="Evaluation JSON files or directories of them")
    parser.add_argument("--out", default=None, help="Output directory")
    parser.add_argument("--mode", default="variation", help="variation or confidence")
    parser.add_argument("--ledger", default=None, metavar="URL_OR_DIR",
                        help="List runs recorded in a ledger (database URL or artifact directory) and exit")
    parser.set_defaults(handler=handle)


def _expand(paths: list[str]) -> list[Path]:
    """Files as given; directories contribute their *.json, preferring windowed variants."""
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if not path.is_dir():
            files.append(path)
            continue
        for candidate in sorted(path.glob("*.json")):
            if candidate.name.endswith(".window.json"):
                continue
            windowed = candidate.with_suffix(".window.json")
            files.append(windowed if windowed.exists() else candidate)
    return files


def _ledger_url(value: str) -> str:
    path = Path(value)
    if path.is_dir():
        return f"sqlite:///{(path / LEDGER_FILENAME).resolve()}"
    return value


def handle(args: argparse.Namespace) -> int:
    if args.ledger:
        print_json(list_runs(_ledger_url(args.ledger)))
        return 0
    if not args.evaluations or not args.out:
        raise ConfigError("report needs evaluation files and --out", key_path="evaluations")
    mode = parse_mode(args.mode)
    files = _expand(args.evaluations)
    if not files:
        raise DataError("no evaluation files found")

    evaluations = [load_evaluation(path) for path in files]
    verdicts = [check_explainer_continuity(e, mode) for e in evaluations]
    report = ContinuityReport(runs=verdicts, provenance=Provenance(tool_version=__version__))
    out = Path(args.out)
    emit_table(report, out / "tables")

    by_series = defaultdict(list)
    for evaluation in evaluations:
        by_series[evaluation.series_id].append(evaluation)
    axis = PlotAxis.THETA if mode is EvaluationMode.VARIATION_INDEXED else PlotAxis.CONFIDENCE_CHANGE
    for series_id, group in by_series.items():
        emit_relational_plot(group, out / "plots" / f"{series_id}__{mode.value}.svg", axis)

    for name, score in rank_explainers(report):
        logger.info("%-12s %.3f", name, score)
    return 0
