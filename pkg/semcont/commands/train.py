"""`semcont train`: train the micro-CNN on a saved labeled dataset."""

import argparse
import logging
from pathlib import Path

from semcont.nn import evaluate_accuracy, init_model, save_model, train
from semcont.schemas.training import OptimizerKind, TrainConfig
from semcont.shapes import load_dataset, train_test_split
from semcont.utils.files import atomic_write_text

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("train", help="Train the shape classifier")
    parser.add_argument("--data", required=True, help="Dataset directory written by `gen --kind train`")
    parser.add_argument("--out", required=True, help="Model file to write")
    parser.add_argument("--test-data", default=None, help="Separate held-out dataset directory")
    parser.add_argument("--n-test", type=int, default=0, help="Hold out this many images from --data")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--lr", type=float, default=1e-3)
    parser.add_argument("--optimizer", choices=[o.value for o in OptimizerKind], default="adam")
    parser.add_argument("--seed", type=int, default=0, help="Weight init and shuffling seed")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        optimizer=OptimizerKind(args.optimizer),
        seed=args.seed,
    )
    data = load_dataset(args.data)
    test = load_dataset(args.test_data) if args.test_data else None
    if test is None and args.n_test > 0:
        data, test = train_test_split(data, args.n_test)

    size = tuple(data.images.shape[1:])
    result = train(init_model(args.seed, size, data.class_names), data.images, data.labels, cfg)
    log = result.log
    if test is not None:
        log = log.model_copy(update={"test_accuracy": evaluate_accuracy(result.model, test.images, test.labels)})
        logger.info("held-out accuracy %.4f on %d images", log.test_accuracy, len(test))

    out = Path(args.out)
    save_model(result.model, out)
    atomic_write_text(out.with_suffix(".log.json"), log.model_dump_json(indent=2) + "\n")
    return 0
