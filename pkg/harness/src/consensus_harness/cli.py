"""Harness command line: train one family on a dataset pair, render figures.

``harness train`` expects the training JSONL path; the matching test file is
found by replacing the ``_train`` suffix unless given explicitly. Results
accumulate into a JSON document that ``harness figures`` turns into charts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import load_pair, subsample
from .models import FAMILIES
from .train import ModelSpec, load_results, save_results, train_and_evaluate


def _test_path(train_path: Path) -> Path:
    if "_train" not in train_path.name:
        raise ValueError(f"cannot infer test file from {train_path.name}; pass --test-dataset")
    return train_path.with_name(train_path.name.replace("_train", "_test"))


def _cmd_train(args: argparse.Namespace) -> int:
    train_path = Path(args.dataset)
    test_path = Path(args.test_dataset) if args.test_dataset else _test_path(train_path)
    pair = load_pair(train_path, test_path)
    if args.subsample_train:
        pair = type(pair)(
            train=subsample(pair.train, args.subsample_train, seed=args.seed),
            test=subsample(pair.test, args.subsample_test or pair.test.count, seed=args.seed),
        )
    spec = ModelSpec(
        family=args.family,
        patience=args.patience,
        max_epochs=args.max_epochs,
        seed=args.seed,
    )
    result = train_and_evaluate(spec, pair)
    print(
        f"{result.family}\t{result.dataset_id}\trmse={result.rmse:.6g}\t"
        f"mape={result.mape:.6g}\ttime_ms={result.prediction_time_ms:.4f}\t"
        f"params={json.dumps(result.best_params)}"
    )
    results_path = Path(args.results)
    existing = load_results(results_path) if results_path.exists() else []
    existing = [
        row
        for row in existing
        if not (row["family"] == result.family and row["dataset_id"] == result.dataset_id)
    ]
    existing.append(result.to_json_obj())
    results_path.write_text(json.dumps({"results": existing}, indent=2) + "\n")
    return 0


def _cmd_figures(args: argparse.Namespace) -> int:
    from .figures import render_figures

    results = load_results(args.results)
    written = render_figures(results, args.out)
    for path in written:
        print(f"wrote\t{path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="harness")
    subs = parser.add_subparsers(dest="command", required=True)

    train = subs.add_parser("train", help="train one family on a dataset pair")
    train.add_argument("--dataset", required=True, help="training JSONL path")
    train.add_argument("--test-dataset", help="test JSONL path (default: _train -> _test)")
    train.add_argument(
        "--family",
        required=True,
        help=f"one of {', '.join(FAMILIES)} (aliases: rnn, xlstm, transformer, convlstm, gbt)",
    )
    train.add_argument("--results", default="results.json", help="results JSON to update")
    train.add_argument("--patience", type=int, default=30)
    train.add_argument("--max-epochs", type=int, default=200)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--subsample-train", type=int, help="desk-scale training subset size")
    train.add_argument("--subsample-test", type=int, help="desk-scale test subset size")

    figures = subs.add_parser("figures", help="render charts from a results document")
    figures.add_argument("--results", required=True)
    figures.add_argument("--out", default="figures")

    args = parser.parse_args(argv)
    try:
        return {"train": _cmd_train, "figures": _cmd_figures}[args.command](args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"harness: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
