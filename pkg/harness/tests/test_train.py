import json
import math
import subprocess
import sys

import numpy as np
import pytest

from consensus_harness.data import DatasetPair, LoadedDataset, load_pair
from consensus_harness.figures import render_figures
from consensus_harness.train import (
    ModelSpec,
    _EarlyStopper,
    constant_mean_rmse,
    load_results,
    save_results,
    train_and_evaluate,
)


def synthetic_dataset(count=64, steps=10, nodes=8, seed=0, split="train"):
    """Learnable toy data shaped like loader output.

    Rows past the valid prefix repeat the last recorded state (the loader's
    padding convention) and the target is the mean of that last state.
    """
    rng = np.random.default_rng(seed)
    sequences = rng.normal(size=(count, steps, nodes)).astype(np.float32)
    valid = rng.integers(3, steps + 1, size=count)
    for i in range(count):
        sequences[i, valid[i] :] = sequences[i, valid[i] - 1]
    targets = sequences[np.arange(count), valid - 1, :].mean(axis=1).astype(np.float64)
    return LoadedDataset(
        sequences=sequences,
        valid_steps=valid,
        targets=targets,
        model="BA",
        n=nodes,
        case="base",
        split=split,
    )


@pytest.fixture(scope="module")
def toy_pair():
    return DatasetPair(
        train=synthetic_dataset(count=96, seed=1),
        test=synthetic_dataset(count=40, seed=2, split="test"),
    )


class TestEarlyStopper:
    def test_halts_within_patience_of_best(self):
        stopper = _EarlyStopper(patience=3)
        losses = [5.0, 4.0, 3.0, 3.5, 3.4, 3.3, 3.2]
        stopped_at = None
        for epoch, loss in enumerate(losses):
            stopper.update(loss, epoch)
            if stopper.should_stop:
                stopped_at = epoch
                break
        assert stopper.best_epoch == 2
        assert stopped_at == stopper.best_epoch + 3


class TestTrainAndEvaluate:
    def test_memorization_smoke(self):
        # tiny unique set, replicated so the 80/20 split still shows every
        # row to the trainer; train == test must then be memorized
        tiny = synthetic_dataset(count=12, seed=4)
        reps = 8
        tiled = LoadedDataset(
            sequences=np.tile(tiny.sequences, (reps, 1, 1)),
            valid_steps=np.tile(tiny.valid_steps, reps),
            targets=np.tile(tiny.targets, reps),
            model=tiny.model, n=tiny.n, case=tiny.case, split=tiny.split,
        )
        memorize = DatasetPair(train=tiled, test=tiled)
        result = train_and_evaluate(
            ModelSpec(
                family="gradient_boosted_trees",
                grid={"max_depth": [None], "min_samples_leaf": [1], "early_stopping": [False]},
            ),
            memorize,
        )
        assert result.rmse < 0.05

    def test_tree_beats_constant_mean_on_learnable_data(self, toy_pair):
        result = train_and_evaluate(ModelSpec(family="gradient_boosted_trees"), toy_pair)
        assert result.rmse < constant_mean_rmse(toy_pair)

    def test_sequence_model_learns_toy_rule(self, toy_pair):
        spec = ModelSpec(
            family="recurrent", grid={"hidden": [32], "lr": [1e-2]}, max_epochs=60
        )
        result = train_and_evaluate(spec, toy_pair)
        assert result.rmse < constant_mean_rmse(toy_pair)
        assert result.best_params == {"hidden": 32, "lr": 1e-2}

    def test_nonfinite_trial_failed_grid_continues(self, toy_pair):
        # absurd learning rate overflows float32; the sane configuration wins
        spec = ModelSpec(
            family="recurrent", grid={"hidden": [16], "lr": [1e30, 1e-2]}, max_epochs=15
        )
        result = train_and_evaluate(spec, toy_pair)
        assert result.failed_trials >= 1
        assert result.best_params["lr"] == 1e-2
        assert math.isfinite(result.rmse)

    def test_real_dataset_round_trip(self, small_pair_dir):
        pair = load_pair(
            small_pair_dir / "ba_n20_base_train.jsonl",
            small_pair_dir / "ba_n20_base_test.jsonl",
        )
        result = train_and_evaluate(ModelSpec(family="gradient_boosted_trees"), pair)
        assert result.dataset_id == "ba_n20_base_test"
        assert result.model == "BA" and result.n == 20
        assert result.prediction_time_ms >= 0.0


class TestResultsAndFigures:
    def test_save_load_round_trip(self, toy_pair, tmp_path):
        result = train_and_evaluate(ModelSpec(family="gradient_boosted_trees"), toy_pair)
        path = tmp_path / "results.json"
        save_results([result], path)
        rows = load_results(path)
        assert rows[0]["family"] == "gradient_boosted_trees"
        assert rows[0]["rmse"] == result.rmse

    def test_figures_from_sparse_results(self, tmp_path):
        rows = [
            {
                "family": "gradient_boosted_trees",
                "dataset_id": "ba_n25_base_test",
                "model": "BA",
                "n": 25,
                "case": "base",
                "rmse": 1.0,
                "mape": 20.0,
                "prediction_time_ms": 0.05,
                "best_params": {},
                "validation_rmse": 1.1,
            }
        ]
        written = render_figures(rows, tmp_path / "figs")
        assert len(written) == 4
        for path in written:
            assert path.exists() and path.stat().st_size > 0


class TestCli:
    def test_train_then_figures(self, small_pair_dir, tmp_path):
        results = tmp_path / "results.json"
        run = subprocess.run(
            [
                sys.executable, "-m", "consensus_harness.cli", "train",
                "--dataset", str(small_pair_dir / "ba_n20_base_train.jsonl"),
                "--family", "gbt", "--results", str(results),
            ],
            capture_output=True, text=True, timeout=600,
        )
        assert run.returncode == 0, run.stderr
        assert "rmse=" in run.stdout
        assert results.exists()
        figs = subprocess.run(
            [
                sys.executable, "-m", "consensus_harness.cli", "figures",
                "--results", str(results), "--out", str(tmp_path / "figs"),
            ],
            capture_output=True, text=True, timeout=600,
        )
        assert figs.returncode == 0, figs.stderr
        assert len(list((tmp_path / "figs").glob("*.png"))) == 4

    def test_bad_family_exits_two(self, small_pair_dir):
        run = subprocess.run(
            [
                sys.executable, "-m", "consensus_harness.cli", "train",
                "--dataset", str(small_pair_dir / "ba_n20_base_train.jsonl"),
                "--family", "perceptron",
            ],
            capture_output=True, text=True, timeout=600,
        )
        assert run.returncode == 2
        assert "unknown model family" in run.stderr
