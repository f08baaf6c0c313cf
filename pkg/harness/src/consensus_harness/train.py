"""Grid training with validation-based early stopping.

Every family trains against a mean-squared-error objective on an 80/20
train/validation split of the training file; the best-validation
configuration is then scored once on the held-out test file. Trials that
produce non-finite losses are marked failed and the grid continues.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import time
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np
import torch

from .data import DatasetPair, LoadedDataset
from .models import build_sequence_model, build_tree_model, canonical_family, predict_numpy

logger = logging.getLogger(__name__)

DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "gradient_boosted_trees": {"max_depth": [3, 6], "learning_rate": [0.1], "max_iter": [300]},
    "recurrent": {"hidden": [32, 64], "layers": [1], "lr": [1e-2]},
    "extended_recurrent": {"hidden": [32, 64], "lr": [1e-2]},
    "attention": {"d_model": [32], "heads": [2, 4], "layers": [1], "lr": [1e-3]},
    "convolutional_recurrent": {"channels": [8, 16], "kernel": [3], "lr": [1e-2]},
}


@dataclass(frozen=True)
class ModelSpec:
    """One family plus its hyperparameter grid and early-stop policy."""

    family: str
    grid: dict[str, list] = field(default_factory=dict)
    patience: int = 30
    validation_fraction: float = 0.2
    max_epochs: int = 200
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        if not self.grid:
            object.__setattr__(self, "grid", copy.deepcopy(DEFAULT_GRIDS[self.family]))
        if self.patience < 1:
            raise ValueError(f"patience must be >= 1, got {self.patience}")
        if not (0.0 < self.validation_fraction < 1.0):
            raise ValueError(
                f"validation fraction must be in (0, 1), got {self.validation_fraction}"
            )

    def configurations(self) -> list[dict]:
        keys = sorted(self.grid)
        return [dict(zip(keys, values)) for values in product(*(self.grid[k] for k in keys))]


@dataclass(frozen=True)
class BenchmarkResult:
    family: str
    dataset_id: str
    model: str
    n: int
    case: str
    rmse: float
    mape: float
    prediction_time_ms: float
    best_params: dict
    validation_rmse: float
    failed_trials: int = 0

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "dataset_id": self.dataset_id,
            "model": self.model,
            "n": self.n,
            "case": self.case,
            "rmse": self.rmse,
            "mape": self.mape,
            "prediction_time_ms": self.prediction_time_ms,
            "best_params": self.best_params,
            "validation_rmse": self.validation_rmse,
            "failed_trials": self.failed_trials,
        }


def _rmse(predictions: np.ndarray, targets: np.ndarray) -> float:
    return float(np.sqrt(np.mean((predictions - targets) ** 2)))


def _mape(predictions: np.ndarray, targets: np.ndarray) -> float:
    keep = targets != 0.0
    if not keep.any():
        return math.nan
    return float(
        100.0 * np.mean(np.abs(predictions[keep] - targets[keep]) / np.abs(targets[keep]))
    )


def _split_train_val(data: LoadedDataset, fraction: float, seed: int):
    count = data.count
    order = np.random.default_rng(seed).permutation(count)
    val_size = max(1, int(round(count * fraction)))
    return order[val_size:], order[:val_size]


def tree_features(data: LoadedDataset) -> np.ndarray:
    """Flattened states plus per-step permutation-invariant summaries.

    Node indices are arbitrary across samples, so splits on raw columns are
    mostly noise; the per-step mean/std/min/max/zero-count columns carry the
    signal trees can actually use.
    """
    frames = data.sequences
    stats = []
    for t in range(data.steps):
        frame = frames[:, t, :]
        stats.extend(
            [frame.mean(1), frame.std(1), frame.min(1), frame.max(1), (frame == 0.0).sum(1)]
        )
    return np.hstack([data.flat_features(), np.column_stack(stats)])


class _EarlyStopper:
    """Stop after ``patience`` consecutive epochs without improvement."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best = math.inf
        self.best_epoch = -1
        self.stale = 0

    def update(self, value: float, epoch: int) -> bool:
        if value < self.best:
            self.best = value
            self.best_epoch = epoch
            self.stale = 0
            return True
        self.stale += 1
        return False

    @property
    def should_stop(self) -> bool:
        return self.stale >= self.patience


class _Scaler:
    """Global affine standardization fit on training data only."""

    def __init__(self, values: np.ndarray):
        self.mean = float(values.mean())
        self.scale = float(values.std()) or 1.0

    def forward(self, values: np.ndarray) -> np.ndarray:
        return (values - self.mean) / self.scale

    def invert(self, values: np.ndarray) -> np.ndarray:
        return values * self.scale + self.mean


def _train_sequence_trial(
    spec: ModelSpec, pair: DatasetPair, params: dict
) -> tuple[float, torch.nn.Module, "_Scaler", "_Scaler"] | None:
    torch.manual_seed(spec.seed)
    data = pair.train
    train_idx, val_idx = _split_train_val(data, spec.validation_fraction, spec.seed)
    # raw states live on the out-degree scale; standardizing inputs and
    # targets keeps optimization in a sane range for every cell
    x_scaler = _Scaler(data.sequences[train_idx])
    y_scaler = _Scaler(data.targets[train_idx])
    x = torch.from_numpy(x_scaler.forward(data.sequences).astype(np.float32))
    lengths = torch.from_numpy(data.valid_steps)
    y = torch.from_numpy(y_scaler.forward(data.targets).astype(np.float32))
    model = build_sequence_model(spec.family, data.n, data.steps, params)
    optimizer = torch.optim.Adam(model.parameters(), lr=params.get("lr", 1e-2))
    loss_fn = torch.nn.MSELoss()
    stopper = _EarlyStopper(spec.patience)
    best_state = None
    generator = torch.Generator().manual_seed(spec.seed)
    for epoch in range(spec.max_epochs):
        model.train()
        for batch in torch.randperm(len(train_idx), generator=generator).split(spec.batch_size):
            rows = torch.from_numpy(train_idx[batch.numpy()])
            optimizer.zero_grad()
            loss = loss_fn(model(x[rows], lengths[rows]), y[rows])
            if not torch.isfinite(loss):
                logger.warning("%s trial %s: non-finite loss, abandoning", spec.family, params)
                return None
            loss.backward()
            optimizer.step()
        model.eval()
        with torch.no_grad():
            rows = torch.from_numpy(val_idx)
            val_loss = float(loss_fn(model(x[rows], lengths[rows]), y[rows]))
        if not math.isfinite(val_loss):
            logger.warning("%s trial %s: non-finite validation loss", spec.family, params)
            return None
        if stopper.update(val_loss, epoch):
            best_state = copy.deepcopy(model.state_dict())
        if stopper.should_stop:
            break
    if best_state is None:
        return None
    model.load_state_dict(best_state)
    return math.sqrt(stopper.best) * y_scaler.scale, model, x_scaler, y_scaler


def _train_tree_trial(spec: ModelSpec, pair: DatasetPair, params: dict):
    features = tree_features(pair.train)
    targets = pair.train.targets
    # mirror the sequence families: train on 80%, rank trials on the held-out
    # 20%; boosting-round early stopping runs inside the estimator
    train_idx, val_idx = _split_train_val(pair.train, spec.validation_fraction, spec.seed)
    model = build_tree_model(params, seed=spec.seed)
    model.fit(features[train_idx], targets[train_idx])
    val_rmse = _rmse(model.predict(features[val_idx]), targets[val_idx])
    if not math.isfinite(val_rmse):
        return None
    return val_rmse, model


def _timed_predictions(predict, count: int) -> tuple[np.ndarray, float]:
    predict()  # warm-up excluded from the measurement
    start = time.perf_counter()
    predictions = predict()
    elapsed = time.perf_counter() - start
    return predictions, 1000.0 * elapsed / count


def train_and_evaluate(spec: ModelSpec, pair: DatasetPair) -> BenchmarkResult:
    """Grid-search one family on a dataset pair and score the winner."""
    best = None
    failed = 0
    for params in spec.configurations():
        if spec.family == "gradient_boosted_trees":
            outcome = _train_tree_trial(spec, pair, params)
        else:
            outcome = _train_sequence_trial(spec, pair, params)
        if outcome is None:
            failed += 1
            continue
        if best is None or outcome[0] < best[0]:
            best = (*outcome, params)
    if best is None:
        raise RuntimeError(f"every {spec.family} trial failed on {pair.cell_id()}")
    test = pair.test
    if spec.family == "gradient_boosted_trees":
        val_rmse, model, params = best
        features = tree_features(test)
        predictions, ms = _timed_predictions(lambda: model.predict(features), test.count)
    else:
        val_rmse, model, x_scaler, y_scaler, params = best

        def predict():
            scaled = x_scaler.forward(test.sequences).astype(np.float32)
            return y_scaler.invert(predict_numpy(model, scaled, test.valid_steps))

        predictions, ms = _timed_predictions(predict, test.count)
    return BenchmarkResult(
        family=spec.family,
        dataset_id=test.dataset_id(),
        model=test.model,
        n=test.n,
        case=test.case,
        rmse=_rmse(predictions, test.targets),
        mape=_mape(predictions, test.targets),
        prediction_time_ms=ms,
        best_params=params,
        validation_rmse=val_rmse,
        failed_trials=failed,
    )


def constant_mean_rmse(pair: DatasetPair) -> float:
    """Reference: always predict the training-set mean target."""
    prediction = float(pair.train.targets.mean())
    return _rmse(np.full(pair.test.count, prediction), pair.test.targets)


def save_results(results: list[BenchmarkResult], path: str | Path) -> None:
    payload = {"results": [r.to_json_obj() for r in results]}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_results(path: str | Path) -> list[dict]:
    payload = json.loads(Path(path).read_text())
    return payload["results"]
