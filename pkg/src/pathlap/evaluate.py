"""Error metrics and baseline predictors.

The baselines give the datasets an ML-free calibration point: predicting the
mean of the last recorded state is near-perfect whenever the run converged
inside the recorded prefix, and predicting the mean of the initial state is
exact on weight-balanced graphs where the state sum is conserved.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, TrajectorySample
from .errors import ParameterError

__all__ = [
    "Strategy",
    "EvalReport",
    "rmse",
    "mape",
    "baseline_predict",
    "evaluate_dataset",
]

logger = logging.getLogger(__name__)


class Strategy:
    LAST_STATE_MEAN = "last_state_mean"
    INITIAL_MEAN = "initial_mean"
    ALL = (LAST_STATE_MEAN, INITIAL_MEAN)


@dataclass(frozen=True)
class EvalReport:
    rmse: float
    mape: float
    prediction_time_ms: float
    model_name: str
    dataset_id: str
    excluded_targets: int = 0


def _as_pair(predictions, targets) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(targets, dtype=float)
    if p.shape != t.shape or p.ndim != 1:
        raise ParameterError(f"shape mismatch: predictions {p.shape} vs targets {t.shape}")
    if p.size == 0:
        raise ParameterError("empty input")
    return p, t


def rmse(predictions, targets) -> float:
    """Root mean squared error."""
    p, t = _as_pair(predictions, targets)
    return float(np.sqrt(np.mean((p - t) ** 2)))


def mape(predictions, targets) -> float:
    """Mean absolute percentage error, 100 * mean(|p - t| / |t|).

    Zero targets would divide by zero, so they are excluded with a logged
    count; see :func:`mape_with_exclusions` for the count itself.
    """
    value, excluded = mape_with_exclusions(predictions, targets)
    if excluded:
        logger.warning("mape: excluded %d zero targets", excluded)
    return value


def mape_with_exclusions(predictions, targets) -> tuple[float, int]:
    p, t = _as_pair(predictions, targets)
    keep = t != 0.0
    excluded = int(np.count_nonzero(~keep))
    if not keep.any():
        raise ParameterError("all targets are zero; MAPE undefined")
    return float(100.0 * np.mean(np.abs(p[keep] - t[keep]) / np.abs(t[keep]))), excluded


def baseline_predict(sample: TrajectorySample, strategy: str) -> float:
    """Predict the final value from the recorded prefix alone."""
    if sample.valid_steps < 1:
        raise ParameterError("sample has no recorded states")
    if strategy == Strategy.LAST_STATE_MEAN:
        return float(sample.states[sample.valid_steps - 1].mean())
    if strategy == Strategy.INITIAL_MEAN:
        return float(sample.states[0].mean())
    raise ParameterError(f"unknown strategy {strategy!r}")


def evaluate_dataset(dataset: Dataset, strategy: str) -> EvalReport:
    """Score one baseline on a dataset; latency is a warmed-up wall-clock mean."""
    samples = dataset.samples
    if not samples:
        raise ParameterError("dataset has no samples")
    targets = np.array([s.final_value for s in samples])
    for sample in samples[: min(len(samples), 16)]:
        baseline_predict(sample, strategy)
    start = time.perf_counter()
    predictions = np.array([baseline_predict(s, strategy) for s in samples])
    elapsed = time.perf_counter() - start
    mape_value, excluded = mape_with_exclusions(predictions, targets)
    return EvalReport(
        rmse=rmse(predictions, targets),
        mape=mape_value,
        prediction_time_ms=1000.0 * elapsed / len(samples),
        model_name=strategy,
        dataset_id=dataset.manifest.dataset_id(),
        excluded_targets=excluded,
    )
