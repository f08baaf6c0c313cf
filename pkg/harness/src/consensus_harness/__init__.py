"""Training harness for consensus-trajectory regression benchmarks."""

from .data import DataError, DatasetPair, LoadedDataset, load_dataset, load_pair, subsample
from .models import FAMILIES, canonical_family
from .train import (
    BenchmarkResult,
    ModelSpec,
    constant_mean_rmse,
    load_results,
    save_results,
    train_and_evaluate,
)

__version__ = "0.1.0"
