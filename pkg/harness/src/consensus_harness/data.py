"""Loaders for the JSONL trajectory datasets.

The producer's record schema (version 1) is the only contract: line one is
the manifest object, each further line one sample with a ``states`` prefix
of up to ``record_steps`` state vectors and a scalar ``final_value`` target.
Short prefixes are padded by repeating the last recorded state, with the
true length kept per sample so models can mask the padding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


class DataError(Exception):
    """Malformed or unsupported dataset file."""


@dataclass(frozen=True)
class LoadedDataset:
    """Sequence layout (samples, steps, nodes) plus targets and pad bookkeeping."""

    sequences: np.ndarray
    valid_steps: np.ndarray
    targets: np.ndarray
    model: str
    n: int
    case: str
    split: str

    @property
    def count(self) -> int:
        return self.sequences.shape[0]

    @property
    def steps(self) -> int:
        return self.sequences.shape[1]

    def dataset_id(self) -> str:
        return f"{self.model.lower()}_n{self.n}_{self.case}_{self.split}"

    def flat_features(self) -> np.ndarray:
        """Flattened layout for tree models: all states plus the true length."""
        flat = self.sequences.reshape(self.count, -1)
        return np.hstack([flat, self.valid_steps[:, None].astype(flat.dtype)])


@dataclass(frozen=True)
class DatasetPair:
    train: LoadedDataset
    test: LoadedDataset

    def cell_id(self) -> str:
        return f"{self.train.model.lower()}_n{self.train.n}_{self.train.case}"


def load_dataset(path: str | Path) -> LoadedDataset:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise DataError(f"{path}: empty dataset file")
    head = json.loads(lines[0])
    manifest = head.get("manifest")
    if manifest is None:
        raise DataError(f"{path}: first line is not a manifest object")
    if manifest.get("schema") != SCHEMA_VERSION:
        raise DataError(
            f"{path}: unsupported schema {manifest.get('schema')!r}, expected {SCHEMA_VERSION}"
        )
    steps = int(manifest["params"]["record_steps"])
    n = int(manifest["n"])
    sequences = []
    valid = []
    targets = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            states = np.asarray(obj["states"], dtype=np.float32)
            if states.ndim != 2 or states.shape[1] != n:
                raise ValueError(f"states shape {states.shape}")
            length = int(obj["valid_steps"])
            if length != states.shape[0] or not (1 <= length <= steps):
                raise ValueError(f"valid_steps {length} vs {states.shape[0]} rows")
            if length < steps:
                states = np.vstack([states, np.repeat(states[-1:], steps - length, axis=0)])
            sequences.append(states)
            valid.append(length)
            targets.append(float(obj["final_value"]))
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}:{lineno}: bad record: {exc}") from exc
    if not sequences:
        raise DataError(f"{path}: no sample records")
    return LoadedDataset(
        sequences=np.stack(sequences),
        valid_steps=np.asarray(valid, dtype=np.int64),
        targets=np.asarray(targets, dtype=np.float64),
        model=manifest["model"],
        n=n,
        case=manifest["case"],
        split=manifest["split"],
    )


def load_pair(train_path: str | Path, test_path: str | Path) -> DatasetPair:
    return DatasetPair(train=load_dataset(train_path), test=load_dataset(test_path))


def subsample(data: LoadedDataset, count: int, seed: int = 0) -> LoadedDataset:
    """Deterministic subset used by the desk-scale runs."""
    if count >= data.count:
        return data
    idx = np.sort(np.random.default_rng(seed).permutation(data.count)[:count])
    return LoadedDataset(
        sequences=data.sequences[idx],
        valid_steps=data.valid_steps[idx],
        targets=data.targets[idx],
        model=data.model,
        n=data.n,
        case=data.case,
        split=data.split,
    )
