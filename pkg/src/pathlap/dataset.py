"""End-to-end sample generation and JSONL dataset serialization.

One sample = one fresh backbone graph, oriented, iterated to convergence,
keeping the first recorded states and the final mean value as the
supervised target. Train and test splits draw from disjoint seed streams;
disconnected backbones and non-convergent runs are resampled with a bounded
per-sample attempt budget so generation stays deterministic and
schedule-independent under any worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .consensus import (
    CaseType,
    ConsensusConfig,
    build_update,
    initial_state,
    run_consensus,
)
from .errors import GenerationError, SchemaError
from .graphs import GraphModel, GraphModelSpec, default_params, is_connected, orient, sample_undirected
from .operators import DistanceMode, k_path_decomposition
from .seeding import TEST_STREAM, TRAIN_STREAM, sample_seed, split_seed

__all__ = [
    "SCHEMA_VERSION",
    "DEFAULT_P_B",
    "TrajectorySample",
    "DatasetManifest",
    "Dataset",
    "GenerationSpec",
    "generate_sample",
    "generate_dataset",
    "write_dataset",
    "read_dataset",
    "export_flat_csv",
    "replay_sample",
]

SCHEMA_VERSION = 1
DEFAULT_P_B = 0.3
RESAMPLE_BUDGET_FACTOR = 10


@dataclass(frozen=True)
class TrajectorySample:
    """One serialized supervised sample."""

    graph_model: str
    n: int
    case_type: str
    sample_seed: int
    states: np.ndarray
    final_value: float
    iterations: int
    epsilon: float

    @property
    def valid_steps(self) -> int:
        return self.states.shape[0]


@dataclass(frozen=True)
class DatasetManifest:
    """Config echo plus record counts; serialized as the first file line."""

    model: str
    n: int
    case_type: str
    params: dict
    master_seed: int
    split: str
    train_count: int
    test_count: int
    resamples: int
    schema: int = SCHEMA_VERSION

    def dataset_id(self) -> str:
        return f"{self.model.lower()}_n{self.n}_{self.case_type}_{self.split}"

    def to_json_obj(self) -> dict:
        return {
            "schema": self.schema,
            "model": self.model,
            "n": self.n,
            "case": self.case_type,
            "params": self.params,
            "master_seed": self.master_seed,
            "split": self.split,
            "train_count": self.train_count,
            "test_count": self.test_count,
            "resamples": self.resamples,
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "DatasetManifest":
        if obj.get("schema") != SCHEMA_VERSION:
            raise SchemaError(
                f"unsupported schema version {obj.get('schema')!r}; expected {SCHEMA_VERSION}"
            )
        return DatasetManifest(
            model=obj["model"],
            n=int(obj["n"]),
            case_type=obj["case"],
            params=dict(obj["params"]),
            master_seed=int(obj["master_seed"]),
            split=obj["split"],
            train_count=int(obj["train_count"]),
            test_count=int(obj["test_count"]),
            resamples=int(obj["resamples"]),
        )


@dataclass(frozen=True)
class Dataset:
    manifest: DatasetManifest
    samples: tuple[TrajectorySample, ...]


@dataclass(frozen=True)
class GenerationSpec:
    """Everything needed to regenerate any sample of a dataset."""

    model: GraphModel
    n: int
    case_type: str
    graph_params: dict
    p_b: float = DEFAULT_P_B
    consensus: ConsensusConfig = ConsensusConfig()

    def with_case(self) -> ConsensusConfig:
        cfg = self.consensus
        if cfg.case_type != self.case_type:
            cfg = ConsensusConfig(
                case_type=self.case_type,
                c=cfg.c,
                alpha=cfg.alpha,
                tau=cfg.tau,
                iter_max=cfg.iter_max,
                record_steps=cfg.record_steps,
            )
        return cfg

    def params_echo(self) -> dict:
        cfg = self.consensus
        echo = {key: float(val) for key, val in sorted(self.graph_params.items())}
        echo.update(
            {
                "p_b": float(self.p_b),
                "c": float(cfg.c),
                "alpha": float(cfg.alpha),
                "tau": float(cfg.tau),
                "iter_max": int(cfg.iter_max),
                "record_steps": int(cfg.record_steps),
            }
        )
        return echo

    @staticmethod
    def from_manifest(manifest: DatasetManifest) -> "GenerationSpec":
        params = dict(manifest.params)
        cfg = ConsensusConfig(
            case_type=manifest.case_type,
            c=params.pop("c"),
            alpha=params.pop("alpha"),
            tau=params.pop("tau"),
            iter_max=int(params.pop("iter_max")),
            record_steps=int(params.pop("record_steps")),
        )
        p_b = params.pop("p_b")
        if "k_ring" in params:
            params["k_ring"] = int(params["k_ring"])
        if "m" in params:
            params["m"] = int(params["m"])
        return GenerationSpec(
            model=GraphModel(manifest.model),
            n=manifest.n,
            case_type=manifest.case_type,
            graph_params=params,
            p_b=p_b,
            consensus=cfg,
        )


def generate_sample(spec: GenerationSpec, seed: int) -> TrajectorySample | None:
    """Run the full pipeline for one seed.

    Returns None when the backbone is disconnected or the run fails to
    converge; the caller resamples with the next attempt seed.
    """
    graph_seed, orient_seed = split_seed(seed, 2)
    backbone = sample_undirected(
        GraphModelSpec(model=spec.model, n=spec.n, params=spec.graph_params, seed=graph_seed)
    )
    if not is_connected(backbone):
        return None
    g = orient(backbone, spec.p_b, orient_seed)
    cfg = spec.with_case()
    dec = None
    if cfg.case_type == CaseType.EXPONENTIAL:
        dec = k_path_decomposition(g, DistanceMode.DIRECTED)
    op = build_update(g, dec, cfg)
    run = run_consensus(op, initial_state(g), cfg)
    if not run.converged:
        return None
    return TrajectorySample(
        graph_model=spec.model.value,
        n=spec.n,
        case_type=cfg.case_type,
        sample_seed=seed,
        states=run.states,
        final_value=run.final_value,
        iterations=run.iterations,
        epsilon=run.epsilon_used,
    )


def _generate_indexed(args: tuple) -> tuple[int, TrajectorySample | None, int]:
    spec, master_seed, stream, index, budget = args
    for attempt in range(budget):
        seed = sample_seed(master_seed, stream, index, attempt)
        sample = generate_sample(spec, seed)
        if sample is not None:
            return index, sample, attempt
    return index, None, budget


def _generate_split(
    spec: GenerationSpec,
    master_seed: int,
    stream: int,
    count: int,
    workers: int,
    budget: int,
) -> tuple[list[TrajectorySample], int]:
    tasks = [(spec, master_seed, stream, i, budget) for i in range(count)]
    if workers <= 1:
        results = [_generate_indexed(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_generate_indexed, tasks, chunksize=8))
    results.sort(key=lambda r: r[0])
    samples: list[TrajectorySample] = []
    resamples = 0
    for index, sample, attempts in results:
        resamples += attempts
        if sample is None:
            raise GenerationError(
                f"exhausted {budget} attempts for sample {index} "
                f"({spec.model.value}, n={spec.n}, case={spec.case_type})"
            )
        samples.append(sample)
    return samples, resamples


def generate_dataset(
    model: GraphModel | str,
    n: int,
    case_type: str,
    train_count: int = 2400,
    test_count: int = 600,
    master_seed: int = 0,
    *,
    graph_params: dict | None = None,
    p_b: float = DEFAULT_P_B,
    consensus: ConsensusConfig | None = None,
    workers: int = 1,
    resample_budget_factor: int = RESAMPLE_BUDGET_FACTOR,
) -> tuple[Dataset, Dataset]:
    """Generate one (train, test) dataset pair, deterministic in ``master_seed``.

    Per-sample seeds hash (master_seed, stream, index, attempt), so output is
    identical for any worker count, and train/test seed sets are disjoint by
    construction. Each sample may be retried ``resample_budget_factor`` times
    before generation fails, which bounds total attempts at
    ``resample_budget_factor * requested count``.
    """
    if train_count < 1 or test_count < 1:
        raise GenerationError(
            f"counts must be >= 1, got train={train_count}, test={test_count}"
        )
    model = GraphModel(model)
    spec = GenerationSpec(
        model=model,
        n=n,
        case_type=case_type,
        graph_params=dict(graph_params) if graph_params is not None else default_params(model, n),
        p_b=p_b,
        consensus=consensus if consensus is not None else ConsensusConfig(case_type=case_type),
    )
    datasets = []
    for split, stream, count in (
        ("train", TRAIN_STREAM, train_count),
        ("test", TEST_STREAM, test_count),
    ):
        samples, resamples = _generate_split(
            spec, master_seed, stream, count, workers, resample_budget_factor
        )
        manifest = DatasetManifest(
            model=model.value,
            n=n,
            case_type=case_type,
            params=spec.params_echo(),
            master_seed=master_seed,
            split=split,
            train_count=train_count,
            test_count=test_count,
            resamples=resamples,
        )
        datasets.append(Dataset(manifest=manifest, samples=tuple(samples)))
    return datasets[0], datasets[1]


# ---------------------------------------------------------------------------
# JSONL serialization
# ---------------------------------------------------------------------------


def _record_obj(sample: TrajectorySample) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "model": sample.graph_model,
        "n": sample.n,
        "case": sample.case_type,
        "seed": sample.sample_seed,
        "valid_steps": sample.valid_steps,
        "states": [[float(x) for x in row] for row in sample.states],
        "final_value": sample.final_value,
        "iterations": sample.iterations,
        "epsilon": sample.epsilon,
    }


def _record_from_obj(obj: dict) -> TrajectorySample:
    if obj.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported record schema {obj.get('schema')!r}")
    states = np.array(obj["states"], dtype=float)
    if states.ndim != 2 or states.shape[0] != int(obj["valid_steps"]):
        raise SchemaError(
            f"states shape {states.shape} inconsistent with valid_steps={obj['valid_steps']}"
        )
    return TrajectorySample(
        graph_model=obj["model"],
        n=int(obj["n"]),
        case_type=obj["case"],
        sample_seed=int(obj["seed"]),
        states=states,
        final_value=float(obj["final_value"]),
        iterations=int(obj["iterations"]),
        epsilon=float(obj["epsilon"]),
    )


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write manifest line plus one JSON record per sample."""
    path = Path(path)
    lines = [json.dumps({"manifest": dataset.manifest.to_json_obj()}, separators=(",", ":"))]
    for sample in dataset.samples:
        lines.append(json.dumps(_record_obj(sample), separators=(",", ":")))
    path.write_text("\n".join(lines) + "\n")


def read_dataset(path: str | Path) -> Dataset:
    """Parse a JSONL dataset file, validating schema and record counts."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty dataset file")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:1: malformed manifest line: {exc}") from exc
    if "manifest" not in head:
        raise SchemaError(f"{path}:1: first line must hold the manifest object")
    manifest = DatasetManifest.from_json_obj(head["manifest"])
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            samples.append(_record_from_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, SchemaError, ValueError) as exc:
            raise SchemaError(f"{path}:{lineno}: malformed record: {exc}") from exc
    expected = manifest.train_count if manifest.split == "train" else manifest.test_count
    if len(samples) != expected:
        raise SchemaError(
            f"{path}: manifest promises {expected} {manifest.split} records, found {len(samples)}"
        )
    return Dataset(manifest=manifest, samples=tuple(samples))


def export_flat_csv(dataset: Dataset, path: str | Path) -> None:
    """Flatten samples for tree-model baselines.

    Columns: f_<t>_<i> for every recorded step and node, then valid_steps and
    target. Rows shorter than the record length are padded by repeating the
    final recorded state.
    """
    path = Path(path)
    rows = int(dataset.manifest.params["record_steps"])
    n = dataset.manifest.n
    header = [f"f_{t}_{i}" for t in range(rows) for i in range(n)]
    header += ["valid_steps", "target"]
    lines = [",".join(header)]
    for sample in dataset.samples:
        padded = np.vstack(
            [sample.states]
            + [sample.states[-1:]] * (rows - sample.valid_steps)
        )
        cells = [repr(float(x)) for x in padded.reshape(-1)]
        cells.append(str(sample.valid_steps))
        cells.append(repr(float(sample.final_value)))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def replay_sample(sample: TrajectorySample, manifest: DatasetManifest) -> TrajectorySample:
    """Regenerate a serialized sample from its stored seed and manifest echo."""
    spec = GenerationSpec.from_manifest(manifest)
    fresh = generate_sample(spec, sample.sample_seed)
    if fresh is None:
        raise GenerationError(
            f"replay of seed {sample.sample_seed} did not reproduce a valid sample"
        )
    return fresh
