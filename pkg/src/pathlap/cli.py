"""Command-line entry point.

Subcommands: ``generate`` (dataset files), ``simulate`` (single runs and
repeat summaries), ``spectral`` (per-k connectivity table), ``evaluate``
(baseline metrics). Settings resolve as built-in defaults, then config file
entries, then CLI flags; ``PATHLAP_SEED`` is the master-seed fallback when
neither flag nor config supplies one. Exit codes: 0 success, 2 configuration
error, 3 generation error.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
from pathlib import Path

from .consensus import CaseType, ConsensusConfig, build_update, initial_state, run_consensus
from .dataset import DEFAULT_P_B
from . import dataset as dataset_mod
from .errors import GenerationError, ParameterError, PathlapError
from .graphs import GraphModel, GraphModelSpec, default_params, is_connected, orient, sample_undirected
from .operators import DistanceMode, k_path_decomposition
from .seeding import derive_seed, split_seed
from .spectral import spectral_report

PAPER_SIZES = (25, 50, 100, 200, 300)
PAPER_MODELS = (GraphModel.BA, GraphModel.ER, GraphModel.WS)

_INT_KEYS = {"n", "train", "test", "seed", "workers", "iter_max", "record_steps", "k_ring", "m", "repeat"}
_FLOAT_KEYS = {"p_b", "alpha", "c", "tau", "p", "beta"}
_STR_KEYS = {"model", "case", "out", "grid", "strategy"}


class ConfigError(PathlapError):
    pass


def _parse_config_file(path: str) -> dict:
    values: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key in _INT_KEYS:
            values[key] = int(val)
        elif key in _FLOAT_KEYS:
            values[key] = float(val)
        elif key in _STR_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
    return values


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    merged = dict(defaults)
    if getattr(args, "config", None):
        merged.update(_parse_config_file(args.config))
    for key in defaults:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if merged.get("seed") is None:
        env = os.environ.get("PATHLAP_SEED")
        merged["seed"] = int(env) if env else 0
    return merged


def _graph_params(model: GraphModel, n: int, merged: dict) -> dict:
    params = default_params(model, n)
    overrides = {"ER": ("p",), "WS": ("k_ring", "beta"), "BA": ("m",)}[model.value]
    for key in overrides:
        if merged.get(key) is not None:
            params[key] = merged[key]
    return params


def _consensus_config(case: str, merged: dict) -> ConsensusConfig:
    return ConsensusConfig(
        case_type=case,
        c=merged["c"],
        alpha=merged["alpha"],
        tau=merged["tau"],
        iter_max=merged["iter_max"],
        record_steps=merged["record_steps"],
    )


_COMMON_DEFAULTS = {
    "model": "BA",
    "n": 25,
    "case": CaseType.BASE,
    "seed": None,
    "p_b": DEFAULT_P_B,
    "alpha": 0.5,
    "c": 100.0,
    "tau": 1e-6,
    "iter_max": 1_000_000,
    "record_steps": 10,
    "p": None,
    "k_ring": None,
    "beta": None,
    "m": None,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value config file; flags override it")
    sub.add_argument("--model", choices=[m.value for m in GraphModel], type=str.upper)
    sub.add_argument("--n", type=int)
    sub.add_argument("--case", choices=list(CaseType.ALL))
    sub.add_argument("--seed", type=int, help="master seed (fallback: PATHLAP_SEED, then 0)")
    sub.add_argument("--p-b", dest="p_b", type=float, help="reverse-arc probability")
    sub.add_argument("--alpha", type=float, help="multi-hop decay rate")
    sub.add_argument("--c", type=float, help="step-size divisor")
    sub.add_argument("--tau", type=float, help="convergence tolerance")
    sub.add_argument("--iter-max", dest="iter_max", type=int)
    sub.add_argument("--record-steps", dest="record_steps", type=int)
    sub.add_argument("--p", type=float, help="ER edge probability")
    sub.add_argument("--k-ring", dest="k_ring", type=int, help="WS ring neighbors")
    sub.add_argument("--beta", type=float, help="WS rewire probability")
    sub.add_argument("--m", type=int, help="BA attachment count")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathlap")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="emit JSONL dataset files")
    _add_common(gen)
    gen.add_argument("--train", type=int, help="training samples per dataset")
    gen.add_argument("--test", type=int, help="test samples per dataset")
    gen.add_argument("--out", help="output directory")
    gen.add_argument("--workers", type=int, help="generation pool size (default: cores)")
    gen.add_argument("--grid", choices=["paper"], help="generate the full model/size/case grid")

    sim = subs.add_parser("simulate", help="run consensus once or summarize repeats")
    _add_common(sim)
    sim.add_argument("--repeat", type=int, help="summarize this many seeded runs per case")
    sim.add_argument("--emit-trajectory", dest="emit_trajectory", help="CSV path for the full state history")

    spec = subs.add_parser("spectral", help="per-k connectivity table for a sampled backbone")
    _add_common(spec)

    ev = subs.add_parser("evaluate", help="baseline metrics for dataset files")
    ev.add_argument("datasets", nargs="+", help="JSONL dataset paths")
    ev.add_argument(
        "--strategy",
        choices=["last_state_mean", "initial_mean", "both"],
        default="both",
    )
    return parser


def _dataset_filename(model: GraphModel, n: int, case: str, split: str) -> str:
    return f"{model.value.lower()}_n{n}_{case}_{split}.jsonl"


def _generate_one(
    model: GraphModel,
    n: int,
    case: str,
    merged: dict,
    out_dir: Path,
    train: int,
    test: int,
    seed: int,
    workers: int,
) -> list[Path]:
    cfg = _consensus_config(case, merged)
    train_ds, test_ds = dataset_mod.generate_dataset(
        model,
        n,
        case,
        train_count=train,
        test_count=test,
        master_seed=seed,
        graph_params=_graph_params(model, n, merged),
        p_b=merged["p_b"],
        consensus=cfg,
        workers=workers,
    )
    written = []
    for split, ds in (("train", train_ds), ("test", test_ds)):
        path = out_dir / _dataset_filename(model, n, case, split)
        dataset_mod.write_dataset(ds, path)
        written.append(path)
    return written


def _cmd_generate(args: argparse.Namespace) -> int:
    defaults = dict(_COMMON_DEFAULTS)
    defaults.update({"train": 2400, "test": 600, "out": "datasets", "workers": None, "grid": None})
    merged = _resolve(args, defaults)
    out_dir = Path(merged["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = merged["workers"] if merged["workers"] else (os.cpu_count() or 1)
    train, test, seed = merged["train"], merged["test"], merged["seed"]
    if merged.get("grid") == "paper":
        jobs = [
            (model, n, case)
            for model in PAPER_MODELS
            for n in PAPER_SIZES
            for case in CaseType.ALL
        ]
    else:
        jobs = [(GraphModel(merged["model"]), merged["n"], merged["case"])]
    for model, n, case in jobs:
        job_seed = (
            derive_seed(seed, list(PAPER_MODELS).index(model), n, CaseType.ALL.index(case))
            if merged.get("grid") == "paper"
            else seed
        )
        paths = _generate_one(model, n, case, merged, out_dir, train, test, job_seed, workers)
        for path in paths:
            print(f"wrote\t{path}")
    return 0


def _sample_directed(model: GraphModel, n: int, merged: dict, seed: int):
    graph_seed, orient_seed = split_seed(seed, 2)
    backbone = sample_undirected(
        GraphModelSpec(model=model, n=n, params=_graph_params(model, n, merged), seed=graph_seed)
    )
    return backbone, orient(backbone, merged["p_b"], orient_seed)


def _run_case(g, case: str, merged: dict, record_full: bool = False):
    cfg = _consensus_config(case, merged)
    dec = None
    if case == CaseType.EXPONENTIAL:
        dec = k_path_decomposition(g, DistanceMode.DIRECTED)
    op = build_update(g, dec, cfg)
    return run_consensus(op, initial_state(g), cfg, record_full=record_full)


def _cmd_simulate(args: argparse.Namespace) -> int:
    defaults = dict(_COMMON_DEFAULTS)
    defaults.update({"repeat": None, "emit_trajectory": None})
    merged = _resolve(args, defaults)
    model = GraphModel(merged["model"])
    n, seed = merged["n"], merged["seed"]
    if merged.get("repeat"):
        repeats = merged["repeat"]
        iteration_counts: dict[str, list[int]] = {c: [] for c in CaseType.ALL}
        converged_counts: dict[str, int] = {c: 0 for c in CaseType.ALL}
        done = 0
        attempt = 0
        while done < repeats:
            _, g = _sample_directed(model, n, merged, derive_seed(seed, done, attempt))
            try:
                runs = {case: _run_case(g, case, merged) for case in CaseType.ALL}
            except PathlapError:
                attempt += 1
                if attempt > 10:
                    raise GenerationError(f"could not sample a usable graph after {attempt} tries")
                continue
            for case, run in runs.items():
                iteration_counts[case].append(run.iterations)
                converged_counts[case] += int(run.converged)
            done += 1
            attempt = 0
        print("case\trepeats\tmedian_iterations\tconverged")
        for case in CaseType.ALL:
            print(
                f"{case}\t{repeats}\t{statistics.median(iteration_counts[case])}\t{converged_counts[case]}"
            )
        return 0
    _, g = _sample_directed(model, n, merged, seed)
    run = _run_case(g, merged["case"], merged, record_full=bool(merged.get("emit_trajectory")))
    print("case\tn\titerations\tconverged\tepsilon\tfinal_value")
    print(
        f"{merged['case']}\t{n}\t{run.iterations}\t{str(run.converged).lower()}"
        f"\t{run.epsilon_used!r}\t{run.final_value!r}"
    )
    if merged.get("emit_trajectory"):
        path = Path(merged["emit_trajectory"])
        header = ",".join(["step"] + [f"node_{i}" for i in range(n)])
        lines = [header]
        for step, state in enumerate(run.full_history):
            lines.append(",".join([str(step)] + [repr(float(x)) for x in state]))
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote\t{path}")
    return 0


def _cmd_spectral(args: argparse.Namespace) -> int:
    merged = _resolve(args, dict(_COMMON_DEFAULTS))
    model = GraphModel(merged["model"])
    n, seed = merged["n"], merged["seed"]
    backbone = None
    for attempt in range(10):
        candidate = sample_undirected(
            GraphModelSpec(
                model=model, n=n, params=_graph_params(model, n, merged), seed=derive_seed(seed, attempt)
            )
        )
        if is_connected(candidate):
            backbone = candidate
            break
    if backbone is None:
        raise GenerationError(f"no connected {model.value} backbone in 10 attempts (n={n})")
    dec = k_path_decomposition(backbone.to_directed(), DistanceMode.UNDERLYING_UNDIRECTED)
    print("k\tcomponents\tzero_multiplicity\tfiedler")
    for report in spectral_report(dec):
        fiedler = "" if report.fiedler_value is None else repr(report.fiedler_value)
        print(f"{report.k}\t{report.component_count}\t{report.zero_multiplicity}\t{fiedler}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    from .evaluate import Strategy, evaluate_dataset

    strategies = list(Strategy.ALL) if args.strategy == "both" else [args.strategy]
    print("model\tn\tcase\tsplit\tstrategy\trmse\tmape\ttime_ms")
    for path in args.datasets:
        ds = dataset_mod.read_dataset(path)
        for strategy in strategies:
            report = evaluate_dataset(ds, strategy)
            print(
                f"{ds.manifest.model}\t{ds.manifest.n}\t{ds.manifest.case_type}"
                f"\t{ds.manifest.split}\t{strategy}"
                f"\t{report.rmse!r}\t{report.mape!r}\t{report.prediction_time_ms:.6f}"
            )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "simulate": _cmd_simulate,
        "spectral": _cmd_spectral,
        "evaluate": _cmd_evaluate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ParameterError, FileNotFoundError) as exc:
        print(f"pathlap: error: {exc}", file=sys.stderr)
        return 2
    except PathlapError as exc:
        print(f"pathlap: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
