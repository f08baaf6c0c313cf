"""Chart rendering for benchmark results.

Four standard views: RMSE bars per topology/case, MAPE bars per topology
across sizes, MAPE box plots per family across sizes, and prediction-time
lines versus network size. Combinations missing from the results render as
gaps, never as errors.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .models import FAMILIES

TOPOLOGIES = ("BA", "ER", "WS")
CASES = ("base", "exponential")


def _collect(results: list[dict], key: str) -> dict:
    table = {}
    for row in results:
        table[(row["family"], row["model"], int(row["n"]), row["case"])] = row[key]
    return table


def _sizes(results: list[dict]) -> list[int]:
    return sorted({int(row["n"]) for row in results})


def render_figures(results: list[dict], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = _sizes(results)
    rmse = _collect(results, "rmse")
    mape = _collect(results, "mape")
    times = _collect(results, "prediction_time_ms")
    written = []

    # 1. RMSE grouped bars: topology rows x case columns, grouped by family
    fig, axes = plt.subplots(
        len(TOPOLOGIES), len(CASES), figsize=(11, 9), sharex=True, squeeze=False
    )
    width = 0.8 / len(FAMILIES)
    xs = np.arange(len(sizes))
    for row, topo in enumerate(TOPOLOGIES):
        for col, case in enumerate(CASES):
            ax = axes[row][col]
            for fam_idx, family in enumerate(FAMILIES):
                heights = [rmse.get((family, topo, n, case), np.nan) for n in sizes]
                ax.bar(xs + fam_idx * width, heights, width, label=family)
            ax.set_title(f"{topo} / {case}")
            ax.set_xticks(xs + 0.4, [str(n) for n in sizes])
            if row == len(TOPOLOGIES) - 1:
                ax.set_xlabel("nodes")
            if col == 0:
                ax.set_ylabel("RMSE")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    path = out_dir / "rmse_by_model.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    # 2. MAPE bars per topology across sizes (median over families and cases)
    fig, ax = plt.subplots(figsize=(8, 5))
    width = 0.8 / len(TOPOLOGIES)
    for t_idx, topo in enumerate(TOPOLOGIES):
        heights = []
        for n in sizes:
            values = [
                mape[key]
                for key in mape
                if key[1] == topo and key[2] == n and np.isfinite(mape[key])
            ]
            heights.append(float(np.median(values)) if values else np.nan)
        ax.bar(xs + t_idx * width, heights, width, label=topo)
    ax.set_xticks(xs + 0.4, [str(n) for n in sizes])
    ax.set_xlabel("nodes")
    ax.set_ylabel("MAPE (%)")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "mape_by_topology.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    # 3. MAPE box plots per family across sizes
    fig, ax = plt.subplots(figsize=(10, 5))
    positions = []
    boxes = []
    labels = []
    slot = 0
    for n in sizes:
        for family in FAMILIES:
            values = [
                mape[key]
                for key in mape
                if key[0] == family and key[2] == n and np.isfinite(mape[key])
            ]
            if values:
                boxes.append(values)
                positions.append(slot)
                labels.append(f"{family[:8]}\nn={n}")
            slot += 1
        slot += 1
    if boxes:
        ax.boxplot(boxes, positions=positions)
        ax.set_xticks(positions, labels, fontsize=6, rotation=45)
        ax.set_yscale("log")
    ax.set_ylabel("MAPE (%)")
    fig.tight_layout()
    path = out_dir / "mape_box_by_model.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    # 4. prediction time vs size, one line per family (mean over cells)
    fig, ax = plt.subplots(figsize=(8, 5))
    for family in FAMILIES:
        ys = []
        for n in sizes:
            values = [times[key] for key in times if key[0] == family and key[2] == n]
            ys.append(float(np.mean(values)) if values else np.nan)
        ax.plot(sizes, ys, marker="o", label=family)
    ax.set_xlabel("nodes")
    ax.set_ylabel("prediction time (ms/sample)")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "prediction_time.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    return written
