"""Connectivity and spectral diagnostics for the k-path family.

The central fact checked here: the zero eigenvalue of an undirected k-path
Laplacian has multiplicity equal to the number of connected components of
the graph whose edges are the distance-k pairs. Rank is computed by Gaussian
elimination with a relative pivot tolerance, which is cheaper than an
eigensolve and is exactly what the multiplicity claim needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import KPathDecomposition

__all__ = [
    "SpectralReport",
    "k_path_components",
    "component_count",
    "zero_multiplicity",
    "fiedler_value",
    "spectral_report",
]

RANK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpectralReport:
    """Per-k connectivity summary; Fiedler value only for undirected input."""

    k: int
    zero_multiplicity: int
    component_count: int
    fiedler_value: float | None


def k_path_components(dec: KPathDecomposition, k: int) -> np.ndarray:
    """Component labels of the graph whose edges are the symmetrized distance-k pairs."""
    adj = dec.adjacency(k)
    sym = (adj + adj.T) > 0
    n = dec.n
    labels = np.full(n, -1, dtype=np.int64)
    current = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = current
        stack = [start]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(sym[u]):
                if labels[v] < 0:
                    labels[v] = current
                    stack.append(int(v))
        current += 1
    return labels


def component_count(dec: KPathDecomposition, k: int) -> int:
    return int(k_path_components(dec, k).max()) + 1


def zero_multiplicity(laplacian: np.ndarray) -> int:
    """n - rank of an undirected k-path Laplacian.

    Rank via elimination with partial pivoting; a pivot below
    ``RANK_TOLERANCE * max |entry|`` counts as zero. An all-zero matrix (no
    distance-k pairs at all) has multiplicity n.
    """
    a = np.array(laplacian, dtype=float)
    n = a.shape[0]
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return n
    tol = RANK_TOLERANCE * scale
    rank = 0
    row = 0
    for col in range(n):
        pivot = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[pivot, col]) <= tol:
            continue
        if pivot != row:
            a[[row, pivot]] = a[[pivot, row]]
        a[row + 1 :] -= np.outer(a[row + 1 :, col] / a[row, col], a[row])
        rank += 1
        row += 1
        if row == n:
            break
    return n - rank


def fiedler_value(laplacian: np.ndarray) -> float:
    """Second-smallest eigenvalue of a symmetric Laplacian.

    Positive exactly when the graph behind the Laplacian is connected.
    """
    eigenvalues = np.linalg.eigvalsh(laplacian)
    return float(eigenvalues[1])


def spectral_report(dec: KPathDecomposition) -> list[SpectralReport]:
    """One :class:`SpectralReport` per k; Fiedler values require symmetric input."""
    reports = []
    for k in range(1, dec.k_max + 1):
        lap = dec.laplacian(k)
        symmetric = bool(np.array_equal(lap, lap.T))
        reports.append(
            SpectralReport(
                k=k,
                zero_multiplicity=zero_multiplicity(lap),
                component_count=component_count(dec, k),
                fiedler_value=fiedler_value(lap) if symmetric else None,
            )
        )
    return reports
