"""Shortest-path distances and the k-path Laplacian family.

For a graph with (underlying undirected) diameter d, every node pair at
shortest-path distance exactly k (1 <= k <= d) contributes a unit entry to
the k-path adjacency matrix. Row sums of that matrix are the k-path degrees,
and ``diag(degrees) - adjacency`` is the k-path Laplacian, which generalizes
the ordinary graph Laplacian (the k=1 case) to longer-range relations.

The exponentially weighted combination ``sum_k exp(-alpha*k) * L_k`` backs
the multi-hop consensus update ``I - epsilon * L_total``.

Hop relations are defined through BFS shortest-path distances, not matrix
powers: walk counts would produce weighted multi-edges, while the Laplacian
family needs 0/1 membership at exactly one k per reachable pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConnectivityError, ParameterError, StepSizeError
from .graphs import DirectedGraph

__all__ = [
    "UNREACHABLE",
    "DistanceMode",
    "DistanceMatrix",
    "KPathDecomposition",
    "MultiHopOperator",
    "all_pairs_distances",
    "diameter",
    "directed_laplacian",
    "k_path_decomposition",
    "multi_hop_operator",
    "export_csv",
]

#: Sentinel for unreachable pairs in distance matrices.
UNREACHABLE = np.inf


class DistanceMode(str, Enum):
    DIRECTED = "directed"
    UNDERLYING_UNDIRECTED = "underlying_undirected"


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop counts; unreachable pairs hold :data:`UNREACHABLE`."""

    n: int
    dist: np.ndarray
    mode: DistanceMode

    def reachable(self) -> np.ndarray:
        return np.isfinite(self.dist)

    def max_finite(self) -> int:
        finite = self.dist[np.isfinite(self.dist)]
        return int(finite.max()) if finite.size else 0


def all_pairs_distances(g: DirectedGraph, mode: DistanceMode | str) -> DistanceMatrix:
    """BFS-exact hop distances from every node.

    ``underlying_undirected`` treats every arc as symmetric before measuring.
    All BFS frontiers advance together through one boolean matrix product per
    level, which the dense n <= ~1000 regime favors over per-source queues.
    """
    mode = DistanceMode(mode)
    n = g.n
    adjacency = g.adjacency_matrix()
    if mode is DistanceMode.UNDERLYING_UNDIRECTED:
        adjacency = np.maximum(adjacency, adjacency.T)
    dist = np.full((n, n), UNREACHABLE)
    np.fill_diagonal(dist, 0.0)
    reached = np.eye(n, dtype=bool)
    frontier = np.eye(n)
    level = 0
    while True:
        level += 1
        fresh = (frontier @ adjacency) > 0.0
        fresh &= ~reached
        if not fresh.any():
            break
        dist[fresh] = float(level)
        reached |= fresh
        frontier = fresh.astype(float)
    return DistanceMatrix(n, dist, mode)


def diameter(g: DirectedGraph) -> int:
    """Diameter of the underlying undirected topology.

    Raises :class:`ConnectivityError` when the underlying graph is
    disconnected, where the diameter is undefined; callers decide whether to
    resample.
    """
    dm = all_pairs_distances(g, DistanceMode.UNDERLYING_UNDIRECTED)
    if not dm.reachable().all():
        raise ConnectivityError(
            f"underlying undirected graph is disconnected (n={g.n}, arcs={g.arc_count})"
        )
    return dm.max_finite()


def directed_laplacian(g: DirectedGraph) -> np.ndarray:
    """One-hop directed Laplacian: out-degree diagonal minus adjacency."""
    lap = -g.adjacency_matrix()
    lap[np.diag_indices(g.n)] = g.out_degree.astype(float)
    return lap


@dataclass(frozen=True)
class KPathDecomposition:
    """Per-k adjacency/degree/Laplacian family, k = 1 .. k_max.

    ``k_max`` is always the *undirected* diameter, also in directed mode; a
    pair whose directed distance exceeds it is simply absent from the family.
    k-path degrees are row sums, i.e. out-reach counts in directed mode.
    """

    n: int
    k_max: int
    mode: DistanceMode
    distances: DistanceMatrix
    _adjacency: tuple[np.ndarray, ...]
    _degrees: tuple[np.ndarray, ...]
    _laplacians: tuple[np.ndarray, ...]

    def _check_k(self, k: int) -> None:
        if not (1 <= k <= self.k_max):
            raise ParameterError(f"k={k} out of range [1, {self.k_max}]")

    def adjacency(self, k: int) -> np.ndarray:
        """0/1 matrix of pairs at shortest-path distance exactly k."""
        self._check_k(k)
        return self._adjacency[k - 1]

    def degrees(self, k: int) -> np.ndarray:
        """Number of nodes at distance exactly k from each node."""
        self._check_k(k)
        return self._degrees[k - 1]

    def laplacian(self, k: int) -> np.ndarray:
        self._check_k(k)
        return self._laplacians[k - 1]

    def weighted_laplacian(self, alpha: float) -> np.ndarray:
        """``sum_k exp(-alpha*k) * L_k`` over the whole family."""
        total = np.zeros((self.n, self.n))
        for k in range(1, self.k_max + 1):
            total += math.exp(-alpha * k) * self._laplacians[k - 1]
        return total

    def weighted_degrees(self, alpha: float) -> np.ndarray:
        """``sum_k exp(-alpha*k) * degrees_k`` per node (diagonal of the weighted Laplacian)."""
        total = np.zeros(self.n)
        for k in range(1, self.k_max + 1):
            total += math.exp(-alpha * k) * self._degrees[k - 1]
        return total


def k_path_decomposition(
    g: DirectedGraph, dist_mode: DistanceMode | str = DistanceMode.UNDERLYING_UNDIRECTED
) -> KPathDecomposition:
    """Build the full k-path family for ``g`` under the given distance mode."""
    dist_mode = DistanceMode(dist_mode)
    k_max = diameter(g)
    if k_max < 1:
        raise ConnectivityError(f"graph with diameter {k_max} has no path structure")
    dm = (
        all_pairs_distances(g, dist_mode)
        if dist_mode is not DistanceMode.UNDERLYING_UNDIRECTED
        else None
    )
    if dm is None:
        dm = all_pairs_distances(g, DistanceMode.UNDERLYING_UNDIRECTED)
    adjacency = []
    degrees = []
    laplacians = []
    for k in range(1, k_max + 1):
        pk = (dm.dist == float(k)).astype(float)
        dk = pk.sum(axis=1)
        lk = -pk
        lk[np.diag_indices(g.n)] = dk
        adjacency.append(pk)
        degrees.append(dk)
        laplacians.append(lk)
    return KPathDecomposition(
        n=g.n,
        k_max=k_max,
        mode=dist_mode,
        distances=dm,
        _adjacency=tuple(adjacency),
        _degrees=tuple(degrees),
        _laplacians=tuple(laplacians),
    )


@dataclass(frozen=True)
class MultiHopOperator:
    """Exponentially weighted multi-hop averaging operator.

    ``update = I - epsilon * sum_k exp(-alpha*k) * L_k``; rows sum to one by
    construction, and the step size must keep every diagonal entry
    nonnegative.
    """

    alpha: float
    epsilon: float
    combined_laplacian: np.ndarray
    update: np.ndarray


def multi_hop_operator(
    dec: KPathDecomposition, alpha: float, epsilon: float
) -> MultiHopOperator:
    """Assemble the multi-hop update for an explicit step size.

    Raises :class:`StepSizeError` carrying the largest admissible step when
    ``epsilon`` would push a diagonal entry negative.
    """
    if alpha < 0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    weighted_deg = dec.weighted_degrees(alpha)
    max_deg = float(weighted_deg.max())
    if max_deg > 0 and epsilon * max_deg > 1.0:
        raise StepSizeError(
            f"epsilon={epsilon:g} gives negative diagonal entries; "
            f"max admissible epsilon is {1.0 / max_deg:g}",
            max_epsilon=1.0 / max_deg,
        )
    total = dec.weighted_laplacian(alpha)
    update = np.eye(dec.n) - epsilon * total
    return MultiHopOperator(
        alpha=alpha, epsilon=epsilon, combined_laplacian=total, update=update
    )


def export_csv(dec: KPathDecomposition, directory: str | Path) -> list[Path]:
    """Write ``P_k.csv`` / ``L_k.csv`` matrices (row-major, no header) for inspection."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for k in range(1, dec.k_max + 1):
        for name, mat in (("P", dec.adjacency(k)), ("L", dec.laplacian(k))):
            path = directory / f"{name}_{k}.csv"
            lines = [",".join(repr(float(x)) for x in row) for row in mat]
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
    return written
