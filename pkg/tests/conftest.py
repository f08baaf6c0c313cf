"""Shared fixtures and small independent oracles used across test modules."""

from __future__ import annotations

import numpy as np
import pytest

from pathlap.graphs import (
    DirectedGraph,
    GraphModel,
    GraphModelSpec,
    UndirectedGraph,
    default_params,
    is_connected,
    orient,
    sample_undirected,
)
from pathlap.seeding import derive_seed, split_seed

ALL_MODELS = (GraphModel.ER, GraphModel.WS, GraphModel.BA)


def make_undirected(n: int, edges) -> UndirectedGraph:
    return UndirectedGraph(n, tuple(sorted(tuple(sorted(e)) for e in edges)))


def make_directed(n: int, arcs) -> DirectedGraph:
    return DirectedGraph(n, tuple(sorted(arcs)))


def path_digraph() -> DirectedGraph:
    """a -> b -> c."""
    return make_directed(3, [(0, 1), (1, 2)])


def random_connected_undirected(model: GraphModel, n: int, seed: int) -> UndirectedGraph:
    """Resample until connected; deterministic in seed."""
    for attempt in range(64):
        g = sample_undirected(
            GraphModelSpec(model, n, default_params(model, n), derive_seed(seed, attempt))
        )
        if is_connected(g):
            return g
    raise AssertionError(f"no connected {model} sample at n={n}, seed={seed}")


def random_digraph(model: GraphModel, n: int, seed: int, p_b: float = 0.3) -> DirectedGraph:
    backbone = random_connected_undirected(model, n, seed)
    return orient(backbone, p_b, derive_seed(seed, 999))


def floyd_warshall(g: DirectedGraph, undirected: bool) -> np.ndarray:
    """Independent all-pairs oracle (never BFS)."""
    n = g.n
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v in g.arcs:
        dist[u, v] = 1.0
        if undirected:
            dist[v, u] = 1.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                through = dist[i, k] + dist[k, j]
                if through < dist[i, j]:
                    dist[i, j] = through
    return dist


def left_fixed_vector(matrix: np.ndarray, tol: float = 1e-13, iter_max: int = 5_000_000) -> np.ndarray:
    """Power iteration on the transpose, started uniform.

    The limit is a left fixed vector of the update for eigenvalue one; its
    inner product with the initial state predicts the run's final mean.
    """
    n = matrix.shape[0]
    w = np.full(n, 1.0 / n)
    transposed = matrix.T.copy()
    for _ in range(iter_max):
        w_next = transposed @ w
        if np.abs(w_next - w).max() <= tol:
            return w_next
        w = w_next
    raise AssertionError("left fixed vector power iteration did not converge")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
