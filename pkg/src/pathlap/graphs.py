"""Random graph models and directed orientation.

Three undirected backbone models are supported: Erdős–Rényi G(n, p),
Watts–Strogatz small-world rings, and Barabási–Albert preferential
attachment. Backbones are turned into directed graphs by giving every edge a
uniformly random direction and adding the reverse arc with a fixed
probability.

Generators are written against :class:`numpy.random.Generator` directly so
that a (spec, seed) pair reproduces the same graph on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .seeding import rng_from

__all__ = [
    "GraphModel",
    "GraphModelSpec",
    "UndirectedGraph",
    "DirectedGraph",
    "default_params",
    "sample_undirected",
    "orient",
    "is_connected",
    "write_edge_list",
    "read_edge_list",
]


class GraphModel(str, Enum):
    ER = "ER"
    WS = "WS"
    BA = "BA"


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph: no self-loops, no multi-edges.

    ``edges`` is kept sorted in canonical (u < v) order so that everything
    derived from it (orientation draws, serialization) is deterministic.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ParameterError(f"self-loop ({u},{u}) not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge ({u},{v}) out of range for n={self.n}")
            if u > v:
                raise ParameterError(f"edge ({u},{v}) not in canonical u<v order")
            if (u, v) in seen:
                raise ParameterError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def to_directed(self) -> "DirectedGraph":
        """Fully bidirectional digraph (every edge becomes two arcs)."""
        arcs = []
        for u, v in self.edges:
            arcs.append((u, v))
            arcs.append((v, u))
        return DirectedGraph(self.n, tuple(sorted(arcs)))


@dataclass(frozen=True)
class DirectedGraph:
    """Simple directed graph with cached degree views."""

    n: int
    arcs: tuple[tuple[int, int], ...]
    out_degree: np.ndarray = field(init=False, repr=False, compare=False)
    in_degree: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        out = np.zeros(self.n, dtype=np.int64)
        inn = np.zeros(self.n, dtype=np.int64)
        seen = set()
        for u, v in self.arcs:
            if u == v:
                raise ParameterError(f"self-arc ({u},{u}) not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"arc ({u},{v}) out of range for n={self.n}")
            if (u, v) in seen:
                raise ParameterError(f"duplicate arc ({u},{v})")
            seen.add((u, v))
            out[u] += 1
            inn[v] += 1
        object.__setattr__(self, "out_degree", out)
        object.__setattr__(self, "in_degree", inn)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.arcs:
            a[u, v] = 1.0
        return a

    def out_neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return adj

    def undirected_neighbors(self) -> list[list[int]]:
        """Neighbor lists of the underlying undirected topology."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].add(v)
            adj[v].add(u)
        return [sorted(s) for s in adj]

    def is_weight_balanced(self) -> bool:
        return bool(np.array_equal(self.out_degree, self.in_degree))


@dataclass(frozen=True)
class GraphModelSpec:
    """One sampling configuration: model, size, parameters, seed."""

    model: GraphModel
    n: int
    params: dict
    seed: int

    def validate(self) -> None:
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        m = GraphModel(self.model)
        if m is GraphModel.ER:
            p = self.params.get("p")
            if p is None or not (0.0 < p <= 1.0):
                raise ParameterError(f"ER requires 0 < p <= 1, got p={p}")
        elif m is GraphModel.WS:
            k_ring = self.params.get("k_ring")
            beta = self.params.get("beta")
            if k_ring is None or k_ring % 2 != 0:
                raise ParameterError(f"WS requires even k_ring, got k_ring={k_ring}")
            if not (0 < k_ring < self.n):
                raise ParameterError(
                    f"WS requires 0 < k_ring < n, got k_ring={k_ring}, n={self.n}"
                )
            if beta is None or not (0.0 <= beta <= 1.0):
                raise ParameterError(f"WS requires 0 <= beta <= 1, got beta={beta}")
        elif m is GraphModel.BA:
            mm = self.params.get("m")
            if mm is None or not (1 <= mm < self.n):
                raise ParameterError(f"BA requires 1 <= m < n, got m={mm}, n={self.n}")


def default_params(model: GraphModel | str, n: int) -> dict:
    """Conventional parameters giving connected-or-nearly-connected backbones.

    ER uses the connectivity-threshold regime p = 2 ln(n) / n; WS uses a
    degree-4 ring with 10% rewiring; BA attaches 3 edges per node.
    """
    m = GraphModel(model)
    if m is GraphModel.ER:
        return {"p": min(1.0, 2.0 * np.log(max(n, 2)) / n)}
    if m is GraphModel.WS:
        return {"k_ring": 4, "beta": 0.1}
    return {"m": 3}


# ---------------------------------------------------------------------------
# Undirected samplers
# ---------------------------------------------------------------------------


def _sample_er(n: int, p: float, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return tuple(zip(iu[keep].tolist(), ju[keep].tolist()))


def _sample_ws(
    n: int, k_ring: int, beta: float, rng: np.random.Generator
) -> tuple[tuple[int, int], ...]:
    # Ring lattice: each node linked to k_ring/2 clockwise neighbors, then the
    # classic rewiring sweep (per lattice offset, per node) with probability beta.
    edges = set()
    for j in range(1, k_ring // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            edges.add((min(u, v), max(u, v)))
    for j in range(1, k_ring // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            key = (min(u, v), max(u, v))
            if key not in edges:
                continue
            if rng.random() < beta:
                for _ in range(64):
                    w = int(rng.integers(0, n))
                    if w == u:
                        continue
                    cand = (min(u, w), max(u, w))
                    if cand in edges:
                        continue
                    edges.remove(key)
                    edges.add(cand)
                    break
    return tuple(sorted(edges))


def _sample_ba(n: int, m: int, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    # Preferential attachment via the repeated-nodes trick: every edge endpoint
    # is appended to a pool, so drawing uniformly from the pool is
    # degree-proportional. The first new node attaches to all m seed nodes,
    # which keeps the result connected.
    edges: list[tuple[int, int]] = []
    pool: list[int] = []
    for new in range(m, n):
        if new == m:
            targets = list(range(m))
        else:
            targets_set: set[int] = set()
            while len(targets_set) < m:
                targets_set.add(pool[int(rng.integers(0, len(pool)))])
            targets = sorted(targets_set)
        for t in targets:
            edges.append((min(new, t), max(new, t)))
            pool.append(new)
            pool.append(t)
    return tuple(sorted(edges))


def sample_undirected(spec: GraphModelSpec) -> UndirectedGraph:
    """Sample one undirected backbone; deterministic given ``spec.seed``.

    BA results are connected by construction; ER and WS samples may be
    disconnected and are left to the caller's resampling policy.
    """
    spec.validate()
    rng = rng_from(spec.seed)
    model = GraphModel(spec.model)
    if model is GraphModel.ER:
        edges = _sample_er(spec.n, float(spec.params["p"]), rng)
    elif model is GraphModel.WS:
        edges = _sample_ws(spec.n, int(spec.params["k_ring"]), float(spec.params["beta"]), rng)
    else:
        edges = _sample_ba(spec.n, int(spec.params["m"]), rng)
    return UndirectedGraph(spec.n, edges)


def orient(g: UndirectedGraph, p_b: float, seed: int) -> DirectedGraph:
    """Orient each edge uniformly at random; add the reverse arc with probability ``p_b``."""
    if not (0.0 <= p_b <= 1.0):
        raise ParameterError(f"p_b must be in [0, 1], got {p_b}")
    rng = rng_from(seed)
    ne = g.edge_count
    flip = rng.random(ne) < 0.5
    back = rng.random(ne) < p_b
    arcs: list[tuple[int, int]] = []
    for idx, (u, v) in enumerate(g.edges):
        a, b = (v, u) if flip[idx] else (u, v)
        arcs.append((a, b))
        if back[idx]:
            arcs.append((b, a))
    return DirectedGraph(g.n, tuple(sorted(arcs)))


def is_connected(g: UndirectedGraph) -> bool:
    if g.n <= 1:
        return True
    adj = g.neighbors()
    seen = np.zeros(g.n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


# ---------------------------------------------------------------------------
# Edge-list text format: "n <count> directed|undirected", then one pair per line
# ---------------------------------------------------------------------------


def write_edge_list(g: UndirectedGraph | DirectedGraph, path: str | Path) -> None:
    path = Path(path)
    if isinstance(g, DirectedGraph):
        lines = [f"n {g.n} directed"] + [f"{u} {v}" for u, v in g.arcs]
    else:
        lines = [f"n {g.n} undirected"] + [f"{u} {v}" for u, v in g.edges]
    path.write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> UndirectedGraph | DirectedGraph:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ParameterError(f"{path}: empty edge-list file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "n" or head[2] not in ("directed", "undirected"):
        raise ParameterError(f"{path}: bad header {lines[0]!r}")
    n = int(head[1])
    pairs = tuple(
        (int(a), int(b)) for a, b in (ln.split() for ln in lines[1:] if ln.strip())
    )
    if head[2] == "directed":
        return DirectedGraph(n, tuple(sorted(pairs)))
    return UndirectedGraph(n, tuple(sorted(pairs)))
