"""Connectivity of each k-path level of a graph.

A graph that is connected through its edges can still fall apart when only
distance-k pairs count as links: a 4-ring splits into two antipodal pairs
at k=2. The number of zero eigenvalues of each level's Laplacian equals the
number of those k-path components, and the second-smallest eigenvalue is
positive exactly when the level is connected.
"""

from pathlap import (
    DistanceMode,
    GraphModel,
    GraphModelSpec,
    UndirectedGraph,
    default_params,
    is_connected,
    k_path_decomposition,
    sample_undirected,
    spectral_report,
)


def show(name, graph):
    dec = k_path_decomposition(graph.to_directed(), DistanceMode.UNDERLYING_UNDIRECTED)
    print(f"{name} (diameter {dec.k_max})")
    print(f"  {'k':>2s} {'components':>10s} {'zero-mult':>9s} {'fiedler':>10s}")
    for row in spectral_report(dec):
        print(f"  {row.k:>2d} {row.component_count:>10d} {row.zero_multiplicity:>9d} "
              f"{row.fiedler_value:>10.4f}")
    print()


show("4-ring", UndirectedGraph(4, ((0, 1), (0, 3), (1, 2), (2, 3))))
show("star with 5 leaves", UndirectedGraph(6, tuple((0, i) for i in range(1, 6))))

for seed in range(50):
    ws = sample_undirected(GraphModelSpec(GraphModel.WS, 24, default_params(GraphModel.WS, 24), seed))
    if is_connected(ws):
        break
show(f"WS n=24 (seed {seed})", ws)
