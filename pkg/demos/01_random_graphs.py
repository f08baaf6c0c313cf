"""Sample the three backbone models and orient them into directed graphs.

Every step is a pure function of an explicit seed, so rerunning this script
prints exactly the same numbers.
"""

import numpy as np

from pathlap import GraphModel, GraphModelSpec, default_params, is_connected, orient, sample_undirected, write_edge_list

SEED = 7
N = 30

for model in (GraphModel.ER, GraphModel.WS, GraphModel.BA):
    params = default_params(model, N)
    g = sample_undirected(GraphModelSpec(model, N, params, SEED))
    deg = g.degrees()
    print(f"{model.value}: params={params}")
    print(f"  {g.edge_count} edges, connected={is_connected(g)}, "
          f"degree min/median/max = {deg.min()}/{np.median(deg):.0f}/{deg.max()}")

    d = orient(g, p_b=0.3, seed=SEED + 1)
    reverse = d.arc_count - g.edge_count
    print(f"  oriented: {d.arc_count} arcs ({reverse} reverse), "
          f"weight-balanced={d.is_weight_balanced()}")

# p_b=1 keeps every edge bidirectional: out-degree == in-degree everywhere
ba = sample_undirected(GraphModelSpec(GraphModel.BA, N, default_params(GraphModel.BA, N), SEED))
balanced = orient(ba, p_b=1.0, seed=SEED)
print(f"\np_b=1.0 orientation is weight-balanced: {balanced.is_weight_balanced()}")

write_edge_list(balanced, "/tmp/pathlap_demo_graph.txt")
print("edge list written to /tmp/pathlap_demo_graph.txt")
