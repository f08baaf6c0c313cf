"""Build the k-path Laplacian family on a small ring and inspect it.

A 6-ring has diameter 3, so the family has three levels: immediate
neighbors, distance-2 pairs, and the three antipodal distance-3 pairs.
Every level's Laplacian has zero row sums, and the exponentially weighted
combination yields a row-stochastic update matrix.
"""

import numpy as np

from pathlap import DistanceMode, UndirectedGraph, k_path_decomposition, multi_hop_operator
from pathlap.operators import export_csv

ring = UndirectedGraph(6, tuple((i, i + 1) for i in range(5)) + ((0, 5),))
dec = k_path_decomposition(ring.to_directed(), DistanceMode.UNDERLYING_UNDIRECTED)

print(f"ring of 6: diameter (= k_max) is {dec.k_max}\n")
for k in range(1, dec.k_max + 1):
    print(f"level k={k}: degrees {dec.degrees(k).astype(int)}")
    print(dec.adjacency(k).astype(int), "\n")

print("row sums of every Laplacian:",
      [float(np.abs(dec.laplacian(k).sum(axis=1)).max()) for k in range(1, dec.k_max + 1)])

op = multi_hop_operator(dec, alpha=0.5, epsilon=0.05)
print("\nmulti-hop update (alpha=0.5, eps=0.05):")
print(np.round(op.update, 4))
print("row sums:", op.update.sum(axis=1))

paths = export_csv(dec, "/tmp/pathlap_demo_csv")
print(f"\nwrote {len(paths)} CSV matrices to /tmp/pathlap_demo_csv")
