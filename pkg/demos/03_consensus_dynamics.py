"""Compare one-hop and multi-hop consensus on the same directed network.

The initial state is the out-degree vector. The multi-hop update couples
every node to all of its k-hop neighborhoods with exponentially decaying
weights, which adds shortcuts and typically reaches the tolerance in far
fewer iterations.
"""

import numpy as np

from pathlap import (
    CaseType,
    ConsensusConfig,
    DistanceMode,
    GraphModel,
    GraphModelSpec,
    build_update,
    default_params,
    initial_state,
    k_path_decomposition,
    orient,
    run_consensus,
    sample_undirected,
)

g = orient(
    sample_undirected(GraphModelSpec(GraphModel.WS, 40, default_params(GraphModel.WS, 40), 11)),
    p_b=0.3,
    seed=12,
)
phi0 = initial_state(g)
print(f"WS digraph: n={g.n}, arcs={g.arc_count}, initial mean {phi0.mean():.4f}\n")

runs = {}
for case in CaseType.ALL:
    cfg = ConsensusConfig(case_type=case)
    dec = k_path_decomposition(g, DistanceMode.DIRECTED) if case == CaseType.EXPONENTIAL else None
    op = build_update(g, dec, cfg)
    run = run_consensus(op, phi0, cfg, record_full=True)
    runs[case] = run
    print(f"{case:12s}: eps={run.epsilon_used:.2e}  iterations={run.iterations:6d}  "
          f"final={run.final_value:.6f}  converged={run.converged}")

print("\nspread max(state)-min(state) at checkpoints:")
print(f"{'step':>8s} {'base':>12s} {'exponential':>12s}")
for step in (0, 10, 100, 1000):
    row = [step]
    for case in CaseType.ALL:
        hist = runs[case].full_history
        idx = min(step, len(hist) - 1)
        row.append(hist[idx].max() - hist[idx].min())
    print(f"{row[0]:>8d} {row[1]:>12.2e} {row[2]:>12.2e}")

speedup = runs[CaseType.BASE].iterations / runs[CaseType.EXPONENTIAL].iterations
print(f"\nmulti-hop reached tolerance {speedup:.1f}x sooner on this graph")
