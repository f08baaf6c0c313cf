"""Discrete consensus dynamics for the base and exponential cases.

The base case iterates ``I - epsilon * L_out`` on the one-hop directed
Laplacian; the exponential case iterates the multi-hop operator built from
the exponentially weighted k-path family. Both are row-stochastic
nonnegative averaging matrices, so the spread max(state) - min(state) never
increases and iteration settles on a fixed vector.

The initial state assigns every agent its out-degree. This follows from the
auxiliary matrix K = L + A: with L = D_out - A the sum collapses to D_out,
so diag(K) is exactly the out-degree vector. The step size 1/(c * max(K))
is therefore 1/(c * max out-degree).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGraphError, ParameterError
from .graphs import DirectedGraph
from .operators import KPathDecomposition, directed_laplacian, multi_hop_operator

__all__ = [
    "CaseType",
    "ConsensusConfig",
    "UpdateOperator",
    "ConsensusRun",
    "initial_state",
    "base_epsilon",
    "build_update",
    "run_consensus",
]

logger = logging.getLogger(__name__)

#: Safety margin keeping exponential-case diagonal entries strictly positive.
DIAGONAL_MARGIN = 0.99


class CaseType:
    BASE = "base"
    EXPONENTIAL = "exponential"
    ALL = (BASE, EXPONENTIAL)


@dataclass(frozen=True)
class ConsensusConfig:
    """Run parameters shared by both cases."""

    case_type: str = CaseType.BASE
    c: float = 100.0
    alpha: float = 0.5
    tau: float = 1e-6
    iter_max: int = 1_000_000
    record_steps: int = 10

    def __post_init__(self):
        if self.case_type not in CaseType.ALL:
            raise ParameterError(f"unknown case type {self.case_type!r}")
        if self.c <= 0:
            raise ParameterError(f"c must be > 0, got {self.c}")
        if self.alpha < 0:
            raise ParameterError(f"alpha must be >= 0, got {self.alpha}")
        if self.tau <= 0:
            raise ParameterError(f"tau must be > 0, got {self.tau}")
        if self.iter_max < 1:
            raise ParameterError(f"iter_max must be >= 1, got {self.iter_max}")
        if self.record_steps < 1:
            raise ParameterError(f"record_steps must be >= 1, got {self.record_steps}")


@dataclass(frozen=True)
class UpdateOperator:
    matrix: np.ndarray
    epsilon: float
    case_type: str
    clamped: bool = False


@dataclass(frozen=True)
class ConsensusRun:
    """One trajectory: recorded prefix, termination state, and summary scalar.

    ``states`` holds the prefix actually recorded (``valid_steps`` rows, at
    most ``record_steps``); runs that converge early keep their true length
    instead of being silently padded. ``final_value`` is the arithmetic mean
    of the final state, which equals the consensus limit only at convergence.
    """

    states: np.ndarray
    final_state: np.ndarray
    final_value: float
    iterations: int
    converged: bool
    epsilon_used: float
    full_history: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def valid_steps(self) -> int:
        return self.states.shape[0]

    def padded_states(self, rows: int) -> np.ndarray:
        """Zero-padded (rows, n) view for consumers that need a fixed shape."""
        out = np.zeros((rows, self.states.shape[1]))
        out[: min(rows, self.valid_steps)] = self.states[:rows]
        return out


def initial_state(g: DirectedGraph) -> np.ndarray:
    """Out-degree of every node (the diagonal of D_out, see module docstring)."""
    return g.out_degree.astype(float)


def base_epsilon(g: DirectedGraph, c: float = 100.0) -> float:
    """Step size 1/(c * max out-degree)."""
    if c <= 0:
        raise ParameterError(f"c must be > 0, got {c}")
    max_out = int(g.out_degree.max()) if g.n else 0
    if g.arc_count == 0 or max_out == 0:
        raise DegenerateGraphError("graph has no arcs; step size undefined")
    return 1.0 / (c * max_out)


def build_update(
    g: DirectedGraph,
    dec: KPathDecomposition | None,
    cfg: ConsensusConfig,
) -> UpdateOperator:
    """Build the row-stochastic update matrix for the configured case.

    The exponential case clamps the step size to
    ``DIAGONAL_MARGIN / max_i sum_k exp(-alpha*k) * degrees_k(i)`` whenever
    the base step would push a diagonal entry negative, so the result always
    has nonnegative entries.
    """
    eps = base_epsilon(g, cfg.c)
    if cfg.case_type == CaseType.BASE:
        matrix = np.eye(g.n) - eps * directed_laplacian(g)
        return UpdateOperator(matrix=matrix, epsilon=eps, case_type=cfg.case_type)
    if dec is None:
        raise ParameterError("exponential case requires a k-path decomposition")
    max_weighted = float(dec.weighted_degrees(cfg.alpha).max())
    clamped = False
    if max_weighted > 0:
        cap = DIAGONAL_MARGIN / max_weighted
        if cap < eps:
            logger.warning(
                "step size clamped from %g to %g to keep diagonal entries positive",
                eps,
                cap,
            )
            eps = cap
            clamped = True
    op = multi_hop_operator(dec, cfg.alpha, eps)
    return UpdateOperator(
        matrix=op.update, epsilon=eps, case_type=cfg.case_type, clamped=clamped
    )


_CHECK_BLOCK = 64


def run_consensus(
    op: UpdateOperator,
    phi0: np.ndarray,
    cfg: ConsensusConfig,
    record_full: bool = False,
) -> ConsensusRun:
    """Iterate the update until the step delta falls below tolerance.

    Stops when the infinity norm of successive states drops to ``cfg.tau``
    or after ``cfg.iter_max`` steps; non-convergence is reported through the
    ``converged`` flag rather than an exception so callers can decide policy.
    The recorded prefix covers states 0 .. min(record_steps, steps) - 1,
    which excludes the converged state when convergence comes early.

    For row-stochastic nonnegative updates the step delta never increases,
    so after the recorded prefix the tolerance is probed at block boundaries
    only, rewinding one block to locate the exact crossing step. The state
    sequence is identical to stepwise checking either way.
    """
    matrix = op.matrix
    phi = np.array(phi0, dtype=float)
    if phi.shape != (matrix.shape[0],):
        raise ParameterError(
            f"state length {phi.shape} does not match operator {matrix.shape}"
        )
    recorded = [phi.copy()]
    history = [phi.copy()] if record_full else None
    nxt = np.empty_like(phi)
    buf = np.empty_like(phi)

    def delta_between(a: np.ndarray, b: np.ndarray) -> float:
        np.subtract(a, b, out=buf)
        np.abs(buf, out=buf)
        return float(buf.max())

    steps = cfg.iter_max
    converged = False
    warmup = max(_CHECK_BLOCK, cfg.record_steps)
    t = 0
    while t < cfg.iter_max:
        if t < warmup or record_full:
            np.dot(matrix, phi, out=nxt)
            delta = delta_between(nxt, phi)
            phi, nxt = nxt, phi
            t += 1
            if len(recorded) < cfg.record_steps:
                recorded.append(phi.copy())
            if history is not None:
                history.append(phi.copy())
            if delta <= cfg.tau:
                steps = t
                converged = True
                break
            continue
        block = min(_CHECK_BLOCK, cfg.iter_max - t)
        block_start = phi.copy()
        for _ in range(block):
            np.dot(matrix, phi, out=nxt)
            phi, nxt = nxt, phi
        if delta_between(phi, nxt) <= cfg.tau:
            phi = block_start
            nxt = np.empty_like(phi)
            for inner in range(block):
                np.dot(matrix, phi, out=nxt)
                delta = delta_between(nxt, phi)
                phi, nxt = nxt, phi
                if delta <= cfg.tau:
                    steps = t + inner + 1
                    converged = True
                    break
            break
        t += block
    final_state = phi.copy()
    valid = min(cfg.record_steps, steps)
    return ConsensusRun(
        states=np.array(recorded[:valid]),
        final_state=final_state,
        final_value=float(final_state.mean()),
        iterations=steps,
        converged=converged,
        epsilon_used=op.epsilon,
        full_history=np.array(history) if history is not None else None,
    )
