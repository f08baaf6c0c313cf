"""Exception types shared across the package."""

from __future__ import annotations


class PathlapError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PathlapError, ValueError):
    """A model or configuration parameter violates its documented bound."""


class ConnectivityError(PathlapError):
    """The underlying undirected graph is disconnected where connectivity is required."""


class DegenerateGraphError(PathlapError):
    """The graph has no arcs, so a step size cannot be derived."""


class StepSizeError(PathlapError):
    """The requested step size would produce a negative diagonal entry.

    Attributes
    ----------
    max_epsilon : float
        Largest admissible step size for the operator at hand.
    """

    def __init__(self, message: str, max_epsilon: float):
        super().__init__(message)
        self.max_epsilon = max_epsilon


class GenerationError(PathlapError):
    """Dataset generation exhausted its resample budget."""


class SchemaError(PathlapError):
    """A serialized dataset file is malformed or has an unsupported schema version."""
