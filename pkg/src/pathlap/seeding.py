"""Deterministic seed derivation for parallel sample generation.

All randomness in the package flows through numpy's PCG64 generator, which is
portable across platforms. Independent streams are derived by hashing tuples
of integers with :class:`numpy.random.SeedSequence`, so the result depends
only on the inputs, never on scheduling or thread count.
"""

from __future__ import annotations

import numpy as np

TRAIN_STREAM = 0
TEST_STREAM = 1


def derive_seed(master_seed: int, *path: int) -> int:
    """Hash ``(master_seed, *path)`` into a 64-bit seed."""
    ss = np.random.SeedSequence((master_seed, *path))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_seed(master_seed: int, stream: int, index: int, attempt: int = 0) -> int:
    """Seed for one dataset sample.

    The low bit encodes the stream (train=0, test=1), which makes train and
    test seed sets disjoint by construction rather than by probability.
    """
    raw = derive_seed(master_seed, stream, index, attempt)
    return (raw & ~1) | (stream & 1)


def split_seed(seed: int, count: int) -> list[int]:
    """Derive ``count`` independent sub-seeds from one seed."""
    return [derive_seed(seed, i) for i in range(count)]


def rng_from(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
