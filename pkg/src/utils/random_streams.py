"""Named, counter-based random streams.

Every protocol role draws from its own Philox stream keyed by
``(seed, role, index)``, so the numbers one role sees do not depend on how
many draws another role made or in which order batches ran.
"""

import zlib

import numpy as np


def role_key(role: str) -> int:
    """Stable 32-bit key for a role name."""
    return zlib.crc32(role.encode("utf-8"))


def role_seed_sequence(seed: int, role: str, index: int = 0) -> np.random.SeedSequence:
    """Seed sequence for one role and stream index.

    Args:
        seed: Root seed of the run
        role: Name of the role ("alice", "bob", "coin", ...)
        index: Stream index, e.g. the Monte Carlo batch number

    Returns:
        Seed sequence uniquely determined by the three arguments
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    return np.random.SeedSequence(entropy=seed, spawn_key=(role_key(role), index))


def role_stream(seed: int, role: str, index: int = 0) -> np.random.Generator:
    """Counter-based generator for one role and stream index.

    Args:
        seed: Root seed of the run
        role: Name of the role
        index: Stream index

    Returns:
        A fresh ``numpy.random.Generator`` backed by Philox
    """
    return np.random.Generator(np.random.Philox(role_seed_sequence(seed, role, index)))
