"""Deterministic random streams derived from one user seed.

Every random draw in the package comes from a generator keyed by
``(seed, purpose, index)``, so results never depend on evaluation order or on
how work is split across processes.
"""

import zlib

import numpy as np


def _purpose_key(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def seed_sequence(seed: int, purpose: str, index: int = 0) -> np.random.SeedSequence:
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=(_purpose_key(purpose), int(index)))


def derive_rng(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """Independent PCG64 generator for the given ``(seed, purpose, index)``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, purpose, index)))


def derive_seed(seed: int, purpose: str, index: int = 0) -> int:
    """A 64-bit integer seed, for APIs that take a seed rather than a generator."""
    return int(seed_sequence(seed, purpose, index).generate_state(1, dtype=np.uint64)[0])
