"""
Named, counter-based random streams.

Every stream is a Philox generator keyed by SHA-256 of (seed, name), so
adding or removing one stream never shifts the draws of another.
"""

import hashlib

import numpy as np

ALGORITHM = 'philox4x64-sha256key'


def stream_key(seed: int, name: str) -> int:
    """128-bit Philox key for a (seed, name) pair."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:16], 'big')


def make_stream(seed: int, name: str) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=stream_key(seed, name)))


def sample_loss(rng: np.random.Generator, p: float) -> bool:
    """
    One Bernoulli loss draw. Always consumes exactly one value.

    Raises:
        ValueError: If p is outside [0, 1]
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"loss probability must be in [0, 1], got {p}")
    return bool(rng.random() < p)


def random_payload(rng: np.random.Generator, size: int) -> bytes:
    return rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()
