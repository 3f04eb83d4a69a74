"""Shared bit-pattern generators for the bitvector tests."""
import numpy as np
import pytest


def make_pattern(kind: str, n: int, seed: int = 0) -> np.ndarray:
    """0/1 uint8 array of length n in one of the named pattern classes."""
    rng = np.random.default_rng(seed)
    if kind == "zeros":
        return np.zeros(n, dtype=np.uint8)
    if kind == "ones":
        return np.ones(n, dtype=np.uint8)
    if kind == "sparse":
        return (rng.random(n) < 0.01).astype(np.uint8)
    if kind == "random":
        return (rng.random(n) < 0.5).astype(np.uint8)
    if kind == "dense":
        return (rng.random(n) < 0.99).astype(np.uint8)
    if kind == "runs":
        lengths = rng.geometric(1 / 300, size=n // 50 + 2)
        bits = np.repeat(np.arange(len(lengths)) % 2, lengths)
        return bits[:n].astype(np.uint8)
    if kind == "alternating":
        return (np.arange(n) % 2).astype(np.uint8)
    if kind == "aligned":
        return np.repeat(rng.integers(0, 2, -(-n // 256)), 256)[:n].astype(np.uint8)
    raise ValueError(kind)


@pytest.fixture
def pattern():
    return make_pattern
