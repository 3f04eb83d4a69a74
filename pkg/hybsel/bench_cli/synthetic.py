"""Deterministic synthetic texts and query sequences."""
import string
from typing import List, Optional

import numpy as np

from hybsel.bench_cli.models import SyntheticKind
from hybsel.errors import InputError

_PRINTABLE = (string.ascii_lowercase + string.ascii_uppercase + string.digits
              + string.punctuation).encode("ascii")
DEFAULT_BASE_SIZE = 4096


def symbol_table(sigma: int) -> np.ndarray:
    """sigma distinct nonzero byte values, printable while they last."""
    if not 1 <= sigma <= 255:
        raise InputError(f"alphabet size {sigma} outside [1..255]")
    if sigma <= len(_PRINTABLE):
        return np.frombuffer(_PRINTABLE[:sigma], dtype=np.uint8).copy()
    return np.arange(1, sigma + 1, dtype=np.uint8)


def gen_synthetic_text(kind: SyntheticKind, size: int, seed: int, mutation_rate: float = 0.0,
                       sigma: int = 4, base_size: Optional[int] = None) -> bytes:
    """Random i.i.d. text, or copies of one base segment with point mutations."""
    if size < 1:
        raise InputError("synthetic text size must be at least 1")
    if not 0.0 <= mutation_rate <= 1.0:
        raise InputError(f"mutation rate {mutation_rate} outside [0, 1]")
    rng = np.random.default_rng(seed)
    symbols = symbol_table(sigma)
    if kind is SyntheticKind.RANDOM:
        return symbols[rng.integers(0, sigma, size)].tobytes()

    base_len = min(size, base_size or DEFAULT_BASE_SIZE)
    base = rng.integers(0, sigma, base_len)
    copies = -(-size // base_len)
    parts = []
    for _ in range(copies):
        copy = base.copy()
        if sigma > 1 and mutation_rate > 0:
            hit = rng.random(base_len) < mutation_rate
            # shift by 1..sigma-1 so every mutation changes the symbol
            copy[hit] = (copy[hit] + rng.integers(1, sigma, int(hit.sum()))) % sigma
        parts.append(copy)
    return symbols[np.concatenate(parts)[:size]].tobytes()


def gen_queries(seed: int, bound: int, count: int) -> List[int]:
    """`count` uniform integers in [1..bound], fixed by seed."""
    if bound < 1:
        raise InputError("query bound must be at least 1")
    rng = np.random.default_rng(seed)
    return rng.integers(1, bound + 1, count).tolist()
