"""PLCP array and its 2n-bit select encoding."""
from dataclasses import dataclass

import numpy as np

from hybsel.bitvec_core.packed_bits import PackedBits
from hybsel.bitvec_core.protocol import RankSelectSupport
from hybsel.errors import InputError, QueryError


def plcp_array(sa: np.ndarray, lcp: np.ndarray) -> np.ndarray:
    """plcp[sa[i]] = lcp[i]: the LCP values in text order."""
    plcp = np.empty(len(sa), dtype=np.int64)
    plcp[sa - 1] = lcp
    return plcp


@dataclass(frozen=True)
class PlcpBitvector:
    """Ones at plcp[j] + 2j for j in [1..n], padded with zeros to 2n bits."""
    positions: np.ndarray
    n: int

    @property
    def length(self) -> int:
        return 2 * self.n

    def to_packed(self) -> PackedBits:
        return PackedBits.from_positions(self.positions, self.length)


def plcp_bitvector(plcp: np.ndarray) -> PlcpBitvector:
    """Encode a PLCP array; rejects arrays breaking plcp[j+1] >= plcp[j] - 1."""
    values = np.asarray(plcp, dtype=np.int64)
    n = len(values)
    if n and (values[1:] < values[:-1] - 1).any():
        raise InputError("PLCP values must satisfy plcp[j+1] >= plcp[j] - 1")
    if n and values.min() < 0:
        raise InputError("PLCP values must be non-negative")
    positions = values + 2 * np.arange(1, n + 1, dtype=np.int64)
    if n and positions[-1] > 2 * n:
        raise InputError("PLCP value exceeds the remaining suffix length")
    return PlcpBitvector(positions=positions, n=n)


def plcp_query(bv: RankSelectSupport, j: int) -> int:
    """plcp[j] = select_1(B, j) - 2j."""
    if not 1 <= j <= bv.count(1):
        raise QueryError(f"PLCP index {j} outside [1..{bv.count(1)}]")
    return bv.select(1, j) - 2 * j


def plcp_values(bv: RankSelectSupport) -> np.ndarray:
    """Decode every PLCP entry from a select-capable bitvector."""
    n = bv.count(1)
    return np.array([bv.select(1, j) - 2 * j for j in range(1, n + 1)], dtype=np.int64)
