"""Sampled superblock lookup table L_s that brackets select queries."""
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List

import numpy as np

from hybsel.errors import FormatError

if TYPE_CHECKING:
    from hybsel.hyb_vector.vector import HybVector


@dataclass
class SelectIndex:
    """table[i] (1-based) is the superblock holding the (k_interval*(i-1)+1)-th c-bit.

    The last entry is the total superblock count. An empty table means
    the bit value never occurs.
    """

    c: int
    k_interval: int
    table: np.ndarray
    _entries: List[int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.table = np.asarray(self.table, dtype=np.uint64)
        self._entries = self.table.tolist()

    @property
    def m(self) -> int:
        return len(self._entries)

    def is_empty(self) -> bool:
        return self.m == 0

    def payload_bits(self) -> int:
        """Bits taken by the table entries."""
        return 64 * self.m

    def bracket(self, q: int):
        """(u, i_s', i_s'') for the q-th c-bit."""
        u = (q - 1) // self.k_interval + 1
        return u, self._entries[u - 1], self._entries[u]

    def validate(self, total: int, before: np.ndarray, superblock_count: int) -> None:
        """Check a loaded table against the c-bit count and superblock ranks.

        Args:
            total: Occurrences of c in the bitvector
            before: c-bits before each superblock, 0-based
            superblock_count: Number of superblocks

        Raises:
            FormatError: the table cannot belong to this bitvector
        """
        if total == 0:
            if self.m:
                raise FormatError(f"bit {self.c} does not occur but its select table has {self.m} entries")
            return
        if self.k_interval < 1:
            raise FormatError(f"select sampling interval {self.k_interval} must be at least 1")
        expected_m = -(-total // self.k_interval) + 1
        if self.m != expected_m:
            raise FormatError(f"select table for bit {self.c} has {self.m} entries, expected {expected_m}")
        entries = self.table.astype(np.int64)
        if np.any(np.diff(entries) < 0):
            raise FormatError(f"select table for bit {self.c} is not nondecreasing")
        if entries[-1] != superblock_count:
            raise FormatError(f"select table for bit {self.c} does not end at superblock {superblock_count}")
        targets = self.k_interval * np.arange(self.m - 1, dtype=np.int64) + 1
        if not np.array_equal(entries[:-1], np.searchsorted(before, targets, side="left")):
            raise FormatError(f"select table for bit {self.c} points at the wrong superblocks")

    @classmethod
    def empty(cls, c: int) -> "SelectIndex":
        return cls(c=c, k_interval=1, table=np.zeros(0, dtype=np.uint64))


def build_select_index(hv: "HybVector", c: int) -> SelectIndex:
    """Sample every k_interval-th c-bit into its 1-based superblock index.

    m_max = max(n // (k_param*w), 2), k_interval = ceil(rank/(m_max-1)),
    m = ceil(rank/k_interval) + 1, so 64*m never exceeds n // k_param
    once n // (k_param*w) >= 2.
    """
    total = hv.count(c)
    if total == 0:
        return SelectIndex.empty(c)
    params = hv.params
    m_max = max(hv.n // (params.k_param * params.w), 2)
    k_interval = -(-total // (m_max - 1))
    m = -(-total // k_interval) + 1

    before = hv.superblock_ranks(c)
    targets = k_interval * np.arange(m - 1, dtype=np.int64) + 1
    table = np.empty(m, dtype=np.uint64)
    # 0-based index of the first superblock with >= t c-bits before it equals
    # the 1-based index of the superblock holding the t-th c-bit
    table[: m - 1] = np.searchsorted(before, targets, side="left")
    table[m - 1] = hv.superblock_count
    return SelectIndex(c=c, k_interval=k_interval, table=table)
