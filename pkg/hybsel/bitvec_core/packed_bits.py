"""Packed bit storage in 64-bit words."""
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from hybsel.bitvec_core.broadword import WORD_BITS, popcount_words
from hybsel.errors import InputError, QueryError

BitSource = Union[Sequence[int], np.ndarray, Iterable[int]]


@dataclass(frozen=True)
class PackedBits:
    """A bit string B[1..n] stored LSB-first in uint64 words.

    Bits past n in the last word are always zero.
    """

    words: np.ndarray
    n: int

    def __post_init__(self) -> None:
        expected = -(-self.n // WORD_BITS)
        if len(self.words) != expected:
            raise InputError(f"{len(self.words)} words cannot hold exactly {self.n} bits")

    @classmethod
    def from_bits(cls, bits: BitSource) -> "PackedBits":
        """Pack a 0/1 sequence (list, numpy array, any iterable)."""
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = arr.astype(bool, copy=False).ravel()
        n = int(arr.size)
        packed = np.packbits(arr, bitorder="little")
        padded = np.zeros(-(-n // WORD_BITS) * 8, dtype=np.uint8)
        padded[: packed.size] = packed
        return cls(words=padded.view("<u8").astype(np.uint64), n=n)

    @classmethod
    def from_string(cls, text: str) -> "PackedBits":
        """Pack a string such as '10110' (first character is B[1])."""
        if set(text) - {"0", "1"}:
            raise InputError("bit strings may only contain '0' and '1'")
        return cls.from_bits(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_positions(cls, positions: Iterable[int], n: int) -> "PackedBits":
        """Bits of length n with ones at the given 1-based positions."""
        arr = np.zeros(n, dtype=bool)
        pos = np.asarray(list(positions) if not isinstance(positions, np.ndarray) else positions,
                         dtype=np.int64)
        if pos.size and (pos.min() < 1 or pos.max() > n):
            raise InputError(f"one positions must lie in [1..{n}]")
        arr[pos - 1] = True
        return cls.from_bits(arr)

    @classmethod
    def empty(cls) -> "PackedBits":
        return cls(words=np.zeros(0, dtype=np.uint64), n=0)

    def __len__(self) -> int:
        return self.n

    def get(self, i: int) -> int:
        """B[i] for 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise QueryError(f"position {i} outside [1..{self.n}]")
        return (int(self.words[(i - 1) // WORD_BITS]) >> ((i - 1) % WORD_BITS)) & 1

    def to_array(self) -> np.ndarray:
        """Unpacked uint8 array of length n (index 0 holds B[1])."""
        raw = self.words.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n]

    def count_ones(self) -> int:
        return int(popcount_words(self.words).sum()) if self.n else 0

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())
