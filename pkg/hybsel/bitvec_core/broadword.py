"""Broadword primitives on 64-bit words.

Bit positions inside a word are LSB-first and 1-based at the public
surface: position 1 is the least significant bit.
"""
from typing import List

import numpy as np

from hybsel.errors import QueryError

WORD_BITS = 64
MASK64 = (1 << 64) - 1

M1 = 0x5555555555555555
M2 = 0x3333333333333333
M4 = 0x0F0F0F0F0F0F0F0F
L8 = 0x0101010101010101

_NP_M1 = np.uint64(M1)
_NP_M2 = np.uint64(M2)
_NP_M4 = np.uint64(M4)
_NP_L8 = np.uint64(L8)


def _build_byte_select_table() -> List[List[int]]:
    table = []
    for byte in range(256):
        table.append([bit for bit in range(8) if (byte >> bit) & 1])
    return table


# _SELECT_IN_BYTE[v][k-1] is the 0-based index of the k-th set bit of byte v
_SELECT_IN_BYTE = _build_byte_select_table()


def popcount_word(w: int) -> int:
    """Number of set bits in a 64-bit word."""
    return (w & MASK64).bit_count()


def popcount_words(words: np.ndarray) -> np.ndarray:
    """Vectorized SWAR popcount of a uint64 array."""
    arr = np.asarray(words, dtype=np.uint64)
    arr = arr - ((arr >> np.uint64(1)) & _NP_M1)
    arr = (arr & _NP_M2) + ((arr >> np.uint64(2)) & _NP_M2)
    arr = (arr + (arr >> np.uint64(4))) & _NP_M4
    arr = arr * _NP_L8
    return (arr >> np.uint64(56)).astype(np.int64)


def select_in_word(w: int, k: int) -> int:
    """1-based position of the k-th set bit of w.

    Byte-wise prefix counts come from one SWAR pass and a multiply by
    0x0101..01; the target byte is finished with a lookup table.
    """
    w &= MASK64
    if not 1 <= k <= popcount_word(w):
        raise QueryError(f"select_in_word: k={k} outside [1..{popcount_word(w)}]")
    s = w - ((w >> 1) & M1)
    s = (s & M2) + ((s >> 2) & M2)
    s = (s + (s >> 4)) & M4
    prefix = (s * L8) & MASK64
    before = 0
    for byte_index in range(8):
        upto = (prefix >> (8 * byte_index)) & 0xFF
        if upto >= k:
            byte = (w >> (8 * byte_index)) & 0xFF
            return 8 * byte_index + _SELECT_IN_BYTE[byte][k - before - 1] + 1
        before = upto
    raise AssertionError("unreachable: k checked against popcount")


def low_mask(bits: int) -> int:
    """Word with the lowest `bits` bits set (0 <= bits <= 64)."""
    return (1 << bits) - 1
