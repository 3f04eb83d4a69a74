"""Uncompressed bitvector with sampled rank and hinted select."""
import logging
from typing import List

import numpy as np

from hybsel.bitvec_core.broadword import (
    WORD_BITS,
    low_mask,
    popcount_word,
    popcount_words,
    select_in_word,
)
from hybsel.bitvec_core.packed_bits import PackedBits
from hybsel.errors import FormatError, InputError, QueryError
from hybsel.serialization import ByteReader, ByteWriter

logger = logging.getLogger(__name__)

RANK_SAMPLE_BITS = 512
WORDS_PER_SAMPLE = RANK_SAMPLE_BITS // WORD_BITS
SELECT_HINT_PERIOD = 8192

PLAIN_MAGIC = b"PLAINBV1"
PLAIN_VERSION = 1


def _select_hints(cumulative: np.ndarray, total: int) -> np.ndarray:
    """Sample block holding every SELECT_HINT_PERIOD-th occurrence.

    cumulative[k] counts occurrences in sample blocks 0..k (inclusive).
    """
    if total == 0:
        return np.zeros(0, dtype=np.uint64)
    targets = np.arange(1, total + 1, SELECT_HINT_PERIOD, dtype=np.int64)
    return np.searchsorted(cumulative, targets, side="left").astype(np.uint64)


class PlainBitVector:
    """The BV baseline: packed bits plus o(n) rank/select support.

    rank_samples[k] is the number of ones in B[1..512k] (clamped to n for
    the final partial sample); select_hints_c[j] is the 512-bit sample
    block that contains the (8192*j + 1)-th c-bit.
    """

    def __init__(self, bits: PackedBits, rank_samples: np.ndarray,
                 select_hints_1: np.ndarray, select_hints_0: np.ndarray):
        self.bits = bits
        self.n = bits.n
        self.rank_samples = rank_samples
        self.select_hints_1 = select_hints_1
        self.select_hints_0 = select_hints_0
        self._words: List[int] = bits.words.tolist()
        self._samples: List[int] = rank_samples.tolist()
        self._hints = {0: select_hints_0.tolist(), 1: select_hints_1.tolist()}
        self._ones = bits.count_ones()

    @classmethod
    def build(cls, bits: PackedBits) -> "PlainBitVector":
        """Compute rank samples and select hints for `bits`."""
        n = bits.n
        if n == 0:
            empty = np.zeros(0, dtype=np.uint64)
            return cls(bits, empty, empty, empty)
        n_samples = -(-n // RANK_SAMPLE_BITS)
        counts = np.zeros(n_samples * WORDS_PER_SAMPLE, dtype=np.int64)
        counts[: len(bits.words)] = popcount_words(bits.words)
        per_sample = counts.reshape(n_samples, WORDS_PER_SAMPLE).sum(axis=1)
        ones_cum = np.cumsum(per_sample)
        rank_samples = np.concatenate(([0], ones_cum)).astype(np.uint64)

        ends = np.minimum(np.arange(1, n_samples + 1, dtype=np.int64) * RANK_SAMPLE_BITS, n)
        zeros_cum = ends - ones_cum
        total_ones = int(ones_cum[-1])
        hints_1 = _select_hints(ones_cum, total_ones)
        hints_0 = _select_hints(zeros_cum, n - total_ones)
        logger.debug("plain bitvector: n=%d ones=%d samples=%d", n, total_ones, n_samples)
        return cls(bits, rank_samples, hints_1, hints_0)

    @classmethod
    def from_bits(cls, bits) -> "PlainBitVector":
        return cls.build(bits if isinstance(bits, PackedBits) else PackedBits.from_bits(bits))

    def __len__(self) -> int:
        return self.n

    def count(self, c: int) -> int:
        """Total occurrences of bit c."""
        return self._ones if c else self.n - self._ones

    def _bits_before_sample(self, k: int) -> int:
        return min(k * RANK_SAMPLE_BITS, self.n)

    def _before_sample(self, c: int, k: int) -> int:
        ones = self._samples[k]
        return ones if c else self._bits_before_sample(k) - ones

    def access(self, i: int) -> int:
        """B[i] for 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise QueryError(f"access position {i} outside [1..{self.n}]")
        return (self._words[(i - 1) // WORD_BITS] >> ((i - 1) % WORD_BITS)) & 1

    def rank(self, c: int, i: int) -> int:
        """Occurrences of c in B[1..i]; rank(c, 0) = 0."""
        if not 0 <= i <= self.n:
            raise QueryError(f"rank position {i} outside [0..{self.n}]")
        if i == 0:
            return 0
        k = i // RANK_SAMPLE_BITS
        ones = self._samples[k]
        last_word = i // WORD_BITS
        for w in range(k * WORDS_PER_SAMPLE, last_word):
            ones += popcount_word(self._words[w])
        tail = i % WORD_BITS
        if tail:
            ones += popcount_word(self._words[last_word] & low_mask(tail))
        return ones if c else i - ones

    def select(self, c: int, j: int) -> int:
        """Position of the j-th occurrence of c."""
        total = self.count(c)
        if not 1 <= j <= total:
            raise QueryError(f"select({c}, {j}) outside [1..{total}]")
        hints = self._hints[c]
        h = (j - 1) // SELECT_HINT_PERIOD
        lo = hints[h]
        hi = hints[h + 1] if h + 1 < len(hints) else len(self._samples) - 2
        # largest sample block k in [lo..hi] with fewer than j occurrences before it
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._before_sample(c, mid) < j:
                lo = mid
            else:
                hi = mid - 1
        residual = j - self._before_sample(c, lo)
        for w in range(lo * WORDS_PER_SAMPLE, len(self._words)):
            word = self._words[w]
            if not c:
                valid = min(WORD_BITS, self.n - w * WORD_BITS)
                word = ~word & low_mask(valid)
            cnt = popcount_word(word)
            if residual <= cnt:
                return w * WORD_BITS + select_in_word(word, residual)
            residual -= cnt
        raise AssertionError("unreachable: occurrence count checked")

    def support_overhead_bits(self) -> int:
        """Bits spent on rank samples and select hints."""
        return 64 * (len(self.rank_samples) + len(self.select_hints_1) + len(self.select_hints_0))

    def serialize(self) -> bytes:
        out = ByteWriter()
        out.raw(PLAIN_MAGIC)
        out.u32(PLAIN_VERSION)
        out.u64(self.n)
        out.u64_array(self.bits.words)
        out.u64_array(self.rank_samples)
        out.u64_array(self.select_hints_1)
        out.u64_array(self.select_hints_0)
        return out.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "PlainBitVector":
        reader = ByteReader(data)
        bv = cls.read_from(reader)
        if not reader.at_end():
            raise FormatError("trailing bytes after plain bitvector")
        return bv

    @classmethod
    def read_from(cls, reader: ByteReader) -> "PlainBitVector":
        """Load a PLAINBV1 stream and check its samples against the bits.

        Raises:
            FormatError: truncated stream, or samples and hints that the
                stored bits do not produce
        """
        reader.expect_magic(PLAIN_MAGIC)
        reader.expect_version(PLAIN_VERSION)
        n = reader.u64()
        words = reader.u64_array()
        try:
            bits = PackedBits(words=words, n=n)
        except InputError as exc:
            raise FormatError(str(exc)) from None
        tail = n % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise FormatError("bits set past the end of the bitvector")
        loaded = cls(bits, reader.u64_array(), reader.u64_array(), reader.u64_array())

        expected = cls.build(bits)
        for name in ("rank_samples", "select_hints_1", "select_hints_0"):
            if not np.array_equal(getattr(loaded, name), getattr(expected, name)):
                raise FormatError(f"stored {name} do not match the bits")
        return loaded

    def size_in_bytes(self) -> int:
        """Exact length of serialize()."""
        return 8 + 4 + 8 + 4 * 8 + 8 * (
            len(self.bits.words) + len(self.rank_samples)
            + len(self.select_hints_1) + len(self.select_hints_0)
        )
