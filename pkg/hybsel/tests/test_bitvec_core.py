"""Tests for packed bits, broadword primitives and the plain bitvector."""
import numpy as np
import pytest

from hybsel.bitvec_core import (
    PackedBits,
    PlainBitVector,
    RankSelectSupport,
    popcount_word,
    popcount_words,
    select_in_word,
)
from hybsel.bitvec_core.plain_vector import PLAIN_VERSION
from hybsel.errors import FormatError, QueryError


def scan_select_in_word(w, k):
    seen = 0
    for pos in range(64):
        if (w >> pos) & 1:
            seen += 1
            if seen == k:
                return pos + 1
    raise AssertionError


class TestBroadword:
    """Test word-level popcount and select."""

    def test_popcount_examples(self):
        assert popcount_word(0x0) == 0
        assert popcount_word(0xFFFFFFFFFFFFFFFF) == 64
        assert popcount_word(0xF0F0) == 8

    def test_popcount_words_matches_scalar(self):
        rng = np.random.default_rng(1)
        words = rng.integers(0, 2**63, 500, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
        counts = popcount_words(words)
        assert counts.tolist() == [popcount_word(int(w)) for w in words]

    def test_select_in_word_examples(self):
        assert select_in_word(0b1, 1) == 1
        assert select_in_word(0b101000, 2) == 6
        assert select_in_word(0xFFFFFFFFFFFFFFFF, 64) == 64

    def test_select_in_word_random_against_scan(self):
        rng = np.random.default_rng(7)
        for _ in range(20000):
            w = (int(rng.integers(0, 2**32)) << 32) | int(rng.integers(0, 2**32))
            if w == 0:
                continue
            k = int(rng.integers(1, popcount_word(w) + 1))
            assert select_in_word(w, k) == scan_select_in_word(w, k)

    def test_select_in_word_rejects_bad_rank(self):
        with pytest.raises(QueryError):
            select_in_word(0b11, 3)
        with pytest.raises(QueryError):
            select_in_word(0b11, 0)


class TestPackedBits:
    """Test bit packing."""

    def test_from_string_and_get(self):
        bits = PackedBits.from_string("10110")
        assert len(bits) == 5
        assert [bits.get(i) for i in range(1, 6)] == [1, 0, 1, 1, 0]
        assert bits.to_string() == "10110"

    def test_trailing_bits_are_zero(self):
        bits = PackedBits.from_bits([1] * 70)
        assert len(bits.words) == 2
        assert int(bits.words[1]) == 0b111111

    def test_from_positions(self):
        bits = PackedBits.from_positions([2, 4, 6], 6)
        assert bits.to_string() == "010101"

    def test_get_out_of_range(self):
        with pytest.raises(QueryError):
            PackedBits.from_string("10").get(3)

    def test_count_ones(self):
        assert PackedBits.empty().count_ones() == 0
        assert PackedBits.from_string("10110").count_ones() == 3
        arr = np.random.default_rng(7).integers(0, 2, 10_000)
        assert PackedBits.from_bits(arr).count_ones() == int(arr.sum())


class TestPlainBitVector:
    """Test the uncompressed rank/select baseline."""

    def test_small_examples(self):
        bv = PlainBitVector.build(PackedBits.from_string("10110"))
        assert bv.rank(1, 0) == 0
        assert bv.rank(1, 4) == 3
        assert bv.rank(0, 5) == 2
        assert bv.select(1, 1) == 1
        assert bv.select(1, 3) == 4
        assert bv.select(0, 2) == 5
        assert [bv.access(i) for i in (1, 2, 3)] == [1, 0, 1]

    def test_empty(self):
        bv = PlainBitVector.build(PackedBits.empty())
        assert len(bv) == 0
        assert len(bv.rank_samples) == 0
        assert bv.rank(1, 0) == 0

    def test_uniform_sample(self):
        bv = PlainBitVector.build(PackedBits.from_bits([1] * 512))
        assert int(bv.rank_samples[1]) == 512

    def test_rank_samples_match_prefix_counts(self):
        arr = (np.random.default_rng(3).random(10_000) < 0.5).astype(np.uint8)
        bv = PlainBitVector.build(PackedBits.from_bits(arr))
        prefix = np.concatenate(([0], np.cumsum(arr)))
        for k, sample in enumerate(bv.rank_samples.tolist()):
            assert sample == prefix[min(512 * k, len(arr))]

    @pytest.mark.parametrize("kind", ["sparse", "random", "dense", "runs", "zeros", "ones"])
    def test_rank_select_against_numpy(self, pattern, kind):
        arr = pattern(kind, 70_001, seed=5)
        bv = PlainBitVector.from_bits(arr)
        prefix = np.concatenate(([0], np.cumsum(arr)))
        rng = np.random.default_rng(11)
        for i in rng.integers(0, len(arr) + 1, 2000).tolist():
            assert bv.rank(1, i) == prefix[i]
            assert bv.rank(1, i) + bv.rank(0, i) == i
        for c in (0, 1):
            positions = np.flatnonzero(arr == c) + 1
            if len(positions) == 0:
                continue
            for j in rng.integers(1, len(positions) + 1, 2000).tolist():
                p = bv.select(c, j)
                assert p == positions[j - 1]
                assert bv.rank(c, p) == j and bv.access(p) == c

    def test_many_select_hints(self):
        arr = np.ones(40_000, dtype=np.uint8)
        arr[::3] = 0
        bv = PlainBitVector.from_bits(arr)
        assert len(bv.select_hints_1) == -(-bv.count(1) // 8192)
        ones = np.flatnonzero(arr) + 1
        for j in (1, 8192, 8193, 16385, len(ones)):
            assert bv.select(1, j) == ones[j - 1]

    def test_query_errors(self):
        bv = PlainBitVector.from_bits([1, 0, 1])
        with pytest.raises(QueryError):
            bv.rank(1, 4)
        with pytest.raises(QueryError):
            bv.select(0, 2)
        with pytest.raises(QueryError):
            bv.access(0)

    def test_support_overhead(self):
        bv = PlainBitVector.from_bits(np.random.default_rng(2).integers(0, 2, 1 << 16))
        assert bv.support_overhead_bits() <= 0.25 * len(bv)

    def test_serialization_round_trip(self):
        arr = np.random.default_rng(4).integers(0, 2, 300_000).astype(np.uint8)
        bv = PlainBitVector.from_bits(arr)
        data = bv.serialize()
        assert len(data) == bv.size_in_bytes()
        again = PlainBitVector.deserialize(data)
        prefix = np.concatenate(([0], np.cumsum(arr, dtype=np.int64)))
        rng = np.random.default_rng(40)
        for i in rng.integers(0, len(arr) + 1, 10_000).tolist():
            assert again.rank(1, i) == prefix[i]
        for i in rng.integers(1, len(arr) + 1, 10_000).tolist():
            assert again.access(i) == arr[i - 1]
        for c in (0, 1):
            positions = np.flatnonzero(arr == c) + 1
            for q in rng.integers(1, len(positions) + 1, 10_000).tolist():
                assert again.select(c, q) == positions[q - 1]

    def test_bad_magic(self):
        data = bytearray(PlainBitVector.from_bits([1, 0]).serialize())
        data[0] ^= 0xFF
        with pytest.raises(FormatError):
            PlainBitVector.deserialize(bytes(data))

    def test_satisfies_protocol(self):
        assert isinstance(PlainBitVector.from_bits([1]), RankSelectSupport)

    def test_count_comes_from_the_bits(self):
        arr = np.random.default_rng(8).integers(0, 2, 5000)
        bv = PlainBitVector.from_bits(arr)
        assert bv.count(1) == bv.bits.count_ones() == int(arr.sum())
        assert bv.count(0) == 5000 - int(arr.sum())


class TestPlainLoadValidation:
    """Streams that frame correctly but disagree with their bits must not load."""

    @staticmethod
    def sample():
        return PlainBitVector.from_bits(np.random.default_rng(9).integers(0, 2, 40_000))

    def test_version_mismatch(self):
        data = bytearray(self.sample().serialize())
        data[8:12] = (PLAIN_VERSION + 1).to_bytes(4, "little")
        with pytest.raises(FormatError, match="version"):
            PlainBitVector.deserialize(bytes(data))

    def test_short_rank_samples(self):
        bv = self.sample()
        bad = PlainBitVector(bv.bits, bv.rank_samples[:-1], bv.select_hints_1, bv.select_hints_0)
        with pytest.raises(FormatError, match="rank_samples"):
            PlainBitVector.deserialize(bad.serialize())

    def test_wrong_rank_sample(self):
        bv = self.sample()
        samples = bv.rank_samples.copy()
        samples[3] += 1
        bad = PlainBitVector(bv.bits, samples, bv.select_hints_1, bv.select_hints_0)
        with pytest.raises(FormatError, match="rank_samples"):
            PlainBitVector.deserialize(bad.serialize())

    def test_wrong_hint_count(self):
        bv = self.sample()
        bad = PlainBitVector(bv.bits, bv.rank_samples, bv.select_hints_1[:1], bv.select_hints_0)
        with pytest.raises(FormatError, match="select_hints_1"):
            PlainBitVector.deserialize(bad.serialize())

    def test_word_count_disagrees_with_length(self):
        data = bytearray(PlainBitVector.from_bits([1] * 100).serialize())
        data[12:20] = (200).to_bytes(8, "little")
        with pytest.raises(FormatError):
            PlainBitVector.deserialize(bytes(data))

    def test_bits_past_the_end(self):
        data = bytearray(PlainBitVector.from_bits([1] * 100).serialize())
        # top byte of the second word holds positions 121..128
        data[20 + 8 + 15] = 0x80
        with pytest.raises(FormatError, match="past the end"):
            PlainBitVector.deserialize(bytes(data))

    def test_trailing_bytes(self):
        data = self.sample().serialize()
        with pytest.raises(FormatError):
            PlainBitVector.deserialize(data + b"\x00")
