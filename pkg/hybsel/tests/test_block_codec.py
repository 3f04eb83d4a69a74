"""Tests for the per-block encodings and in-block queries."""
import numpy as np
import pytest

from hybsel.errors import InputError
from hybsel.hyb_vector import (
    BlockHeader,
    EncodingKind,
    block_access,
    block_rank,
    choose_block_encoding,
    classify,
    decode_block,
    minority_select,
    recover_last_run_ending,
    runlength_select,
)
from hybsel.hyb_vector.block_codec import run_endings, select_in_block

RUN_BLOCK = [0] * 3 + [1] * 5 + [0] * 2 + [1] * 246


def random_blocks(seed: int, count: int):
    """Blocks of every flavour: sparse, dense, few runs, noise, partial lengths."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        blen = 256 if k % 4 else int(rng.integers(1, 257))
        flavour = k % 5
        if flavour == 0:
            bits = rng.random(blen) < 0.03
        elif flavour == 1:
            bits = rng.random(blen) > 0.03
        elif flavour == 2:
            cuts = np.sort(rng.choice(np.arange(1, 256), int(rng.integers(0, 12)), replace=False))
            bits = np.zeros(256, dtype=bool)
            for idx, start in enumerate(cuts):
                if idx % 2 == 0:
                    bits[start:] = ~bits[start:]
            bits = bits[:blen] if rng.random() < 0.5 else ~bits[:blen]
        elif flavour == 3:
            bits = rng.random(blen) < 0.5
        else:
            bits = np.zeros(blen, dtype=bool)
            bits[: int(rng.integers(0, blen + 1))] = True
        yield np.asarray(bits, dtype=np.uint8)


class TestChooseEncoding:
    """Test the encoding choice and its tie rules."""

    def test_all_zero_block_is_minority(self):
        enc = choose_block_encoding([0] * 256)
        assert enc.kind is EncodingKind.MINORITY
        assert enc.payload == b""
        assert enc.header == BlockHeader(ones=0, encode_len=0, special=1)

    def test_run_length_block(self):
        enc = choose_block_encoding(RUN_BLOCK)
        assert enc.kind is EncodingKind.RUN_LENGTH
        assert list(enc.payload) == [2, 7]
        assert enc.header == BlockHeader(ones=251, encode_len=2, special=0)

    def test_alternating_block_is_plain(self):
        enc = choose_block_encoding([0, 1] * 128)
        assert enc.kind is EncodingKind.PLAIN
        assert enc.header.encode_len == 32
        assert len(enc.payload) == 32

    def test_partial_plain_block_still_takes_32_bytes(self):
        enc = choose_block_encoding([0, 1] * 50)
        assert enc.kind is EncodingKind.PLAIN
        assert len(enc.payload) == 32

    def test_rejects_bad_length(self):
        with pytest.raises(InputError):
            choose_block_encoding([])
        with pytest.raises(InputError):
            choose_block_encoding([0] * 257)

    def test_header_pack_round_trip(self):
        header = BlockHeader(ones=256, encode_len=32, special=1)
        assert BlockHeader.unpack(header.pack()) == header
        assert header.pack() < 1 << 16

    def test_classify_recovers_kind(self):
        for bits in random_blocks(1, 400):
            enc = choose_block_encoding(bits)
            assert classify(enc.header, len(bits)) is enc.kind


class TestMinoritySelect:
    """Test select on minority-encoded blocks."""

    def setup_method(self):
        bits = np.zeros(256, dtype=np.uint8)
        bits[[4, 99, 199]] = 1
        self.enc = choose_block_encoding(bits)

    def test_layout(self):
        assert self.enc.kind is EncodingKind.MINORITY
        assert list(self.enc.payload) == [4, 99, 199]
        assert self.enc.header.special == 1

    def test_select_stored_bit(self):
        assert minority_select(self.enc.payload, 1, 1, 2) == 100

    def test_select_majority_bit(self):
        assert minority_select(self.enc.payload, 1, 0, 5) == 6
        assert minority_select(self.enc.payload, 1, 0, 250) == 253


class TestRunLengthSelect:
    """Test select on run-length blocks."""

    def test_select_ones_hits_tail_formula(self):
        assert runlength_select(bytes([2, 7]), 0, 251, 256, 1, 7) == 12

    def test_select_zeros_hits_last_stored_run(self):
        assert runlength_select(bytes([2, 7]), 0, 251, 256, 0, 5) == 10

    def test_two_run_block(self):
        assert runlength_select(b"", 1, 100, 256, 0, 1) == 101
        assert runlength_select(b"", 1, 100, 256, 0, 1, shortcuts=False) == 101
        assert runlength_select(b"", 1, 100, 256, 1, 100, shortcuts=False) == 100

    def test_recover_last_run_ending(self):
        assert recover_last_run_ending(bytes([2, 7]), 0, 251) == 10
        assert run_endings(bytes([2, 7]), 0, 251) == [3, 8, 10, 256]

    @pytest.mark.parametrize("shortcuts", [True, False])
    def test_random_run_blocks_against_scan(self, shortcuts):
        for bits in random_blocks(2, 300):
            enc = choose_block_encoding(bits)
            if enc.kind is not EncodingKind.RUN_LENGTH:
                continue
            for c in (0, 1):
                positions = np.flatnonzero(bits == c) + 1
                for q, expected in enumerate(positions.tolist(), start=1):
                    got = runlength_select(enc.payload, enc.header.special, enc.header.ones,
                                           len(bits), c, q, shortcuts)
                    assert got == expected


class TestBlockQueries:
    """Test rank, access, decode and dispatching select against the raw bits."""

    def test_rank_bounds(self):
        enc = choose_block_encoding(RUN_BLOCK)
        assert block_rank(enc.header, enc.payload, 1, 0) == 0
        assert block_rank(enc.header, enc.payload, 1, 256) == 251
        assert block_rank(enc.header, enc.payload, 0, 256) == 5

    def test_random_blocks_against_scan(self):
        for bits in random_blocks(3, 250):
            enc = choose_block_encoding(bits)
            blen = len(bits)
            assert decode_block(enc.header, enc.payload, blen).tolist() == bits.tolist()
            prefix = np.concatenate(([0], np.cumsum(bits)))
            for i in range(blen + 1):
                assert block_rank(enc.header, enc.payload, 1, i, blen) == prefix[i]
                assert block_rank(enc.header, enc.payload, 0, i, blen) == i - prefix[i]
            for i in range(1, blen + 1):
                assert block_access(enc.header, enc.payload, i, blen) == bits[i - 1]
            for c in (0, 1):
                positions = np.flatnonzero(bits == c) + 1
                for q, expected in enumerate(positions.tolist(), start=1):
                    assert select_in_block(enc.header, enc.payload, c, q, blen) == expected


class TestRandomizedBlocks:
    """Sampled checks over a large population of random blocks."""

    BLOCKS = 100_000

    def test_against_scan(self):
        rng = np.random.default_rng(2024)
        kinds = {kind: 0 for kind in EncodingKind}
        for bits in random_blocks(11, self.BLOCKS):
            enc = choose_block_encoding(bits)
            header, payload, blen = enc.header, enc.payload, len(bits)
            kinds[enc.kind] += 1
            prefix = np.cumsum(bits, dtype=np.int64)

            i = int(rng.integers(1, blen + 1))
            assert block_rank(header, payload, 1, i, blen) == prefix[i - 1]
            assert block_rank(header, payload, 0, i, blen) == i - prefix[i - 1]

            for c in (0, 1):
                positions = np.flatnonzero(bits == c) + 1
                if len(positions) == 0:
                    continue
                q = int(rng.integers(1, len(positions) + 1))
                expected = int(positions[q - 1])
                if enc.kind is EncodingKind.MINORITY:
                    assert minority_select(payload, header.special, c, q, blen) == expected
                elif enc.kind is EncodingKind.RUN_LENGTH:
                    for shortcuts in (True, False):
                        assert runlength_select(payload, header.special, header.ones, blen,
                                                c, q, shortcuts) == expected
                else:
                    assert select_in_block(header, payload, c, q, blen) == expected

            if enc.kind is EncodingKind.RUN_LENGTH:
                endings = (np.flatnonzero(bits[1:] != bits[:-1]) + 1).tolist() + [blen]
                assert recover_last_run_ending(payload, header.special, header.ones,
                                               blen) == endings[-2]
        assert all(kinds.values())
