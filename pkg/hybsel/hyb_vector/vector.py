"""The hybrid bitvector: adaptive block encodings under a three-level header.

Layout:
    A_H  hyperblock headers, one (ones_before, payload_offset_before) pair each
    A_S  per superblock: an 8-byte superblock header followed by b_s 16-bit
         block headers (stored as rows of u16 cells)
    A_E  concatenated block payloads
plus one select index per bit value.
"""
import copy
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from hybsel.bitvec_core.packed_bits import PackedBits
from hybsel.config import shortcuts_enabled
from hybsel.errors import FormatError, QueryError
from hybsel.hyb_vector.block_codec import (
    block_access,
    block_rank,
    choose_block_encoding,
    classify,
    select_in_block,
)
from hybsel.hyb_vector.params import (
    BLOCK_BITS,
    SUPERBLOCK_CHOICES,
    SUPERBLOCK_HEADER_CELLS,
    BlockHeader,
    EncodingKind,
    HybParams,
    HyperblockHeader,
    SuperblockHeader,
)
from hybsel.hyb_vector.select_index import SelectIndex, build_select_index
from hybsel.serialization import ByteReader, ByteWriter

logger = logging.getLogger(__name__)

HYB_MAGIC = b"HYBSEL01"
HYB_VERSION = 1
FIXED_HEADER_BYTES = 8 + 4 + 8 + 1 + 1 + 6


def _header_hierarchy(n: int, params: HybParams,
                      cells: np.ndarray) -> Tuple[np.ndarray, List[SuperblockHeader]]:
    """Hyperblock pairs and superblock headers implied by the block headers.

    Args:
        n: Bit length
        params: Shape parameters
        cells: Packed block headers, one u16 per block in order

    Returns:
        (A_H as an int64 (count, 2) array, one SuperblockHeader per superblock)
    """
    cells = np.asarray(cells, dtype=np.int64)
    b_s, b_h = params.b_s, params.b_h
    block_count = len(cells)
    superblock_count = -(-n // params.superblock_bits)
    hyperblock_count = -(-n // params.hyperblock_bits)

    cum_ones = np.concatenate(([0], np.cumsum(cells & 0x1FF)))
    cum_len = np.concatenate(([0], np.cumsum((cells >> 9) & 0x3F)))
    hyper_first = np.arange(hyperblock_count, dtype=np.int64) * b_h
    hyper = np.stack([cum_ones[hyper_first], cum_len[hyper_first]], axis=1)
    hyper = hyper.reshape(hyperblock_count, 2).astype(np.int64)

    sheaders = []
    for sb in range(superblock_count):
        first = sb * b_s
        last = min(first + b_s, block_count)
        hb = first // b_h
        sb_bits = min((sb + 1) * params.superblock_bits, n) - sb * params.superblock_bits
        sb_ones = int(cum_ones[last] - cum_ones[first])
        sheaders.append(SuperblockHeader(
            local_ones_before=int(cum_ones[first] - hyper[hb, 0]),
            local_payload_offset_before=int(cum_len[first] - hyper[hb, 1]),
            uniform=sb_ones in (0, sb_bits),
        ))
    return hyper, sheaders


def _check_headers(n: int, params: HybParams, hyper: np.ndarray, rows: np.ndarray,
                   payload: bytes) -> int:
    """Cross-check loaded A_H, A_S and A_E; returns the number of ones.

    Raises:
        FormatError: the arrays do not describe one consistent bitvector
    """
    block_count = -(-n // BLOCK_BITS)
    cells = rows[:, SUPERBLOCK_HEADER_CELLS:].astype(np.int64).ravel()
    if np.any(cells[block_count:]):
        raise FormatError("block headers present past the last block")
    cells = cells[:block_count]
    blen = np.full(block_count, BLOCK_BITS, dtype=np.int64)
    if block_count:
        blen[-1] = n - (block_count - 1) * BLOCK_BITS
    block_ones = cells & 0x1FF
    if np.any(block_ones > blen):
        raise FormatError("block header counts more ones than the block holds")
    encoded = int(((cells >> 9) & 0x3F).sum())
    if encoded != len(payload):
        raise FormatError(f"block headers cover {encoded} payload bytes, A_E has {len(payload)}")

    expected_hyper, expected_super = _header_hierarchy(n, params, cells)
    if not np.array_equal(hyper.astype(np.int64), expected_hyper):
        raise FormatError("hyperblock headers disagree with the block headers")
    stored = [SuperblockHeader.unpack(row) for row in rows[:, :SUPERBLOCK_HEADER_CELLS].tolist()]
    if stored != expected_super:
        raise FormatError("superblock headers disagree with the block headers")
    return int(block_ones.sum())


@dataclass(frozen=True)
class SuperblockLocation:
    """Result of select step 1: the superblock holding the q-th c-bit."""
    i_s: int
    hrank: int
    srank: int
    hoffset: int
    soffset: int
    answer: Optional[int] = None


@dataclass(frozen=True)
class BlockScan:
    """Result of select step 3: the block holding the residual c-bit."""
    i_b: int
    block_rank_sum: int
    block_offset_sum: int
    header: BlockHeader
    blen: int


class HybVector:
    """Hybrid bitvector with rank, select and access.

    Build with HybVector.build(); the instance is read-only afterwards.
    """

    def __init__(self, n: int, params: HybParams, hyper: np.ndarray, super_rows: np.ndarray,
                 payload: bytes, sel_index_0: Optional[SelectIndex] = None,
                 sel_index_1: Optional[SelectIndex] = None, shortcuts: Optional[bool] = None):
        self.n = n
        self.params = params
        self.A_H = hyper
        self.A_S = super_rows
        self.A_E = payload
        self.shortcuts = shortcuts_enabled() if shortcuts is None else shortcuts

        b_s = params.b_s
        self.block_count = -(-n // BLOCK_BITS)
        self.superblock_count = -(-n // params.superblock_bits)
        self.hyperblock_count = -(-n // params.hyperblock_bits)
        self._row = SUPERBLOCK_HEADER_CELLS + b_s
        self._hyper: List[List[int]] = hyper.tolist()
        self._cells: List[int] = super_rows.ravel().tolist()
        self._ones = self._rank1(n) if n else 0

        self.sel_index: Dict[int, Optional[SelectIndex]] = {0: sel_index_0, 1: sel_index_1}

    # construction

    @classmethod
    def build(cls, bits: PackedBits, params: Optional[HybParams] = None,
              select0: bool = True, select1: bool = True) -> "HybVector":
        """Encode `bits` block by block and build the select indexes.

        Args:
            bits: Source bits B[1..n]
            params: Shape parameters (b_s, k_param); defaults to HybParams()
            select0: Build the select table for bit 0
            select1: Build the select table for bit 1

        Returns:
            The read-only hybrid bitvector
        """
        params = params or HybParams()
        n = bits.n
        arr = bits.to_array()
        b_s = params.b_s
        block_count = -(-n // BLOCK_BITS)
        superblock_count = -(-n // params.superblock_bits)

        # Step 1: cheapest encoding per block
        cells = np.zeros(block_count, dtype=np.uint16)
        payloads = []
        kinds: Counter = Counter()
        for blk in range(block_count):
            enc = choose_block_encoding(arr[blk * BLOCK_BITS:(blk + 1) * BLOCK_BITS])
            cells[blk] = enc.header.pack()
            payloads.append(enc.payload)
            kinds[enc.kind] += 1

        # Step 2: hyperblock and superblock headers from the block headers
        hyper, sheaders = _header_hierarchy(n, params, cells)
        rows = np.zeros((superblock_count, SUPERBLOCK_HEADER_CELLS + b_s), dtype=np.uint16)
        for sb, header in enumerate(sheaders):
            first = sb * b_s
            last = min(first + b_s, block_count)
            rows[sb, :SUPERBLOCK_HEADER_CELLS] = header.pack()
            rows[sb, SUPERBLOCK_HEADER_CELLS:SUPERBLOCK_HEADER_CELLS + last - first] = cells[first:last]

        # Step 3: select tables
        hv = cls(n, params, hyper.astype(np.uint64), rows, b"".join(payloads))
        hv.sel_index[0] = build_select_index(hv, 0) if select0 else None
        hv.sel_index[1] = build_select_index(hv, 1) if select1 else None
        logger.info(
            "hyb_vector built: n=%d b_s=%d blocks=%d |A_E|=%d kinds=%s",
            n, b_s, block_count, len(hv.A_E), {k.value: v for k, v in kinds.items()},
        )
        return hv

    @classmethod
    def from_bits(cls, bits, params: Optional[HybParams] = None, **flags) -> "HybVector":
        packed = bits if isinstance(bits, PackedBits) else PackedBits.from_bits(bits)
        return cls.build(packed, params, **flags)

    def with_shortcuts(self, enabled: bool) -> "HybVector":
        """Shallow copy answering select with or without the shortcut paths."""
        clone = copy.copy(self)
        clone.shortcuts = enabled
        return clone

    # header access

    def _hyperblock_of_superblock(self, i_s: int) -> int:
        """0-based hyperblock of the 1-based superblock i_s."""
        return (self.params.b_s * (i_s - 1)) // self.params.b_h

    def _superblock_header(self, sb: int) -> SuperblockHeader:
        row = sb * self._row
        return SuperblockHeader.unpack(self._cells[row:row + SUPERBLOCK_HEADER_CELLS])

    def _block_header(self, blk: int) -> BlockHeader:
        b_s = self.params.b_s
        return BlockHeader.unpack(self._cells[(blk // b_s) * self._row + SUPERBLOCK_HEADER_CELLS + blk % b_s])

    def block_length(self, blk: int) -> int:
        """True bit length of the 0-based block blk."""
        return min(BLOCK_BITS, self.n - blk * BLOCK_BITS)

    def _payload(self, offset: int, length: int) -> bytes:
        return self.A_E[offset:offset + length]

    def rank_before_superblock(self, c: int, i_s: int) -> int:
        """rank(c) of everything before the 1-based superblock i_s."""
        hb = self._hyperblock_of_superblock(i_s)
        ones = self.hyperblock_header(hb).ones_before
        ones += self._superblock_header(i_s - 1).local_ones_before
        if c:
            return ones
        return (i_s - 1) * self.params.superblock_bits - ones

    def superblock_ranks(self, c: int) -> np.ndarray:
        """rank_before_superblock for every superblock, 0-based."""
        if self.superblock_count == 0:
            return np.zeros(0, dtype=np.int64)
        cells = self.A_S.astype(np.int64)
        local = cells[:, 0] | (cells[:, 1] << 16)
        sb = np.arange(self.superblock_count, dtype=np.int64)
        hb = (sb * self.params.b_s) // self.params.b_h
        ones = self.A_H[:, 0].astype(np.int64)[hb] + local
        return ones if c else sb * self.params.superblock_bits - ones

    def hyperblock_header(self, hb: int) -> HyperblockHeader:
        """A_H entry of the 0-based hyperblock hb."""
        ones, offset = self._hyper[hb]
        return HyperblockHeader(ones, offset)

    # queries

    def __len__(self) -> int:
        return self.n

    def count(self, c: int) -> int:
        return self._ones if c else self.n - self._ones

    def _locate_block(self, blk: int) -> Tuple[int, int, BlockHeader]:
        """(ones before block, payload offset of block, header) for 0-based blk."""
        b_s = self.params.b_s
        sb = blk // b_s
        hheader = self.hyperblock_header(blk // self.params.b_h)
        ones, offset = hheader.ones_before, hheader.payload_offset_before
        sheader = self._superblock_header(sb)
        ones += sheader.local_ones_before
        offset += sheader.local_payload_offset_before
        base = sb * self._row + SUPERBLOCK_HEADER_CELLS
        for j in range(blk - sb * b_s):
            header = BlockHeader.unpack(self._cells[base + j])
            ones += header.ones
            offset += header.encode_len
        return ones, offset, BlockHeader.unpack(self._cells[base + blk - sb * b_s])

    def _rank1(self, i: int) -> int:
        blk = (i - 1) // BLOCK_BITS
        ones, offset, header = self._locate_block(blk)
        local = i - blk * BLOCK_BITS
        return ones + block_rank(header, self._payload(offset, header.encode_len), 1, local,
                                 self.block_length(blk))

    def rank(self, c: int, i: int) -> int:
        """Occurrences of c in B[1..i]; rank(c, 0) = 0."""
        if not 0 <= i <= self.n:
            raise QueryError(f"rank position {i} outside [0..{self.n}]")
        if i == 0:
            return 0
        ones = self._rank1(i)
        return ones if c else i - ones

    def access(self, i: int) -> int:
        """B[i] for 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise QueryError(f"access position {i} outside [1..{self.n}]")
        blk = (i - 1) // BLOCK_BITS
        _, offset, header = self._locate_block(blk)
        return block_access(header, self._payload(offset, header.encode_len),
                            i - blk * BLOCK_BITS, self.block_length(blk))

    def _index_for(self, c: int) -> SelectIndex:
        index = self.sel_index.get(c)
        if index is None:
            raise QueryError(f"no select index for bit {c}")
        if index.is_empty():
            raise QueryError(f"bit {c} does not occur; select is undefined")
        return index

    def find_superblock(self, c: int, q: int) -> SuperblockLocation:
        """Select step 1-2: binary search between two lookup-table samples."""
        index = self._index_for(c)
        _, lo, hi = index.bracket(q)
        # largest superblock x in [lo..hi] with fewer than q c-bits before it
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.rank_before_superblock(c, mid) < q:
                lo = mid
            else:
                hi = mid - 1
        i_s = lo
        hb = self._hyperblock_of_superblock(i_s)
        hheader = self.hyperblock_header(hb)
        h_ones, h_offset = hheader.ones_before, hheader.payload_offset_before
        sheader = self._superblock_header(i_s - 1)
        if c:
            hrank, srank = h_ones, sheader.local_ones_before
        else:
            hrank = hb * self.params.hyperblock_bits - h_ones
            local_bits = (i_s - 1) * self.params.superblock_bits - hb * self.params.hyperblock_bits
            srank = local_bits - sheader.local_ones_before
        answer = None
        if sheader.uniform and self.shortcuts:
            answer = self.params.superblock_bits * (i_s - 1) + (q - hrank - srank)
        return SuperblockLocation(i_s, hrank, srank, h_offset,
                                  sheader.local_payload_offset_before, answer)

    def scan_block_headers(self, i_s: int, c: int, residual: int) -> BlockScan:
        """Select step 3: walk the block headers of superblock i_s."""
        b_s = self.params.b_s
        first = (i_s - 1) * b_s
        last = min(first + b_s, self.block_count)
        base = (i_s - 1) * self._row + SUPERBLOCK_HEADER_CELLS
        rank_sum = 0
        offset_sum = 0
        for blk in range(first, last):
            header = BlockHeader.unpack(self._cells[base + blk - first])
            blen = self.block_length(blk)
            cnt = header.ones if c else blen - header.ones
            if rank_sum + cnt >= residual:
                return BlockScan(blk + 1, rank_sum, offset_sum, header, blen)
            rank_sum += cnt
            offset_sum += header.encode_len
        raise AssertionError(f"superblock {i_s} holds fewer than {residual} c-bits")

    def select(self, c: int, q: int) -> int:
        """Position of the q-th occurrence of c.

        Args:
            c: Bit value, 0 or 1
            q: 1-based occurrence number

        Returns:
            1-based position i with B[i] = c and rank(c, i) = q

        Raises:
            QueryError: q outside [1..count(c)] or no select index for c
        """
        total = self.count(c)
        if not 1 <= q <= total:
            raise QueryError(f"select({c}, {q}) outside [1..{total}]")

        # Step 1: superblock from the lookup table and binary search
        loc = self.find_superblock(c, q)

        # Step 2: hyperblock and superblock context; uniform superblocks answer here
        if loc.answer is not None:
            return loc.answer
        residual = q - loc.hrank - loc.srank

        # Step 3: block headers of the superblock
        scan = self.scan_block_headers(loc.i_s, c, residual)

        # Step 4: select inside the block's payload
        header = scan.header
        offset = loc.hoffset + loc.soffset + scan.block_offset_sum
        local = select_in_block(header, self._payload(offset, header.encode_len), c,
                                residual - scan.block_rank_sum, scan.blen, self.shortcuts)

        # Step 5: back to a global position
        return (scan.i_b - 1) * BLOCK_BITS + local

    # statistics

    def iter_blocks(self):
        """Yield (header, payload, blen) for every block in order."""
        offset = 0
        for blk in range(self.block_count):
            header = self._block_header(blk)
            yield header, self._payload(offset, header.encode_len), self.block_length(blk)
            offset += header.encode_len

    def encoding_histogram(self) -> Dict[EncodingKind, int]:
        counts = {kind: 0 for kind in EncodingKind}
        for header, _, blen in self.iter_blocks():
            counts[classify(header, blen)] += 1
        return counts

    def payload_bytes_per_block(self) -> float:
        return len(self.A_E) / self.block_count if self.block_count else 0.0

    # serialization

    def serialize(self) -> bytes:
        out = ByteWriter()
        out.raw(HYB_MAGIC)
        out.u32(HYB_VERSION)
        out.u64(self.n)
        out.u8(self.params.b_s)
        out.u8((self.sel_index[0] is not None) | ((self.sel_index[1] is not None) << 1))
        out.raw(bytes(6))
        out.u64(len(self.A_H))
        out.raw(self.A_H.astype("<u8").tobytes())
        out.u64(len(self.A_S))
        out.raw(self.A_S.astype("<u2").tobytes())
        out.blob(self.A_E)
        for c in (0, 1):
            index = self.sel_index[c]
            if index is not None:
                out.u64(index.k_interval)
                out.u64_array(index.table)
        return out.getvalue()

    @classmethod
    def deserialize(cls, data: bytes, params: Optional[HybParams] = None) -> "HybVector":
        reader = ByteReader(data)
        hv = cls.read_from(reader, params)
        if not reader.at_end():
            raise FormatError("trailing bytes after hybrid bitvector")
        return hv

    @classmethod
    def read_from(cls, reader: ByteReader, params: Optional[HybParams] = None) -> "HybVector":
        reader.expect_magic(HYB_MAGIC)
        reader.expect_version(HYB_VERSION)
        n = reader.u64()
        b_s = reader.u8()
        if b_s not in SUPERBLOCK_CHOICES:
            raise FormatError(f"invalid blocks-per-superblock {b_s}")
        flags = reader.u8()
        reader.raw(6)
        params = (params or HybParams()).model_copy(update={"b_s": b_s})

        hyper_count = reader.u64()
        if hyper_count != -(-n // params.hyperblock_bits):
            raise FormatError(f"{hyper_count} hyperblock headers do not match n={n}")
        hyper = np.frombuffer(reader.raw(16 * hyper_count), dtype="<u8").astype(np.uint64)
        hyper = hyper.reshape(hyper_count, 2)

        super_count = reader.u64()
        if super_count != -(-n // params.superblock_bits):
            raise FormatError(f"{super_count} superblock headers do not match n={n}")
        width = SUPERBLOCK_HEADER_CELLS + b_s
        rows = np.frombuffer(reader.raw(2 * width * super_count), dtype="<u2").astype(np.uint16)
        rows = rows.reshape(super_count, width)
        payload = reader.blob()
        ones = _check_headers(n, params, hyper, rows, payload)

        indexes: Dict[int, Optional[SelectIndex]] = {0: None, 1: None}
        for c in (0, 1):
            if flags & (1 << c):
                k_interval = reader.u64()
                table = reader.u64_array()
                indexes[c] = SelectIndex(c=c, k_interval=k_interval, table=table)
        hv = cls(n, params, hyper, rows, payload, indexes[0], indexes[1])
        for c, index in indexes.items():
            if index is not None:
                index.validate(ones if c else n - ones, hv.superblock_ranks(c), hv.superblock_count)
        return hv

    def size_in_bytes(self) -> int:
        """Exact length of serialize()."""
        size = FIXED_HEADER_BYTES
        size += 8 + 16 * len(self.A_H)
        size += 8 + 2 * self.A_S.size
        size += 8 + len(self.A_E)
        for index in self.sel_index.values():
            if index is not None:
                size += 16 + 8 * index.m
        return size
