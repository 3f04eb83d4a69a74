"""Per-block encodings of the hybrid bitvector and in-block queries.

Stored in-block positions and run endings take one byte each, holding
(value - 1) since values range over [1..256]. All public positions are
1-based.
"""
from bisect import bisect_left
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from hybsel.bitvec_core.broadword import low_mask, popcount_word, select_in_word
from hybsel.errors import InputError
from hybsel.hyb_vector.params import BLOCK_BITS, PLAIN_BYTES, BlockHeader, EncodingKind

# lower value wins a cost tie; the decoder tests kinds in this order
_TIE_PRIORITY = {EncodingKind.MINORITY: 0, EncodingKind.PLAIN: 1, EncodingKind.RUN_LENGTH: 2}


@dataclass(frozen=True)
class EncodedBlock:
    kind: EncodingKind
    payload: bytes
    header: BlockHeader


def classify(header: BlockHeader, blen: int = BLOCK_BITS) -> EncodingKind:
    """Recover the encoding kind from a block header alone."""
    if header.encode_len == min(header.ones, blen - header.ones):
        return EncodingKind.MINORITY
    if header.encode_len == PLAIN_BYTES:
        return EncodingKind.PLAIN
    return EncodingKind.RUN_LENGTH


def choose_block_encoding(block_bits: Sequence[int]) -> EncodedBlock:
    """Encode one block with its cheapest encoding.

    Costs in bytes: minority = min(ones, blen - ones), run-length =
    runs - 2, plain = 32. Ties go to Minority, then Plain, so a run-length
    header never collides with the other two kinds.
    """
    bits = np.asarray(block_bits, dtype=np.uint8)
    blen = int(bits.size)
    if not 1 <= blen <= BLOCK_BITS:
        raise InputError(f"block length {blen} outside [1..{BLOCK_BITS}]")
    ones = int(bits.sum())
    # 1-based endings of every run except the last
    endings = np.flatnonzero(bits[1:] != bits[:-1]) + 1
    runs = int(endings.size) + 1

    costs = {
        EncodingKind.MINORITY: min(ones, blen - ones),
        EncodingKind.PLAIN: PLAIN_BYTES,
        EncodingKind.RUN_LENGTH: max(runs - 2, 0),
    }
    kind = min(costs, key=lambda k: (costs[k], _TIE_PRIORITY[k]))

    if kind is EncodingKind.MINORITY:
        special = 1 if ones <= blen - ones else 0
        payload = np.flatnonzero(bits == special).astype(np.uint8).tobytes()
    elif kind is EncodingKind.RUN_LENGTH:
        special = int(bits[0])
        payload = (endings[: runs - 2] - 1).astype(np.uint8).tobytes()
    else:
        special = 0
        packed = np.packbits(bits, bitorder="little").tobytes()
        payload = packed.ljust(PLAIN_BYTES, b"\x00")
    return EncodedBlock(kind, payload, BlockHeader(ones, len(payload), special))


def minority_select(payload: bytes, special: int, c: int, q: int, blen: int = BLOCK_BITS) -> int:
    """Select on a minority-encoded block.

    The stored bytes are 0-based minority positions; payload[x] - x is the
    number of majority bits before the (x+1)-th minority bit.
    """
    if c == special:
        return payload[q - 1] + 1
    x = 0
    l = len(payload)
    while x < l and payload[x] - x < q:
        x += 1
    return x + q


def recover_last_run_ending(payload: bytes, special: int, ones: int, blen: int = BLOCK_BITS) -> int:
    """Solve the one-count equation for r_{m-1} of a run-length block.

    Runs x with (x + special) even hold ones; r_0 = 0 and r_m = blen.
    """
    l = len(payload)
    ends = [0] + [p + 1 for p in payload]
    known_ones = sum(ends[x] - ends[x - 1] for x in range(1, l + 1) if (x + special) % 2 == 0)
    m = l + 2
    if (m + special) % 2 == 0:
        # last run holds ones: known + (blen - r_{m-1}) = ones
        return known_ones + blen - ones
    # run m-1 holds ones: known + (r_{m-1} - r_{m-2}) = ones
    return ones - known_ones + ends[l]


def run_endings(payload: bytes, special: int, ones: int, blen: int = BLOCK_BITS) -> List[int]:
    """Full run-ending list r_1..r_m of a run-length block."""
    ends = [p + 1 for p in payload]
    ends.append(recover_last_run_ending(payload, special, ones, blen))
    ends.append(blen)
    return ends


def runlength_select(payload: bytes, special: int, ones: int, blen: int, c: int, q: int,
                     shortcuts: bool = True) -> int:
    """Select on a run-length block, walking (1-c)-run / c-run pairs.

    Each pairwise step overwrites the answer with the c-run's start plus
    the consumed part, since run endings are absolute positions.
    """
    l = len(payload)
    if l == 0 and shortcuts:
        if c == special:
            return q
        return (ones if special else blen - ones) + q

    def r(idx: int) -> int:
        return payload[idx - 1] + 1

    a = 0
    u = q
    x = 0
    if c == special:
        first_end = r(1) if l else recover_last_run_ending(payload, special, ones, blen)
        step = min(first_end, u)
        a = step
        u -= step
        x = 1
    while x + 1 < l and u > 0:
        step = min(r(x + 2) - r(x + 1), u)
        a = r(x + 1) + step
        u -= step
        x += 2
    if u > 0:
        if x >= l:
            a = c * (blen - ones) + (1 - c) * ones + q
        else:
            a = r(l) + u
    return a


def _plain_words(payload: bytes) -> List[int]:
    return [int.from_bytes(payload[8 * w: 8 * w + 8], "little") for w in range(len(payload) // 8)]


def plain_select(payload: bytes, c: int, q: int, blen: int = BLOCK_BITS) -> int:
    """Select on a plain block with word popcounts and in-word select."""
    residual = q
    for w, word in enumerate(_plain_words(payload)):
        valid = min(64, blen - 64 * w)
        if valid <= 0:
            break
        if not c:
            word = ~word & low_mask(valid)
        cnt = popcount_word(word)
        if residual <= cnt:
            return 64 * w + select_in_word(word, residual)
        residual -= cnt
    raise AssertionError("unreachable: q exceeds the block's count")


def select_in_block(header: BlockHeader, payload: bytes, c: int, q: int,
                    blen: int = BLOCK_BITS, shortcuts: bool = True) -> int:
    """Local select dispatching on the encoding kind."""
    kind = classify(header, blen)
    if kind is EncodingKind.MINORITY:
        return minority_select(payload, header.special, c, q, blen)
    if kind is EncodingKind.PLAIN:
        return plain_select(payload, c, q, blen)
    return runlength_select(payload, header.special, header.ones, blen, c, q, shortcuts)


def block_rank(header: BlockHeader, payload: bytes, c: int, i: int, blen: int = BLOCK_BITS) -> int:
    """Occurrences of c in the first i bits of the decoded block."""
    if i <= 0:
        return 0
    if i >= blen:
        return header.ones if c else blen - header.ones
    kind = classify(header, blen)
    if kind is EncodingKind.MINORITY:
        stored = bisect_left(payload, i)
        ones = stored if header.special else i - stored
    elif kind is EncodingKind.PLAIN:
        ones = 0
        for w, word in enumerate(_plain_words(payload)):
            take = min(64, i - 64 * w)
            if take <= 0:
                break
            ones += popcount_word(word & low_mask(take))
    else:
        ones = 0
        start = 0
        bit = header.special
        for end in run_endings(payload, header.special, header.ones, blen):
            if bit:
                ones += min(end, i) - start
            if end >= i:
                break
            start = end
            bit ^= 1
    return ones if c else i - ones


def block_access(header: BlockHeader, payload: bytes, i: int, blen: int = BLOCK_BITS) -> int:
    """Bit i (1-based) of the decoded block."""
    kind = classify(header, blen)
    if kind is EncodingKind.MINORITY:
        k = bisect_left(payload, i - 1)
        hit = k < len(payload) and payload[k] == i - 1
        return header.special if hit else 1 - header.special
    if kind is EncodingKind.PLAIN:
        return (payload[(i - 1) // 8] >> ((i - 1) % 8)) & 1
    ends = run_endings(payload, header.special, header.ones, blen)
    run = bisect_left(ends, i)
    return header.special if run % 2 == 0 else 1 - header.special


def decode_block(header: BlockHeader, payload: bytes, blen: int = BLOCK_BITS) -> np.ndarray:
    """Expand a block back to a uint8 bit array of length blen."""
    kind = classify(header, blen)
    if kind is EncodingKind.MINORITY:
        out = np.full(blen, 1 - header.special, dtype=np.uint8)
        out[np.frombuffer(payload, dtype=np.uint8).astype(np.int64)] = header.special
        return out
    if kind is EncodingKind.PLAIN:
        return np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")[:blen]
    out = np.empty(blen, dtype=np.uint8)
    start = 0
    bit = header.special
    for end in run_endings(payload, header.special, header.ones, blen):
        out[start:end] = bit
        start = end
        bit ^= 1
    return out
