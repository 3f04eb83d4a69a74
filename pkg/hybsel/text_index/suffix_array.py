"""Suffix array, LCP array and BWT of a sentinel-terminated byte text.

Arrays are numpy int64 with index 0 holding entry 1; suffix array values
are 1-based text positions.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hybsel.config import read_max_input_bytes
from hybsel.errors import InputError
from hybsel.text_index.plcp import plcp_array

logger = logging.getLogger(__name__)

SENTINEL = 0x00


def prepare_text(raw: bytes, max_bytes: Optional[int] = None) -> bytes:
    """Apply the sentinel rule: append 0x00 if missing, reject interior 0x00."""
    limit = max_bytes if max_bytes is not None else read_max_input_bytes()
    text = bytes(raw)
    if not text or text[-1] != SENTINEL:
        text += bytes([SENTINEL])
    if text.find(bytes([SENTINEL])) != len(text) - 1:
        raise InputError("input contains an interior 0x00 byte; the sentinel must be unique")
    if len(text) > limit:
        raise InputError(f"input of {len(text)} bytes exceeds the {limit}-byte cap")
    return text


def suffix_array(text: bytes) -> np.ndarray:
    """Suffix array by prefix doubling (O(n log^2 n) with numpy lexsort)."""
    n = len(text)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(text, dtype=np.uint8).astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        first_key = rank[sa]
        second_key = second[sa]
        changed = (first_key[1:] != first_key[:-1]) | (second_key[1:] != second_key[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.concatenate(([0], np.cumsum(changed)))
        rank = new_rank
        if rank[sa[-1]] == n - 1:
            break
        k *= 2
    return sa.astype(np.int64) + 1


def inverse_suffix_array(sa: np.ndarray) -> np.ndarray:
    """isa[j] = i such that sa[i] = j (both 1-based, stored at index j-1)."""
    isa = np.empty(len(sa), dtype=np.int64)
    isa[sa - 1] = np.arange(1, len(sa) + 1, dtype=np.int64)
    return isa


def lcp_array(text: bytes, sa: np.ndarray) -> np.ndarray:
    """LCP array by the linear-time method walking suffixes in text order."""
    n = len(text)
    lcp = np.zeros(n, dtype=np.int64)
    if n == 0:
        return lcp
    isa = (inverse_suffix_array(sa) - 1).tolist()
    order = (sa - 1).tolist()
    h = 0
    for pos in range(n):
        i = isa[pos]
        if i == 0:
            h = 0
            continue
        prev = order[i - 1]
        while pos + h < n and prev + h < n and text[pos + h] == text[prev + h]:
            h += 1
        lcp[i] = h
        if h:
            h -= 1
    return lcp


def bwt(text: bytes, sa: np.ndarray) -> bytes:
    """bwt[i] = S[n] if sa[i] = 1 else S[sa[i] - 1]."""
    n = len(text)
    if n == 0:
        return b""
    chars = np.frombuffer(text, dtype=np.uint8)
    prev = sa - 2
    prev[prev < 0] = n - 1
    return chars[prev].tobytes()


def bwt_runs(data: bytes) -> int:
    """Number of maximal equal-symbol runs r."""
    if not data:
        return 0
    arr = np.frombuffer(data, dtype=np.uint8)
    return int(np.count_nonzero(arr[1:] != arr[:-1])) + 1


@dataclass
class SaLcpBundle:
    """Everything the two applications derive from one text."""
    text: bytes
    sa: np.ndarray
    isa: np.ndarray
    lcp: np.ndarray
    bwt: bytes
    plcp: np.ndarray

    @property
    def n(self) -> int:
        return len(self.text)

    def n_over_r(self) -> float:
        runs = bwt_runs(self.bwt)
        return self.n / runs if runs else 0.0


def build_text_index(raw: bytes, max_bytes: Optional[int] = None) -> SaLcpBundle:
    """Prepare the text and compute SA, ISA, LCP, BWT and PLCP."""
    text = prepare_text(raw, max_bytes)
    sa = suffix_array(text)
    lcp = lcp_array(text, sa)
    bundle = SaLcpBundle(
        text=text,
        sa=sa,
        isa=inverse_suffix_array(sa),
        lcp=lcp,
        bwt=bwt(text, sa),
        plcp=plcp_array(sa, lcp),
    )
    logger.info("text index built: n=%d bwt_runs=%d", bundle.n, bwt_runs(bundle.bwt))
    return bundle
