"""Wavelet trees over byte strings with pluggable bitvector backends.

A symbol's code is its root-to-leaf path (0 = left). Each internal node
keeps a bitvector over the symbols routed through it, built by whichever
backend the tree was given.
"""
import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from hybsel.bitvec_core.packed_bits import PackedBits
from hybsel.bitvec_core.plain_vector import PlainBitVector
from hybsel.bitvec_core.protocol import RankSelectSupport
from hybsel.errors import FormatError, InputError, QueryError
from hybsel.hyb_vector.params import HybParams
from hybsel.hyb_vector.vector import HybVector
from hybsel.serialization import ByteReader, ByteWriter

logger = logging.getLogger(__name__)

WT_MAGIC = b"HYBSWT01"
WT_VERSION = 1

Code = str
BackendFactory = Callable[[PackedBits], RankSelectSupport]


class WaveletShape(Enum):
    """Tree shapes; values are the command-line spellings."""
    BALANCED = "blcd"
    HUFFMAN = "huff"


class Backend(Enum):
    """Bitvector implementation used for node bitvectors."""
    PLAIN = "plain"
    HYB = "hyb"


_SHAPE_TAGS = {WaveletShape.BALANCED: 0, WaveletShape.HUFFMAN: 1}
_BACKEND_TAGS = {Backend.PLAIN: 0, Backend.HYB: 1}


def backend_factory(backend: Backend, params: Optional[HybParams] = None) -> BackendFactory:
    """Constructor turning PackedBits into the chosen bitvector."""
    if backend is Backend.PLAIN:
        return PlainBitVector.build
    return lambda bits: HybVector.build(bits, params)


def _read_backend(backend: Backend, reader: ByteReader) -> RankSelectSupport:
    if backend is Backend.PLAIN:
        return PlainBitVector.read_from(reader)
    return HybVector.read_from(reader)


def balanced_codes(symbols: Sequence[int]) -> Dict[int, Code]:
    """Codes splitting the sorted symbol list in half at every level."""
    codes: Dict[int, Code] = {}

    def split(part: List[int], prefix: str) -> None:
        if len(part) == 1:
            codes[part[0]] = prefix
            return
        mid = len(part) // 2
        split(part[:mid], prefix + "0")
        split(part[mid:], prefix + "1")

    ordered = sorted(set(symbols))
    if ordered:
        split(ordered, "")
    return codes


def huffman_codes(frequencies: Dict[int, int]) -> Dict[int, Code]:
    """Huffman codes; ties break on (frequency, smallest symbol in subtree)."""
    if not frequencies:
        return {}
    heap = [(freq, sym, sym) for sym, freq in sorted(frequencies.items())]
    heapq.heapify(heap)
    while len(heap) > 1:
        f1, s1, left = heapq.heappop(heap)
        f2, s2, right = heapq.heappop(heap)
        heapq.heappush(heap, (f1 + f2, min(s1, s2), (left, right)))

    codes: Dict[int, Code] = {}

    def walk(node, prefix: str) -> None:
        if isinstance(node, tuple):
            walk(node[0], prefix + "0")
            walk(node[1], prefix + "1")
        else:
            codes[node] = prefix

    walk(heap[0][2], "")
    return codes


@dataclass
class WaveletNode:
    length: int
    bitvector: Optional[RankSelectSupport] = None
    left: Optional["WaveletNode"] = None
    right: Optional["WaveletNode"] = None
    symbol: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.symbol is not None

    def child(self, bit: int) -> "WaveletNode":
        return self.right if bit else self.left


class WaveletTree:
    """String rank/select/access reduced to node bitvector rank/select."""

    def __init__(self, root: WaveletNode, codes: Dict[int, Code], shape: WaveletShape,
                 backend: Backend):
        self.root = root
        self.codes = codes
        self.shape = shape
        self.backend = backend
        self.n = root.length
        self.alphabet = sorted(codes)

    @classmethod
    def build(cls, data: bytes, shape: WaveletShape = WaveletShape.HUFFMAN,
              backend: Backend = Backend.PLAIN, params: Optional[HybParams] = None) -> "WaveletTree":
        """Build a tree of the given shape over `data`."""
        if not data:
            raise InputError("wavelet tree input must be nonempty")
        seq = np.frombuffer(bytes(data), dtype=np.uint8)
        freq = np.bincount(seq, minlength=256)
        present = {int(s): int(freq[s]) for s in np.flatnonzero(freq)}
        codes = huffman_codes(present) if shape is WaveletShape.HUFFMAN else balanced_codes(present)
        factory = backend_factory(backend, params)
        root = cls._build_node(seq, sorted(present), codes, 0, factory)
        tree = cls(root, codes, shape, backend)
        logger.info("wavelet tree built: n=%d sigma=%d shape=%s backend=%s bits=%d",
                    tree.n, len(codes), shape.value, backend.value, tree.total_bits())
        return tree

    @classmethod
    def _build_node(cls, seq: np.ndarray, symbols: List[int], codes: Dict[int, Code],
                    depth: int, factory: BackendFactory) -> WaveletNode:
        if len(symbols) == 1:
            return WaveletNode(length=len(seq), symbol=symbols[0])
        route = np.zeros(256, dtype=np.uint8)
        for sym in symbols:
            route[sym] = codes[sym][depth] == "1"
        bits = route[seq]
        right = bits.astype(bool)
        return WaveletNode(
            length=len(seq),
            bitvector=factory(PackedBits.from_bits(bits)),
            left=cls._build_node(seq[~right], [s for s in symbols if not route[s]],
                                 codes, depth + 1, factory),
            right=cls._build_node(seq[right], [s for s in symbols if route[s]],
                                  codes, depth + 1, factory),
        )

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        """S[i], walking down by access + rank."""
        if not 1 <= i <= self.n:
            raise QueryError(f"access position {i} outside [1..{self.n}]")
        node = self.root
        while not node.is_leaf:
            bit = node.bitvector.access(i)
            i = node.bitvector.rank(bit, i)
            node = node.child(bit)
        return node.symbol

    def rank(self, c: int, i: int) -> int:
        """Occurrences of symbol c in S[1..i]; 0 for absent symbols."""
        if not 0 <= i <= self.n:
            raise QueryError(f"rank position {i} outside [0..{self.n}]")
        code = self.codes.get(c)
        if code is None:
            return 0
        node = self.root
        for ch in code:
            bit = 1 if ch == "1" else 0
            i = node.bitvector.rank(bit, i)
            node = node.child(bit)
        return i

    def count(self, c: int) -> int:
        return self.rank(c, self.n)

    def select(self, c: int, j: int) -> int:
        """Position of the j-th c, walking leaf to root with bitvector select."""
        code = self.codes.get(c)
        if code is None:
            raise QueryError(f"symbol {c} does not occur")
        path = []
        node = self.root
        for ch in code:
            bit = 1 if ch == "1" else 0
            path.append((node, bit))
            node = node.child(bit)
        if not 1 <= j <= node.length:
            raise QueryError(f"select({c}, {j}) outside [1..{node.length}]")
        for parent, bit in reversed(path):
            j = parent.bitvector.select(bit, j)
        return j

    def nodes(self) -> List[WaveletNode]:
        """Nodes in preorder."""
        out: List[WaveletNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def total_bits(self) -> int:
        """Summed length of all node bitvectors."""
        return sum(node.length for node in self.nodes() if not node.is_leaf)

    # serialization

    def serialize(self) -> bytes:
        out = ByteWriter()
        out.raw(WT_MAGIC)
        out.u32(WT_VERSION)
        out.u8(_SHAPE_TAGS[self.shape])
        out.u8(_BACKEND_TAGS[self.backend])
        out.u64(self.n)
        out.u16(len(self.alphabet))
        out.raw(bytes(self.alphabet))
        for sym in self.alphabet:
            code = self.codes[sym]
            out.u8(sym)
            out.u16(len(code))
            out.raw(_pack_code(code))
        for node in self.nodes():
            if node.is_leaf:
                out.u8(0)
                out.u8(node.symbol)
            else:
                out.u8(1)
                out.u64(node.length)
                out.raw(node.bitvector.serialize())
        return out.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "WaveletTree":
        reader = ByteReader(data)
        reader.expect_magic(WT_MAGIC)
        reader.expect_version(WT_VERSION)
        shape = _lookup(_SHAPE_TAGS, reader.u8(), "shape")
        backend = _lookup(_BACKEND_TAGS, reader.u8(), "backend")
        n = reader.u64()
        sigma = reader.u16()
        alphabet = list(reader.raw(sigma))
        codes: Dict[int, Code] = {}
        for _ in range(sigma):
            sym = reader.u8()
            length = reader.u16()
            codes[sym] = _unpack_code(reader.raw(-(-length // 8)), length)
        if sorted(codes) != alphabet:
            raise FormatError("code table does not match the alphabet")

        def read_node() -> WaveletNode:
            tag = reader.u8()
            if tag == 0:
                return WaveletNode(length=0, symbol=reader.u8())
            if tag != 1:
                raise FormatError(f"unknown node tag {tag}")
            length = reader.u64()
            bitvector = _read_backend(backend, reader)
            left = read_node()
            right = read_node()
            left.length = bitvector.count(0)
            right.length = bitvector.count(1)
            return WaveletNode(length=length, bitvector=bitvector, left=left, right=right)

        root = read_node()
        root.length = n
        if not reader.at_end():
            raise FormatError("trailing bytes after wavelet tree")
        return cls(root, codes, shape, backend)

    def size_in_bytes(self) -> int:
        """Exact length of serialize()."""
        size = len(WT_MAGIC) + 4 + 1 + 1 + 8 + 2 + len(self.alphabet)
        size += sum(1 + 2 + -(-len(code) // 8) for code in self.codes.values())
        for node in self.nodes():
            size += 2 if node.is_leaf else 1 + 8 + node.bitvector.size_in_bytes()
        return size


def _pack_code(code: Code) -> bytes:
    if not code:
        return b""
    bits = np.frombuffer(code.encode("ascii"), dtype=np.uint8) - ord("0")
    return np.packbits(bits, bitorder="little").tobytes()


def _unpack_code(data: bytes, length: int) -> Code:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")[:length]
    return "".join("1" if b else "0" for b in bits)


def _lookup(tags: dict, value: int, what: str):
    for key, tag in tags.items():
        if tag == value:
            return key
    raise FormatError(f"unknown {what} tag {value}")
