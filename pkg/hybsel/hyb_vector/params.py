"""Parameters, encoding kinds and header layouts of the hybrid bitvector."""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

BLOCK_BITS = 256
PLAIN_BYTES = BLOCK_BITS // 8
HYPERBLOCK_BLOCKS = 1 << 23
INDEX_WIDTH = 64
DEFAULT_K_PARAM = 128
SUPERBLOCK_CHOICES = (8, 16, 32, 64)

# fixed 8-byte superblock header + 2 bytes per block header, counted in u16 cells
SUPERBLOCK_HEADER_CELLS = 4

_OFFSET_MASK = (1 << 31) - 1
_UNIFORM_BIT = 1 << 31


class EncodingKind(Enum):
    """How a single 256-bit block is stored in A_E."""
    MINORITY = "minority"  # positions of the rarer bit
    RUN_LENGTH = "run_length"  # run endings, last two omitted
    PLAIN = "plain"  # the raw 32 bytes


class HybParams(BaseModel):
    """Shape parameters of a hybrid bitvector."""

    model_config = ConfigDict(frozen=True)

    b: int = Field(BLOCK_BITS, description="Block size in bits")
    b_s: int = Field(16, description="Blocks per superblock")
    b_h: int = Field(HYPERBLOCK_BLOCKS, description="Blocks per hyperblock")
    k_param: int = Field(DEFAULT_K_PARAM, ge=1, description="Select-table space knob")
    w: int = Field(INDEX_WIDTH, description="Width of a lookup-table entry in bits")

    @field_validator("b")
    @classmethod
    def _fixed_block(cls, v: int) -> int:
        if v != BLOCK_BITS:
            raise ValueError(f"block size is fixed at {BLOCK_BITS} bits")
        return v

    @field_validator("b_s")
    @classmethod
    def _superblock_choice(cls, v: int) -> int:
        if v not in SUPERBLOCK_CHOICES:
            raise ValueError(f"b_s must be one of {SUPERBLOCK_CHOICES}")
        return v

    @field_validator("b_h")
    @classmethod
    def _fixed_hyperblock(cls, v: int) -> int:
        if v != HYPERBLOCK_BLOCKS:
            raise ValueError("b_h is fixed at 2**23 blocks")
        return v

    @field_validator("w")
    @classmethod
    def _fixed_width(cls, v: int) -> int:
        if v != INDEX_WIDTH:
            raise ValueError("lookup entries are 64-bit")
        return v

    @property
    def superblock_bits(self) -> int:
        return self.b_s * self.b

    @property
    def hyperblock_bits(self) -> int:
        return self.b_h * self.b


@dataclass(frozen=True)
class BlockHeader:
    """16-bit block header: ones (9 bits), encode_len (6 bits), special (1 bit)."""
    ones: int
    encode_len: int
    special: int

    def pack(self) -> int:
        return self.ones | (self.encode_len << 9) | (self.special << 15)

    @classmethod
    def unpack(cls, cell: int) -> "BlockHeader":
        return cls(ones=cell & 0x1FF, encode_len=(cell >> 9) & 0x3F, special=cell >> 15)


@dataclass(frozen=True)
class SuperblockHeader:
    """Ones and payload bytes before the superblock, local to its hyperblock."""
    local_ones_before: int
    local_payload_offset_before: int
    uniform: bool

    def pack(self) -> Tuple[int, int, int, int]:
        """Four little-endian u16 cells: rank u32, then offset|uniform u32."""
        word = self.local_payload_offset_before | (_UNIFORM_BIT if self.uniform else 0)
        rank = self.local_ones_before
        return rank & 0xFFFF, rank >> 16, word & 0xFFFF, word >> 16

    @classmethod
    def unpack(cls, cells) -> "SuperblockHeader":
        rank = cells[0] | (cells[1] << 16)
        word = cells[2] | (cells[3] << 16)
        return cls(rank, word & _OFFSET_MASK, bool(word & _UNIFORM_BIT))


@dataclass(frozen=True)
class HyperblockHeader:
    """Ones and payload bytes before the hyperblock."""
    ones_before: int
    payload_offset_before: int
