"""Benchmark configuration and result records."""
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from hybsel.hyb_vector.params import SUPERBLOCK_CHOICES
from hybsel.wavelet_tree.tree import Backend, WaveletShape

DEFAULT_QUERIES = 100_000
MIN_CHECK_QUERIES = 1_000
DEFAULT_CHECK_QUERIES = MIN_CHECK_QUERIES


class Structure(Enum):
    """Which application a benchmark exercises."""
    PLCP = "plcp"
    BWT_SELECT = "bwt-select"


class SyntheticKind(Enum):
    RANDOM = "random"
    REPETITIVE = "repetitive"


class SyntheticSpec(BaseModel):
    """Parameters of a generated text."""

    kind: SyntheticKind = Field(SyntheticKind.RANDOM, description="Generator family")
    size: int = Field(1 << 20, ge=1, description="Text length in bytes")
    sigma: int = Field(4, ge=1, le=255, description="Alphabet size")
    mutation_rate: float = Field(0.01, description="Per-byte mutation probability per copy")
    base_size: Optional[int] = Field(None, ge=1, description="Repeated base segment length")

    @property
    def name(self) -> str:
        return f"synthetic-{self.kind.value}-{self.size}"


class BenchConfig(BaseModel):
    """One benchmark run: input, structure, backend and query plan."""

    input_path: Optional[Path] = Field(None, description="Raw byte file to index")
    synthetic: Optional[SyntheticSpec] = Field(None, description="Generated text instead of a file")
    structure: Structure = Field(Structure.PLCP, description="plcp | bwt-select")
    backend: Backend = Field(Backend.HYB, description="Bitvector backend")
    b_s: int = Field(16, description="Blocks per superblock (hybrid backend)")
    shape: WaveletShape = Field(WaveletShape.HUFFMAN, description="Wavelet tree shape")
    queries: int = Field(DEFAULT_QUERIES, ge=1, description="Timed queries")
    check_queries: int = Field(DEFAULT_CHECK_QUERIES, ge=MIN_CHECK_QUERIES,
                               description="Oracle-checked queries, drawn apart from the timed batch")
    seed: int = Field(0, description="Seed fixing the query sequence")
    csv_path: Optional[Path] = Field(None, description="CSV output (stdout when unset)")

    @field_validator("b_s")
    @classmethod
    def _superblock_choice(cls, v: int) -> int:
        if v not in SUPERBLOCK_CHOICES:
            raise ValueError(f"b_s must be one of {SUPERBLOCK_CHOICES}")
        return v

    @model_validator(mode="after")
    def _one_source(self) -> "BenchConfig":
        if (self.input_path is None) == (self.synthetic is None):
            raise ValueError("exactly one of input_path or synthetic must be given")
        return self

    @property
    def text_name(self) -> str:
        return self.input_path.name if self.input_path is not None else self.synthetic.name


class BenchRecord(BaseModel):
    """One CSV row."""

    text: str
    n: int
    structure: str
    backend: str
    b_s: int
    shape: str
    build_ms: float
    avg_query_ns: float
    size_bytes: int
    relative_size: float
    bwt_runs: int
    n_over_r: float
    checksum: int

    @classmethod
    def create(cls, *, n: int, size_bytes: int, bwt_runs: int, **fields) -> "BenchRecord":
        """Fill the derived columns (size / n and n / r)."""
        return cls(
            n=n,
            size_bytes=size_bytes,
            relative_size=size_bytes / n,
            bwt_runs=bwt_runs,
            n_over_r=n / bwt_runs if bwt_runs else 0.0,
            **fields,
        )

    @classmethod
    def columns(cls):
        return list(cls.model_fields)
