"""Benchmark orchestration: build, check against an oracle, then time.

Each benchmark runs in four stages:
1. Text -> text index (SA, LCP, BWT, PLCP)
2. Structure build under the configured backend (timed)
3. Oracle pass over a separate batch of at least 1000 queries
4. Timed batch
"""
import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

import numpy as np

from hybsel.bench_cli.models import BenchConfig, BenchRecord, Structure
from hybsel.bench_cli.synthetic import gen_queries, gen_synthetic_text
from hybsel.bitvec_core.plain_vector import PlainBitVector
from hybsel.bitvec_core.protocol import RankSelectSupport
from hybsel.errors import OracleMismatchError
from hybsel.hyb_vector.params import HybParams
from hybsel.hyb_vector.vector import HybVector
from hybsel.text_index.plcp import plcp_bitvector, plcp_query
from hybsel.text_index.suffix_array import SaLcpBundle, build_text_index, bwt_runs
from hybsel.wavelet_tree.tree import Backend, WaveletTree

logger = logging.getLogger(__name__)

Built = Union[RankSelectSupport, WaveletTree]

# keeps the oracle batch apart from the timed batch drawn from the same seed
CHECK_SEED_OFFSET = 7919


@dataclass
class BuiltStructure:
    """A structure ready for querying plus how long it took to build."""
    structure: Built
    build_ms: float


def load_text(config: BenchConfig) -> bytes:
    """Raw bytes of the configured input (file or generator)."""
    if config.input_path is not None:
        return config.input_path.read_bytes()
    spec = config.synthetic
    return gen_synthetic_text(spec.kind, spec.size, config.seed, spec.mutation_rate,
                              spec.sigma, spec.base_size)


def build_bitvector(config: BenchConfig, bits) -> RankSelectSupport:
    if config.backend is Backend.PLAIN:
        return PlainBitVector.build(bits)
    return HybVector.build(bits, HybParams(b_s=config.b_s))


def build_structure(config: BenchConfig, bundle: SaLcpBundle) -> BuiltStructure:
    """Build the PLCP bitvector or the BWT wavelet tree and time it."""
    start = time.perf_counter_ns()
    if config.structure is Structure.PLCP:
        structure: Built = build_bitvector(config, plcp_bitvector(bundle.plcp).to_packed())
    else:
        structure = WaveletTree.build(bundle.bwt, config.shape, config.backend,
                                      HybParams(b_s=config.b_s))
    return BuiltStructure(structure, (time.perf_counter_ns() - start) / 1e6)


def _record(config: BenchConfig, bundle: SaLcpBundle, built: BuiltStructure,
            avg_ns: float, checksum: int) -> BenchRecord:
    return BenchRecord.create(
        text=config.text_name,
        n=bundle.n,
        structure=config.structure.value,
        backend=config.backend.value,
        b_s=config.b_s,
        shape=config.shape.value,
        build_ms=built.build_ms,
        avg_query_ns=avg_ns,
        size_bytes=built.structure.size_in_bytes(),
        bwt_runs=bwt_runs(bundle.bwt),
        checksum=checksum,
    )


def check_plcp(bv: RankSelectSupport, bundle: SaLcpBundle, config: BenchConfig) -> int:
    """Compare plcp_query with the PLCP array on the check batch.

    Raises:
        OracleMismatchError: on the first wrong answer
    """
    queries = gen_queries(config.seed + CHECK_SEED_OFFSET, bundle.n, config.check_queries)
    for j in queries:
        got = plcp_query(bv, j)
        if got != int(bundle.plcp[j - 1]):
            raise OracleMismatchError(f"PLCP[{j}]: structure gave {got}, oracle {bundle.plcp[j - 1]}")
    return len(queries)


def bench_plcp(config: BenchConfig, bundle: Optional[SaLcpBundle] = None) -> BenchRecord:
    """Average PLCP query time over the configured batch.

    Args:
        config: Benchmark configuration (backend, b_s, query counts, seed)
        bundle: Precomputed text index; built from the configured text when omitted

    Returns:
        BenchRecord with timing, size and the answer checksum
    """
    # Step 1: text index
    bundle = bundle or build_text_index(load_text(config))

    # Step 2: PLCP bitvector under the chosen backend
    built = build_structure(config, bundle)
    bv = built.structure

    # Step 3: oracle pass on its own batch; aborts the run on any mismatch
    checked = check_plcp(bv, bundle, config)
    logger.debug("bench-plcp oracle pass: %d queries", checked)

    # Step 4: timed batch
    queries = gen_queries(config.seed, bundle.n, config.queries)
    checksum = 0
    start = time.perf_counter_ns()
    for j in queries:
        checksum += bv.select(1, j) - 2 * j
    elapsed = time.perf_counter_ns() - start
    logger.info("bench-plcp %s backend=%s b_s=%d: %.1f ns/query",
                config.text_name, config.backend.value, config.b_s, elapsed / len(queries))
    return _record(config, bundle, built, elapsed / len(queries), checksum)


def bwt_select_queries(bwt: bytes, seed: int, count: int):
    """(symbol, j) pairs that are valid by construction.

    The symbol is read at a uniform random BWT position; j is uniform in
    [1..occurrences of that symbol].
    """
    arr = np.frombuffer(bwt, dtype=np.uint8)
    freq = np.bincount(arr, minlength=256)
    positions = gen_queries(seed, len(arr), count)
    symbols = arr[np.asarray(positions, dtype=np.int64) - 1]
    rng = np.random.default_rng(seed + 1)
    ranks = np.floor(rng.random(count) * freq[symbols]).astype(np.int64) + 1
    return list(zip(symbols.tolist(), ranks.tolist()))


def check_bwt_select(tree: WaveletTree, bundle: SaLcpBundle, config: BenchConfig) -> int:
    """Compare wavelet-tree select with a scan of the BWT on the check batch.

    Raises:
        OracleMismatchError: on the first wrong answer
    """
    arr = np.frombuffer(bundle.bwt, dtype=np.uint8)
    occurrences: Dict[int, np.ndarray] = {}
    queries = bwt_select_queries(bundle.bwt, config.seed + CHECK_SEED_OFFSET, config.check_queries)
    for c, j in queries:
        if c not in occurrences:
            occurrences[c] = np.flatnonzero(arr == c) + 1
        expected = int(occurrences[c][j - 1])
        got = tree.select(c, j)
        if got != expected:
            raise OracleMismatchError(f"BWT select({c}, {j}): structure gave {got}, oracle {expected}")
    return len(queries)


def bench_bwt_select(config: BenchConfig, bundle: Optional[SaLcpBundle] = None) -> BenchRecord:
    """Average BWT select time through a wavelet tree.

    Args:
        config: Benchmark configuration (shape, backend, b_s, query counts, seed)
        bundle: Precomputed text index; built from the configured text when omitted

    Returns:
        BenchRecord with timing, size and the answer checksum
    """
    # Step 1: text index and BWT
    bundle = bundle or build_text_index(load_text(config))

    # Step 2: wavelet tree of the chosen shape and backend
    built = build_structure(config, bundle)
    tree = built.structure

    # Step 3: oracle pass on its own batch; aborts the run on any mismatch
    checked = check_bwt_select(tree, bundle, config)
    logger.debug("bench-bwt-select oracle pass: %d queries", checked)

    # Step 4: timed batch
    queries = bwt_select_queries(bundle.bwt, config.seed, config.queries)
    checksum = 0
    start = time.perf_counter_ns()
    for c, j in queries:
        checksum += tree.select(c, j)
    elapsed = time.perf_counter_ns() - start
    logger.info("bench-bwt-select %s %s/%s b_s=%d: %.1f ns/query", config.text_name,
                config.shape.value, config.backend.value, config.b_s, elapsed / len(queries))
    return _record(config, bundle, built, elapsed / len(queries), checksum)


def run_sweep(config: BenchConfig, superblock_sizes: List[int]) -> List[BenchRecord]:
    """One record per b_s value, sharing a single text index."""
    bundle = build_text_index(load_text(config))
    bench = bench_plcp if config.structure is Structure.PLCP else bench_bwt_select
    records = []
    for b_s in superblock_sizes:
        run = config.model_copy(update={"b_s": b_s})
        records.append(bench(BenchConfig.model_validate(run.model_dump()), bundle))
    return records
