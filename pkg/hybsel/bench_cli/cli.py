"""Command-line entry point: build, bench-plcp, bench-bwt-select, gen-text."""
import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

from hybsel.bench_cli.models import (
    DEFAULT_CHECK_QUERIES,
    DEFAULT_QUERIES,
    BenchConfig,
    BenchRecord,
    Structure,
    SyntheticKind,
    SyntheticSpec,
)
from hybsel.bench_cli.runner import build_structure, load_text, run_sweep
from hybsel.bench_cli.synthetic import gen_synthetic_text
from hybsel.config import configure_logging
from hybsel.hyb_vector.params import SUPERBLOCK_CHOICES
from hybsel.text_index.suffix_array import build_text_index, bwt_runs
from hybsel.wavelet_tree.tree import Backend, WaveletShape

logger = logging.getLogger(__name__)


def write_csv(records: Iterable[BenchRecord], stream: TextIO) -> None:
    """RFC-4180 style CSV with a header row."""
    writer = csv.DictWriter(stream, fieldnames=BenchRecord.columns(), lineterminator="\r\n")
    writer.writeheader()
    for record in records:
        writer.writerow(record.model_dump())


def _emit(records: List[BenchRecord], path: Optional[Path]) -> None:
    if path is None:
        write_csv(records, sys.stdout)
        return
    with open(path, "w", newline="", encoding="utf-8") as handle:
        write_csv(records, handle)
    logger.info("wrote %d rows to %s", len(records), path)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="Raw byte file to index")
    common.add_argument("--synthetic", choices=[k.value for k in SyntheticKind],
                        help="Generate the text instead of reading --input")
    common.add_argument("--size", type=int, default=1 << 20, help="Synthetic text size in bytes")
    common.add_argument("--sigma", type=int, default=4, help="Synthetic alphabet size")
    common.add_argument("--mutation-rate", type=float, default=0.01,
                        help="Per-byte mutation probability of repetitive copies")
    common.add_argument("--base-size", type=int, default=None,
                        help="Length of the repeated base segment")
    common.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.HYB.value)
    common.add_argument("--bs", type=int, nargs="+", choices=SUPERBLOCK_CHOICES, default=[16],
                        help="Blocks per superblock; several values sweep")
    common.add_argument("--shape", choices=[s.value for s in WaveletShape],
                        default=WaveletShape.HUFFMAN.value)
    common.add_argument("--queries", type=int, default=DEFAULT_QUERIES)
    common.add_argument("--check-queries", type=int, default=DEFAULT_CHECK_QUERIES,
                        help="Oracle-checked queries before timing (at least 1000)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--csv", type=Path, default=None, help="CSV output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="Log at INFO level")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="hybsel", description="Hybrid bitvector select benchmarks (PLCP and BWT select)")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", parents=[common], help="Build and serialize a structure")
    build.add_argument("--structure", choices=[s.value for s in Structure],
                       default=Structure.PLCP.value)
    build.add_argument("--out", type=Path, required=True, help="Serialized structure path")

    sub.add_parser("bench-plcp", parents=[common], help="Time PLCP queries")
    sub.add_parser("bench-bwt-select", parents=[common], help="Time BWT select queries")

    gen = sub.add_parser("gen-text", parents=[common], help="Write a synthetic text")
    gen.add_argument("--out", type=Path, required=True, help="Output text path")
    return parser


def config_from_args(args: argparse.Namespace, structure: Structure) -> BenchConfig:
    synthetic = None
    if args.input is None:
        synthetic = SyntheticSpec(
            kind=SyntheticKind(args.synthetic or SyntheticKind.RANDOM.value),
            size=args.size,
            sigma=args.sigma,
            mutation_rate=args.mutation_rate,
            base_size=args.base_size,
        )
    return BenchConfig(
        input_path=args.input,
        synthetic=synthetic,
        structure=structure,
        backend=Backend(args.backend),
        b_s=args.bs[0],
        shape=WaveletShape(args.shape),
        queries=args.queries,
        check_queries=args.check_queries,
        seed=args.seed,
        csv_path=args.csv,
    )


def _cmd_gen_text(args: argparse.Namespace) -> int:
    kind = SyntheticKind(args.synthetic or SyntheticKind.RANDOM.value)
    text = gen_synthetic_text(kind, args.size, args.seed, args.mutation_rate,
                              args.sigma, args.base_size)
    args.out.write_bytes(text)
    if logger.isEnabledFor(logging.INFO):
        bundle = build_text_index(text)
        logger.info("generated %s text: n=%d sigma=%d r=%d n/r=%.2f", kind.value, len(text),
                    args.sigma, bwt_runs(bundle.bwt), bundle.n_over_r())
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    config = config_from_args(args, Structure(args.structure))
    bundle = build_text_index(load_text(config))
    built = build_structure(config, bundle)
    data = built.structure.serialize()
    args.out.write_bytes(data)
    print(f"{config.structure.value} {config.backend.value}: {len(data)} bytes "
          f"({len(data) / bundle.n:.4f} of text), built in {built.build_ms:.1f} ms")
    return 0


def _cmd_bench(args: argparse.Namespace, structure: Structure) -> int:
    config = config_from_args(args, structure)
    sizes = args.bs if config.backend is Backend.HYB else args.bs[:1]
    _emit(run_sweep(config, sizes), config.csv_path)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging("INFO" if args.verbose else None)
        if args.command == "gen-text":
            return _cmd_gen_text(args)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "bench-plcp":
            return _cmd_bench(args, Structure.PLCP)
        return _cmd_bench(args, Structure.BWT_SELECT)
    except ValueError as exc:  # HybselError and pydantic validation errors
        print(f"hybsel: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"hybsel: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
