"""Tests for the synthetic generators, benchmark runners and the command line."""
import csv

import numpy as np
import pytest
from pydantic import ValidationError

from hybsel.bench_cli import (
    BenchConfig,
    BenchRecord,
    Structure,
    SyntheticKind,
    SyntheticSpec,
    bench_bwt_select,
    bench_plcp,
    build_structure,
    gen_queries,
    gen_synthetic_text,
    run_sweep,
)
from hybsel.bench_cli import runner
from hybsel.bench_cli.cli import main
from hybsel.bench_cli.models import MIN_CHECK_QUERIES
from hybsel.bench_cli.runner import bwt_select_queries
from hybsel.errors import InputError, OracleMismatchError
from hybsel.hyb_vector import HybVector
from hybsel.text_index import build_text_index, bwt_runs, plcp_query, plcp_values
from hybsel.wavelet_tree import Backend, WaveletShape, WaveletTree


def small_config(**overrides) -> BenchConfig:
    fields = dict(
        synthetic=SyntheticSpec(kind=SyntheticKind.REPETITIVE, size=6000, base_size=500),
        queries=1500,
        check_queries=1000,
        seed=3,
    )
    fields.update(overrides)
    return BenchConfig(**fields)


class TestSynthetic:
    """Test text and query generation."""

    def test_random_is_deterministic(self):
        a = gen_synthetic_text(SyntheticKind.RANDOM, 16, seed=1, sigma=4)
        b = gen_synthetic_text(SyntheticKind.RANDOM, 16, seed=1, sigma=4)
        assert a == b and len(a) == 16
        assert len(set(a)) <= 4 and 0 not in a

    def test_repetitive_without_mutations_repeats_base(self):
        text = gen_synthetic_text(SyntheticKind.REPETITIVE, 1000, seed=2, base_size=100)
        assert text == text[:100] * 10

    def test_repetitive_text_has_higher_n_over_r(self):
        size = 40_000
        random = build_text_index(gen_synthetic_text(SyntheticKind.RANDOM, size, seed=4))
        repetitive = build_text_index(
            gen_synthetic_text(SyntheticKind.REPETITIVE, size, seed=4, mutation_rate=0.01))
        assert repetitive.n_over_r() > 2 * random.n_over_r()

    def test_invalid_rate(self):
        with pytest.raises(InputError):
            gen_synthetic_text(SyntheticKind.REPETITIVE, 100, seed=0, mutation_rate=1.5)

    def test_queries(self):
        assert gen_queries(7, 1, 5) == [1, 1, 1, 1, 1]
        assert gen_queries(7, 50, 20) == gen_queries(7, 50, 20)
        sample = gen_queries(1, 10**6, 10**5)
        assert min(sample) >= 1 and max(sample) <= 10**6
        assert abs(np.mean(sample) - 5 * 10**5) < 0.05 * 5 * 10**5

    def test_bwt_select_queries_are_valid(self):
        bwt = b"annb\x00aa"
        for c, j in bwt_select_queries(bwt, 0, 200):
            assert 1 <= j <= bwt.count(bytes([c]))


class TestConfig:
    """Test the benchmark models."""

    def test_requires_exactly_one_source(self, tmp_path):
        with pytest.raises(ValidationError):
            BenchConfig()
        with pytest.raises(ValidationError):
            BenchConfig(input_path=tmp_path / "x", synthetic=SyntheticSpec())

    def test_rejects_bad_superblock_size(self):
        with pytest.raises(ValidationError):
            small_config(b_s=10)
        with pytest.raises(ValidationError):
            small_config(queries=0)
        with pytest.raises(ValidationError):
            small_config(check_queries=MIN_CHECK_QUERIES - 1)

    def test_check_batch_defaults_to_minimum(self):
        config = BenchConfig(synthetic=SyntheticSpec(), queries=10)
        assert config.check_queries == MIN_CHECK_QUERIES == 1000

    def test_relative_size(self):
        record = BenchRecord.create(text="t", n=200, structure="plcp", backend="hyb", b_s=16,
                                    shape="huff", build_ms=1.0, avg_query_ns=2.0,
                                    size_bytes=50, bwt_runs=40, checksum=0)
        assert record.relative_size == 0.25
        assert record.n_over_r == 5.0


class TestBenchPlcp:
    """Test the PLCP benchmark."""

    def test_banana_plain(self, tmp_path):
        path = tmp_path / "banana"
        path.write_bytes(b"banana")
        config = BenchConfig(input_path=path, backend=Backend.PLAIN, queries=50)
        built = build_structure(config, build_text_index(b"banana"))
        assert plcp_values(built.structure).tolist() == [0, 3, 2, 1, 0, 0, 0]
        record = bench_plcp(config)
        assert record.n == 7 and record.text == "banana"

    def test_backends_agree(self):
        hyb = bench_plcp(small_config(backend=Backend.HYB))
        plain = bench_plcp(small_config(backend=Backend.PLAIN))
        assert hyb.checksum == plain.checksum
        assert hyb.size_bytes < plain.size_bytes
        assert hyb.relative_size == hyb.size_bytes / hyb.n

    def test_sweep(self):
        records = run_sweep(small_config(), [8, 64])
        assert [r.b_s for r in records] == [8, 64]
        assert records[0].checksum == records[1].checksum


class TestBenchBwtSelect:
    """Test the BWT select benchmark."""

    def test_shapes_agree(self):
        huff = bench_bwt_select(small_config(structure=Structure.BWT_SELECT))
        blcd = bench_bwt_select(small_config(structure=Structure.BWT_SELECT,
                                             shape=WaveletShape.BALANCED))
        assert huff.checksum == blcd.checksum

    def test_hybrid_tree_is_smaller(self):
        config = small_config(
            structure=Structure.BWT_SELECT,
            synthetic=SyntheticSpec(kind=SyntheticKind.REPETITIVE, size=60_000, base_size=2000),
        )
        hyb = bench_bwt_select(config)
        plain = bench_bwt_select(config.model_copy(update={"backend": Backend.PLAIN}))
        assert hyb.checksum == plain.checksum
        assert hyb.size_bytes < plain.size_bytes
        assert hyb.bwt_runs == plain.bwt_runs


class TestCli:
    """Test the command-line entry point."""

    def test_bench_plcp_csv(self, tmp_path):
        out = tmp_path / "plcp.csv"
        code = main(["bench-plcp", "--synthetic", "random", "--size", "3000", "--queries", "500",
                     "--bs", "8", "32", "--csv", str(out)])
        assert code == 0
        rows = list(csv.DictReader(out.open(newline="")))
        assert [int(r["b_s"]) for r in rows] == [8, 32]
        assert list(rows[0]) == BenchRecord.columns()
        assert rows[0]["checksum"] == rows[1]["checksum"]

    def test_bench_bwt_select_plain(self, tmp_path, capsys):
        code = main(["bench-bwt-select", "--synthetic", "repetitive", "--size", "3000",
                     "--backend", "plain", "--bs", "8", "32", "--queries", "300"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        # the plain backend ignores b_s, so only one row
        assert len(lines) == 2 and lines[0].startswith("text,n,structure")

    def test_gen_text_and_build(self, tmp_path):
        text_path = tmp_path / "text.bin"
        assert main(["gen-text", "--synthetic", "repetitive", "--size", "5000",
                     "--out", str(text_path)]) == 0
        assert len(text_path.read_bytes()) == 5000

        plcp_path = tmp_path / "plcp.bin"
        assert main(["build", "--input", str(text_path), "--structure", "plcp",
                     "--out", str(plcp_path)]) == 0
        hv = HybVector.deserialize(plcp_path.read_bytes())
        bundle = build_text_index(text_path.read_bytes())
        assert np.array_equal(plcp_values(hv), bundle.plcp)

        wt_path = tmp_path / "wt.bin"
        assert main(["build", "--input", str(text_path), "--structure", "bwt-select",
                     "--shape", "blcd", "--out", str(wt_path)]) == 0
        tree = WaveletTree.deserialize(wt_path.read_bytes())
        assert bytes(tree.access(i) for i in range(1, 50)) == bundle.bwt[:49]
        assert bwt_runs(bundle.bwt) >= 1

    def test_rejects_interior_sentinel(self, tmp_path, capsys):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"ab\x00cd")
        assert main(["bench-plcp", "--input", str(path), "--queries", "10"]) == 2
        assert "interior" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["bench-plcp", "--input", str(tmp_path / "nope"), "--queries", "10"]) == 1


class TestOraclePass:
    """Test that every run checks a separate batch before timing."""

    def test_plcp_checks_full_batch_with_few_timed_queries(self, monkeypatch):
        calls = []

        def counting_query(bv, j):
            calls.append(j)
            return plcp_query(bv, j)

        monkeypatch.setattr(runner, "plcp_query", counting_query)
        assert main(["bench-plcp", "--synthetic", "random", "--size", "3000",
                     "--queries", "10"]) == 0
        assert len(calls) >= MIN_CHECK_QUERIES

    def test_bwt_select_checks_full_batch_with_few_timed_queries(self, monkeypatch):
        calls = []
        original = WaveletTree.select

        def counting_select(tree, c, j):
            calls.append((c, j))
            return original(tree, c, j)

        monkeypatch.setattr(WaveletTree, "select", counting_select)
        assert main(["bench-bwt-select", "--synthetic", "repetitive", "--size", "3000",
                     "--queries", "10"]) == 0
        assert len(calls) >= MIN_CHECK_QUERIES + 10

    def test_check_batch_differs_from_timed_batch(self):
        config = small_config()
        timed = gen_queries(config.seed, 6001, config.check_queries)
        checked = gen_queries(config.seed + runner.CHECK_SEED_OFFSET, 6001, config.check_queries)
        assert timed != checked

    def test_wrong_plcp_answer_aborts(self, monkeypatch):
        monkeypatch.setattr(runner, "plcp_query", lambda bv, j: plcp_query(bv, j) + 1)
        with pytest.raises(OracleMismatchError):
            bench_plcp(small_config())

    def test_wrong_select_answer_exits_with_code_2(self, monkeypatch, capsys):
        original = WaveletTree.select
        monkeypatch.setattr(WaveletTree, "select", lambda tree, c, j: original(tree, c, j) + 1)
        assert main(["bench-bwt-select", "--synthetic", "random", "--size", "2000",
                     "--queries", "10"]) == 2
        assert "oracle" in capsys.readouterr().err

    def test_cli_rejects_small_check_batch(self):
        assert main(["bench-plcp", "--synthetic", "random", "--size", "2000",
                     "--check-queries", "999"]) == 2
