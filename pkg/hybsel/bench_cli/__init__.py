from .models import BenchConfig, BenchRecord, Structure, SyntheticKind, SyntheticSpec
from .runner import bench_bwt_select, bench_plcp, build_structure, run_sweep
from .synthetic import gen_queries, gen_synthetic_text

__all__ = [
    'BenchConfig',
    'BenchRecord',
    'Structure',
    'SyntheticKind',
    'SyntheticSpec',
    'bench_bwt_select',
    'bench_plcp',
    'build_structure',
    'gen_queries',
    'gen_synthetic_text',
    'run_sweep',
]
