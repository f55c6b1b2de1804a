"""Benchmark harness: the ``bench`` command line tool and its report format."""

from advkit.bench.report import BenchmarkReport, ComparisonVerdict, compare_reports
from advkit.bench.runner import run_benchmark
from advkit.bench.semver import SemVersion

__all__ = [
    "BenchmarkReport",
    "ComparisonVerdict",
    "SemVersion",
    "compare_reports",
    "run_benchmark",
]
