"""Benchmark harness: cases, input generation, timing, and output."""

from .cases import (
    CG_CONFIGS,
    DEFAULT_SIZE,
    DEFAULT_VARIANT,
    FFT_SIZES,
    KERNELS,
    MXM_SIZES,
    SPARSE_CONFIGS,
    VARIANTS,
    BenchCase,
    BenchResult,
    flop_count,
    paper_defaults,
)
from .csvio import HEADER, csv_read, csv_write, csv_write_rows, result_rows
from .generators import (
    gen_banded_spd,
    gen_dense,
    gen_signal,
    gen_sparse,
    gen_vector,
)
from .mm import mm_read
from .report import render_report, render_rows
from .rng import SplitMix64
from .runner import capture_case, run_case, run_cases, sweep_workers

__all__ = [
    "BenchCase",
    "BenchResult",
    "CG_CONFIGS",
    "DEFAULT_SIZE",
    "DEFAULT_VARIANT",
    "FFT_SIZES",
    "HEADER",
    "KERNELS",
    "MXM_SIZES",
    "SPARSE_CONFIGS",
    "SplitMix64",
    "VARIANTS",
    "capture_case",
    "csv_read",
    "csv_write",
    "csv_write_rows",
    "flop_count",
    "gen_banded_spd",
    "gen_dense",
    "gen_signal",
    "gen_sparse",
    "gen_vector",
    "mm_read",
    "paper_defaults",
    "render_report",
    "render_rows",
    "result_rows",
    "run_case",
    "run_cases",
    "sweep_workers",
]
