"""Benchmark harness: inputs, cases, files, and the case runner."""

import numpy as np
import pytest

from parabl.errors import FormatError, ParablError, ParameterError, ParseError
from parabl.harness.cases import (
    CG_CONFIGS,
    FFT_SIZES,
    MXM_SIZES,
    SPARSE_CONFIGS,
    BenchCase,
    BenchResult,
    flop_count,
    paper_defaults,
)
from parabl.harness.csvio import csv_read, csv_write, csv_write_rows, result_rows
from parabl.harness.generators import (
    gen_banded_spd,
    gen_dense,
    gen_signal,
    gen_sparse,
    gen_vector,
)
from parabl.harness.mm import mm_read
from parabl.harness.report import render_report, render_rows
from parabl.harness.rng import SplitMix64
from parabl.harness.runner import run_case, sweep_workers

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


# --- seeded stream ---

def test_stream_known_first_output():
    assert SplitMix64(0).next_u64() == 16294208416658607535


def test_bulk_matches_scalar_sequence():
    for seed in (0, 12345, 2**63):
        scalar = SplitMix64(seed)
        want = [scalar.next_u64() for _ in range(10)]
        got = SplitMix64(seed).fill_u64(10)
        assert got.tolist() == want


def test_stream_continuation():
    rng = SplitMix64(7)
    first = rng.fill_u64(3)
    second = rng.fill_u64(4)
    whole = SplitMix64(7).fill_u64(7)
    assert np.concatenate([first, second]).tolist() == whole.tolist()
    assert rng.next_u64() == SplitMix64(7).fill_u64(8)[-1]


def test_doubles():
    rng = SplitMix64(3)
    d = rng.fill_doubles(1000)
    assert np.all(d >= 0.0) and np.all(d < 1.0)
    scalar = SplitMix64(3)
    assert [scalar.next_double() for _ in range(4)] == d[:4].tolist()


def test_seed_is_masked_to_64_bits():
    assert SplitMix64(2**64 + 5).next_u64() == SplitMix64(5).next_u64()
    assert SplitMix64(-1).next_u64() == SplitMix64(2**64 - 1).next_u64()


def test_zero_count_and_rejections():
    rng = SplitMix64(9)
    assert rng.fill_u64(0).shape == (0,)
    assert rng.next_u64() == SplitMix64(9).next_u64()  # state untouched
    with pytest.raises(ValueError):
        rng.fill_u64(-1)


# --- input builders ---

def test_gen_dense_layout():
    m = gen_dense(3, seed=9)
    assert m.shape == (3, 3)
    assert m.reshape(-1).tolist() == SplitMix64(9).fill_doubles(9).tolist()
    assert m[0, 0] == SplitMix64(9).next_double()


def test_gen_vector():
    v = gen_vector(64, seed=5)
    assert v.shape == (64,)
    assert np.all(v >= 0.0) and np.all(v < 1.0)


def test_gen_signal_interleaves_one_stream():
    n = 5
    sig = gen_signal(n, seed=3)
    d = 2.0 * SplitMix64(3).fill_doubles(2 * n) - 1.0
    assert np.array_equal(sig.real, d[0::2])
    assert np.array_equal(sig.imag, d[1::2])


def test_gen_sparse_structure():
    n = 100
    vals, cols, ptrs = gen_sparse(n, 3.5, seed=0)
    assert vals.shape == (400,)  # 3.5 rounds to 4 columns per row
    assert ptrs.tolist() == list(range(0, 401, 4))
    assert np.all(vals >= -1.0) and np.all(vals < 1.0)
    for r in range(n):
        row_cols = cols[ptrs[r] : ptrs[r + 1]].tolist()
        assert row_cols == sorted(set(row_cols))
        assert 0 <= row_cols[0] and row_cols[-1] < n


def test_gen_sparse_rounding_and_floor():
    vals, _, _ = gen_sparse(100, 2.5, seed=1)
    assert vals.shape == (200,)  # 2.5 rounds to the even 2
    vals, _, _ = gen_sparse(100, 0.0, seed=1)
    assert vals.shape == (100,)  # at least one entry per row


def test_gen_sparse_dense_boundary():
    _, cols, ptrs = gen_sparse(6, 100.0, seed=2)
    for r in range(6):
        assert cols[ptrs[r] : ptrs[r + 1]].tolist() == list(range(6))


def test_gen_sparse_determinism_and_rejections():
    a = gen_sparse(50, 4.0, seed=3)
    b = gen_sparse(50, 4.0, seed=3)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    assert not np.array_equal(a[0], gen_sparse(50, 4.0, seed=4)[0])
    with pytest.raises(ParameterError):
        gen_sparse(0, 5.0, seed=0)
    with pytest.raises(ParameterError):
        gen_sparse(4, 150.0, seed=0)  # more columns than the row holds


def test_gen_banded_spd_frozen_small():
    vals, cols, ptrs = gen_banded_spd(4, 3)
    assert ptrs.tolist() == [0, 2, 5, 8, 10]
    assert cols.tolist() == [0, 1, 0, 1, 2, 1, 2, 3, 2, 3]
    assert vals.tolist() == [3.0, -1.0, -1.0, 3.0, -1.0, -1.0, 3.0, -1.0, -1.0, 3.0]


def test_gen_banded_spd_symmetric_and_dominant():
    n, bw = 16, 7
    vals, cols, ptrs = gen_banded_spd(n, bw)
    dense = np.zeros((n, n))
    for r in range(n):
        for p in range(ptrs[r], ptrs[r + 1]):
            dense[r, cols[p]] = vals[p]
    assert np.array_equal(dense, dense.T)
    off = np.abs(dense).sum(axis=1) - np.abs(np.diag(dense))
    assert np.all(np.diag(dense) > off)


def test_gen_banded_spd_entry_count():
    # full band minus the clipped triangles at both corners
    vals, _, ptrs = gen_banded_spd(1024, 511)
    assert int(ptrs[-1]) == 1024 * 511 - 255 * 256
    assert vals.shape == (457984,)


def test_gen_banded_spd_rejections():
    for n, bw in ((4, 4), (4, 1), (4, 9), (4, -3)):
        with pytest.raises(ParameterError):
            gen_banded_spd(n, bw)
    with pytest.raises(ParameterError):
        gen_banded_spd(4, 3.0)
    with pytest.raises(ParameterError):
        gen_banded_spd(4, True)


# --- case descriptions ---

def test_default_grid_counts():
    cases = paper_defaults()
    assert len(cases) == 60
    assert len(MXM_SIZES) == 13
    assert len(SPARSE_CONFIGS) == 16
    assert len(FFT_SIZES) == 13
    assert len(CG_CONFIGS) == 18
    by_kernel = {}
    for c in cases:
        by_kernel[c.kernel] = by_kernel.get(c.kernel, 0) + 1
        assert c.verify
        assert c.reps == 5
    assert by_kernel == {"mod2am": 13, "mod2as": 16, "mod2f": 13, "cg": 18}


def test_default_grid_filter():
    fft_only = paper_defaults(kernel="mod2f", reps=2, warmup=0, verify=False)
    assert len(fft_only) == 13
    assert all(c.kernel == "mod2f" and c.reps == 2 for c in fft_only)
    with pytest.raises(ParameterError):
        paper_defaults(kernel="mod9")


def test_case_validation():
    BenchCase("mod2am", "mxm0", 8)  # well-formed baseline
    with pytest.raises(ParameterError):
        BenchCase("mod9", "mxm0", 8)
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "spmv1", 8)  # variant of another kernel
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "mxm0", 0)
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "mxm0", 8, workers=0)
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "mxm0", 8, reps=0)
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "mxm0", 8, warmup=-1)
    with pytest.raises(ParameterError):
        BenchCase("mod2am", "mxm0", 8, matrix_market="m.mtx")
    # a matrix file supplies the size, so n is unconstrained
    BenchCase("mod2as", "spmv2", 0, matrix_market="m.mtx")


def test_flop_counts():
    assert flop_count(BenchCase("mod2am", "mxm0", 100)) == 2_000_000
    assert flop_count(BenchCase("mod2as", "spmv1", 10), nnz=500) == 1000
    assert flop_count(BenchCase("mod2f", "splitstream", 1024)) == 51200
    assert flop_count(BenchCase("mod2f", "splitstream", 1)) == 0
    assert (
        flop_count(BenchCase("cg", "cg-spmv2", 16), nnz=100, iters=10)
        == 10 * (2 * 100 + 10 * 16)
    )
    with pytest.raises(ParameterError):
        flop_count(BenchCase("mod2as", "spmv1", 10))
    with pytest.raises(ParameterError):
        flop_count(BenchCase("cg", "cg-spmv2", 16), nnz=100)


def test_result_properties():
    case = BenchCase("mod2am", "mxm0", 8, reps=2)
    res = BenchResult(
        case=case, seconds=(0.5, 0.25), flops=1_000_000,
        verified="pass", max_rel_err=0.0, digest="d",
    )
    assert res.best == 0.25
    assert res.mflops == 4.0


# --- coordinate files ---

def _write(tmp_path, text):
    path = tmp_path / "m.mtx"
    path.write_text(text)
    return str(path)


def test_mm_identity(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n"
        "3 3 3\n"
        "1 1 1.0\n"
        "2 2 1.0\n"
        "3 3 1.0\n",
    )
    vals, cols, ptrs, nrows, ncols = mm_read(path)
    assert (nrows, ncols) == (3, 3)
    assert vals.tolist() == [1.0, 1.0, 1.0]
    assert cols.tolist() == [0, 1, 2]
    assert ptrs.tolist() == [0, 1, 2, 3]


def test_mm_comments_blanks_and_sorting(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment before the size line\n"
        "\n"
        "2 3 3\n"
        "% between entries\n"
        "1 3 30.0\n"
        "\n"
        "1 1 10.0\n"
        "2 2 20.0\n",
    )
    vals, cols, ptrs, nrows, ncols = mm_read(path)
    assert (nrows, ncols) == (2, 3)
    assert cols.tolist() == [0, 2, 1]  # sorted within each row
    assert vals.tolist() == [10.0, 30.0, 20.0]
    assert ptrs.tolist() == [0, 2, 3]


def test_mm_symmetric_mirrors_off_diagonal(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "1 1 4.0\n"
        "2 1 7.0\n",
    )
    vals, cols, ptrs, nrows, ncols = mm_read(path)
    assert vals.tolist() == [4.0, 7.0, 7.0]
    assert cols.tolist() == [0, 1, 0]
    assert ptrs.tolist() == [0, 2, 3]

    # either triangle may hold the entry; both read the same
    upper = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "1 1 4.0\n"
        "1 2 7.0\n",
    )
    uvals, ucols, uptrs, _, _ = mm_read(upper)
    assert uvals.tolist() == vals.tolist()
    assert ucols.tolist() == cols.tolist()
    assert uptrs.tolist() == ptrs.tolist()


def test_mm_duplicates_are_summed(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 3\n"
        "1 1 2.0\n"
        "1 1 3.0\n"
        "2 2 1.0\n",
    )
    vals, cols, ptrs, _, _ = mm_read(path)
    assert vals.tolist() == [5.0, 1.0]
    assert cols.tolist() == [0, 1]
    assert ptrs.tolist() == [0, 1, 2]


def test_mm_rejections_carry_line_numbers(tmp_path):
    def err_of(text):
        with pytest.raises(ParseError) as e:
            mm_read(_write(tmp_path, text))
        return e.value

    assert err_of("").line == 1  # empty file
    assert err_of("1 1 1.0\n").line == 1  # missing header
    assert (
        err_of("%%MatrixMarket matrix array real general\n1 1\n").line == 1
    )  # layout
    assert (
        err_of("%%MatrixMarket matrix coordinate complex general\n").line == 1
    )  # value type
    assert (
        err_of("%%MatrixMarket matrix coordinate real skew\n").line == 1
    )  # symmetry

    head = "%%MatrixMarket matrix coordinate real general\n"
    assert err_of(head + "2 2\n").line == 2  # short size line
    assert err_of(head + "2 x 1\n").line == 2  # non-integer size
    assert err_of(head + "% only comments\n").line == 2  # size line missing
    assert err_of(head + "2 2 1\n3 1 1.0\n").line == 3  # coordinate range
    assert err_of(head + "2 2 1\n1 1\n").line == 3  # short entry
    assert err_of(head + "2 2 1\n1 1 abc\n").line == 3  # bad value
    e = err_of(head + "2 2 1\n1 1 1.0\n2 2 1.0\n")
    assert e.line == 4  # overfull
    assert str(e).startswith("line 4:")
    assert err_of(head + "2 2 3\n1 1 1.0\n2 2 1.0\n").line == 4  # underfull


# --- case runner ---

def test_run_case_dense_product():
    case = BenchCase("mod2am", "mxm0", 10, reps=2, warmup=1, verify=True)
    res = run_case(case)
    assert len(res.seconds) == 2
    assert res.verified == "pass"
    assert res.max_rel_err is not None and res.max_rel_err <= 1e-12 * 10
    assert res.flops == 2 * 10**3
    assert res.mflops > 0
    assert run_case(case).digest == res.digest  # same seed, same bytes


def test_run_case_respects_oracle_cap():
    case = BenchCase("mod2f", "splitstream", 16384, reps=1, warmup=0, verify=True)
    res = run_case(case)
    assert res.verified == "skipped"
    assert res.max_rel_err is None
    small = BenchCase("mod2f", "splitstream", 256, reps=1, warmup=0, verify=True)
    assert run_case(small).verified == "pass"


def test_run_case_without_verify_reports_skipped():
    case = BenchCase("mod2as", "spmv2", 50, extra=4.0, reps=1, warmup=0)
    res = run_case(case)
    assert res.verified == "skipped"
    assert res.nnz == 100  # 4% of 50 rounds to 2 per row


def test_run_case_solver():
    case = BenchCase("cg", "cg-spmv1", 64, extra=7, reps=1, warmup=0, verify=True)
    res = run_case(case)
    _, _, ptrs = gen_banded_spd(64, 7)
    assert res.verified == "pass"
    assert res.nnz == int(ptrs[-1])
    assert res.iters >= 1
    assert res.flops == res.iters * (2 * res.nnz + 10 * 64)


def test_run_case_from_matrix_file(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 5\n"
        "1 1 4.0\n"
        "2 2 4.0\n"
        "3 3 4.0\n"
        "2 1 -1.0\n"
        "3 2 -1.0\n",
    )
    case = BenchCase(
        "mod2as", "spmv1", 3, matrix_market=path, reps=1, warmup=0, verify=True
    )
    res = run_case(case)
    assert res.verified == "pass"
    assert res.nnz == 7  # mirrored off-diagonals included


def test_sweep_workers_compares_digests():
    case = BenchCase("mod2as", "spmv2", 200, extra=2.0, reps=1, warmup=0)
    results = sweep_workers(case, [1, 2])
    assert [r.case.workers for r in results] == [1, 2]
    assert results[0].digest == results[1].digest


def test_sweep_workers_rejects_divergence(monkeypatch):
    import parabl.harness.runner as runner_mod

    real = runner_mod.run_case
    counter = iter(range(100))

    def cooked(c):
        res = real(c)
        res.digest = f"digest-{next(counter)}"
        return res

    monkeypatch.setattr(runner_mod, "run_case", cooked)
    case = BenchCase("mod2as", "spmv2", 20, extra=5.0, reps=1, warmup=0)
    with pytest.raises(ParablError):
        sweep_workers(case, [1, 2])


# --- delimited output ---

GOLDEN = (
    "kernel,variant,n,extra,workers,rep,seconds,mflops,verified,max_rel_err\n"
    "mod2as,spmv2,100,3.5,1,1,0.5,0.0016,pass,1.25e-14\n"
    "mod2as,spmv2,100,3.5,1,2,0.25,0.0032,pass,1.25e-14\n"
)


def _golden_result():
    case = BenchCase("mod2as", "spmv2", 100, extra=3.5, reps=2, warmup=0)
    return BenchResult(
        case=case, seconds=(0.5, 0.25), flops=800,
        verified="pass", max_rel_err=1.25e-14, digest="d",
    )


def test_csv_golden_file(tmp_path):
    path = tmp_path / "out.csv"
    csv_write(str(path), [_golden_result()])
    assert path.read_text() == GOLDEN


def test_csv_extra_column_formatting(tmp_path):
    path = tmp_path / "out.csv"
    base = BenchCase("mod2am", "mxm2b", 8, extra=8.0, reps=1, warmup=0)
    res = BenchResult(
        case=base, seconds=(0.5,), flops=1024,
        verified="skipped", max_rel_err=None, digest="d",
    )
    csv_write(str(path), [res])
    lines = path.read_text().splitlines()
    assert lines[1] == "mod2am,mxm2b,8,8,1,1,0.5,0.002048,skipped,"
    plain = BenchCase("mod2f", "splitstream", 8, reps=1, warmup=0)
    res2 = BenchResult(
        case=plain, seconds=(0.5,), flops=120,
        verified="pass", max_rel_err=0.0, digest="d",
    )
    csv_write(str(path), [res2])
    assert path.read_text().splitlines()[1] == (
        "mod2f,splitstream,8,,1,1,0.5,0.00024,pass,0.0"
    )


def test_csv_round_trip_is_byte_identical(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    csv_write(str(first), [_golden_result()])
    rows = csv_read(str(first))
    assert len(rows) == 2
    assert rows[0]["seconds"] == 0.5
    assert rows[1]["mflops"] == 0.0032
    assert rows[0]["extra"] == "3.5"
    csv_write_rows(str(second), rows)
    assert first.read_bytes() == second.read_bytes()


def test_csv_read_rejections(tmp_path):
    path = tmp_path / "bad.csv"

    def err_for(text):
        path.write_text(text)
        with pytest.raises(FormatError) as e:
            csv_read(str(path))
        return str(e.value)

    assert "empty" in err_for("")
    assert "header" in err_for("kernel,variant\nx,y\n")
    header = GOLDEN.splitlines()[0] + "\n"
    assert "fields" in err_for(header + "mod2as,spmv2,100\n")
    assert ":2:" in err_for(
        header + "mod2as,spmv2,ten,3.5,1,1,0.5,0.0016,pass,\n"
    )
    assert "verified" in err_for(
        header + "mod2as,spmv2,100,3.5,1,1,0.5,0.0016,maybe,\n"
    )


# --- figures ---

def _row(kernel, variant, n, workers, mflops):
    return {
        "kernel": kernel, "variant": variant, "n": n,
        "workers": workers, "rep": 1, "seconds": 1.0,
        "mflops": mflops, "verified": "pass", "max_rel_err": 0.0,
        "extra": "",
    }


def test_render_rows_one_figure_per_kernel(tmp_path):
    rows = [
        _row("mod2am", "mxm2b", 10, 1, 50.0),
        _row("mod2am", "mxm2b", 100, 1, 80.0),
        _row("mod2f", "splitstream", 256, 1, 120.0),
    ]
    written = render_rows(rows, str(tmp_path / "figs"))
    names = sorted(p.split("/")[-1] for p in written)
    assert names == ["mod2am.png", "mod2f.png"]
    for p in written:
        with open(p, "rb") as fh:
            assert fh.read(8) == PNG_MAGIC


def test_render_rows_scaling_needs_a_sweep(tmp_path):
    rows = [
        _row("mod2as", "spmv2", 100, 1, 40.0),
        _row("mod2as", "spmv2", 100, 2, 70.0),
    ]
    written = render_rows(rows, str(tmp_path / "figs"))
    names = sorted(p.split("/")[-1] for p in written)
    assert names == ["mod2as.png", "scaling.png"]


def test_render_report_from_file(tmp_path):
    path = tmp_path / "r.csv"
    csv_write(str(path), [_golden_result()])
    written = render_report(str(path), str(tmp_path / "figs"))
    assert [p.split("/")[-1] for p in written] == ["mod2as.png"]
