"""Sparse matrix-vector product over compressed-row storage.

A CsrMatrix holds the three standard arrays as containers: values and
column indices in storage order plus a row pointer array of length
nrows + 1.  Both product variants map a scalar row kernel over the row
pointer pairs, gathering from the value, index, and input vectors as
read-only auxiliaries; spmv2 additionally detects runs of consecutive
column indices inside a row and turns them into unit-stride dots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..containers import DenseVector, ElemKind, from_host
from ..errors import FormatError, KindError, ShapeError
from ..ops import MapKernel, map_elements, register_map_kernel, section


@dataclass(frozen=True)
class CsrMatrix:
    """Compressed-row sparse matrix: f64 values, i32 indices."""

    matvals: DenseVector
    indx: DenseVector
    rowp: DenseVector
    ncols: int

    def __post_init__(self):
        for name, vec, kind in (
            ("matvals", self.matvals, ElemKind.REAL64),
            ("indx", self.indx, ElemKind.INDEX32),
            ("rowp", self.rowp, ElemKind.INDEX32),
        ):
            if not isinstance(vec, DenseVector):
                raise FormatError(f"{name} must be a vector")
            if vec.kind is not kind:
                raise FormatError(
                    f"{name} must be {kind.value}, got {vec.kind.value}"
                )
        if not isinstance(self.ncols, int) or self.ncols < 0:
            raise FormatError(f"bad column count {self.ncols!r}")
        ptrs = self.rowp._data
        if ptrs.shape[0] < 1:
            raise FormatError("row pointer array must have at least one entry")
        if ptrs[0] != 0:
            raise FormatError(f"row pointers must start at 0, got {ptrs[0]}")
        if np.any(np.diff(ptrs) < 0):
            raise FormatError("row pointers must be non-decreasing")
        nnz = self.matvals.length
        if self.indx.length != nnz:
            raise FormatError(
                f"value and index arrays differ in length: "
                f"{nnz} vs {self.indx.length}"
            )
        if ptrs[-1] != nnz:
            raise FormatError(
                f"row pointers end at {ptrs[-1]} but there are {nnz} entries"
            )
        cols = self.indx._data
        if nnz and (cols.min() < 0 or cols.max() >= self.ncols):
            raise FormatError(
                f"column index outside [0, {self.ncols})"
            )

    @property
    def nrows(self) -> int:
        return self.rowp.length - 1

    @property
    def nnz(self) -> int:
        return self.matvals.length


def csr_from_host(vals, cols, ptrs, ncols: int) -> CsrMatrix:
    """Build a CsrMatrix from host arrays, validating the format."""
    vals = np.asarray(vals, dtype=np.float64)
    cols = np.asarray(cols, dtype=np.int64)
    ptrs = np.asarray(ptrs, dtype=np.int64)
    if vals.ndim != 1 or cols.ndim != 1 or ptrs.ndim != 1:
        raise FormatError("compressed-row arrays must be 1-D")
    return CsrMatrix(
        matvals=from_host(vals, vals.shape[0]),
        indx=from_host(cols.astype(np.int32), cols.shape[0]),
        rowp=from_host(ptrs.astype(np.int32), ptrs.shape[0]),
        ncols=int(ncols),
    )


def _row_dot(lo, hi, matvals, invec, indx):
    return float(np.dot(matvals[lo:hi], invec[indx[lo:hi]]))


ROW_DOT = register_map_kernel(
    MapKernel("csr_row_dot", _row_dot, ElemKind.REAL64)
)


def _row_run_dot(lo, hi, matvals, invec, indx):
    if hi == lo:
        return 0.0
    cols = indx[lo:hi]
    vals = matvals[lo:hi]
    width = hi - lo
    # group consecutive column indices into runs
    breaks = np.nonzero(np.diff(cols) != 1)[0]
    starts = np.empty(breaks.shape[0] + 1, dtype=np.int64)
    ends = np.empty_like(starts)
    starts[0] = 0
    starts[1:] = breaks + 1
    ends[:-1] = breaks + 1
    ends[-1] = width
    acc = 0.0
    span = None  # open span of length-1 runs, gathered in one dot
    for s, e in zip(starts.tolist(), ends.tolist()):
        if e - s >= 2:
            if span is not None:
                acc += float(np.dot(vals[span:s], invec[cols[span:s]]))
                span = None
            c0 = cols[s]
            acc += float(np.dot(vals[s:e], invec[c0 : c0 + (e - s)]))
        elif span is None:
            span = s
    if span is not None:
        acc += float(np.dot(vals[span:], invec[cols[span:]]))
    return acc


ROW_RUN_DOT = register_map_kernel(
    MapKernel("csr_row_run_dot", _row_run_dot, ElemKind.REAL64)
)


def _spmv_stream(kernel, matvals, indx, rowp, nrows, invec):
    rowpi = section(rowp, 0, nrows, 1)
    rowpj = section(rowp, 1, nrows, 1)
    return map_elements(kernel, (rowpi, rowpj), aux=(matvals, invec, indx))


def _spmv1_stream(matvals, indx, rowp, nrows, invec):
    return _spmv_stream(ROW_DOT, matvals, indx, rowp, nrows, invec)


def _spmv2_stream(matvals, indx, rowp, nrows, invec):
    return _spmv_stream(ROW_RUN_DOT, matvals, indx, rowp, nrows, invec)


def _check_product(mat, invec, op: str):
    if not isinstance(mat, CsrMatrix):
        raise KindError(f"{op} expects a CsrMatrix")
    if not isinstance(invec, DenseVector):
        raise KindError(f"{op} expects a vector operand")
    if invec.kind is not ElemKind.REAL64:
        raise KindError(f"{op} operand must be f64, got {invec.kind.value}")
    if invec.length != mat.ncols:
        raise ShapeError(
            f"{op} operand has length {invec.length}, matrix has "
            f"{mat.ncols} columns"
        )


def spmv1(mat: CsrMatrix, invec: DenseVector) -> DenseVector:
    """Row-wise gather dot: one indexed dot product per row."""
    _check_product(mat, invec, "spmv1")
    return _spmv1_stream(mat.matvals, mat.indx, mat.rowp, mat.nrows, invec)


def spmv2(mat: CsrMatrix, invec: DenseVector) -> DenseVector:
    """Row-wise dot with unit-stride runs taken contiguously."""
    _check_product(mat, invec, "spmv2")
    return _spmv2_stream(mat.matvals, mat.indx, mat.rowp, mat.nrows, invec)


SPMV_VARIANTS = {
    "spmv1": spmv1,
    "spmv2": spmv2,
}
