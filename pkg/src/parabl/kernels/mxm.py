"""Dense matrix-matrix product in four collective formulations.

All variants compute c[i, j] = sum_k a[i, k] * b[k, j] over f64
matrices.  mxm0 and mxm1 accumulate each element through the blocked
pairwise reduction tree; mxm2a and mxm2b accumulate rank-1 updates in
ascending-k order, so those two agree bit for bit with each other and
with a scalar triple loop that keeps k outermost.
"""

from __future__ import annotations

from ..containers import DenseMatrix, ElemKind
from ..errors import KindError, ParameterError, ShapeError
from ..tracing import unwrap
from ..ops import (
    add_reduce,
    add_reduce_rows,
    col,
    ewise,
    fill,
    pack,
    repeat_col,
    repeat_row,
    replace_col,
    row,
)


def _check_operands(a, b, op: str):
    # unwrap lets captures pass traced handles through the same checks
    for side, mat in (("left", unwrap(a)), ("right", unwrap(b))):
        if not isinstance(mat, DenseMatrix):
            raise KindError(f"{op} {side} operand must be a matrix")
        if mat.kind is not ElemKind.REAL64:
            raise KindError(f"{op} operands must be f64, got {mat.kind.value}")
    if a.ncols != b.nrows:
        raise ShapeError(
            f"{op} inner dimensions differ: "
            f"{a.nrows}x{a.ncols} times {b.nrows}x{b.ncols}"
        )


def mxm0(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Dot-product form: one reduction per output element."""
    _check_operands(a, b, "mxm0")
    m, n = a.nrows, b.ncols
    c = fill((m, n), ElemKind.REAL64, 0.0)
    for j in range(n):
        bc = col(b, j)
        entries = [add_reduce(ewise("*", row(a, i), bc)) for i in range(m)]
        c = replace_col(c, j, pack(entries, ElemKind.REAL64))
    return c


def mxm1(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Column-at-a-time form: replicate b's column, reduce rows."""
    _check_operands(a, b, "mxm1")
    m, n = a.nrows, b.ncols
    c = fill((m, n), ElemKind.REAL64, 0.0)
    for j in range(n):
        prods = ewise("*", a, repeat_row(col(b, j), m))
        c = replace_col(c, j, add_reduce_rows(prods))
    return c


def _rank1(a, b, m, n, k):
    return ewise("*", repeat_col(col(a, k), n), repeat_row(row(b, k), m))


def mxm2a(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Rank-1 update form: accumulate outer products in k order."""
    _check_operands(a, b, "mxm2a")
    m, n = a.nrows, b.ncols
    c = _rank1(a, b, m, n, 0)
    for k in range(1, a.ncols):
        c = ewise("+", c, _rank1(a, b, m, n, k))
    return c


def mxm2b(a: DenseMatrix, b: DenseMatrix, u: int = 8) -> DenseMatrix:
    """Rank-1 update form with the k loop blocked by factor u.

    The update order is identical to mxm2a, so results match it bit
    for bit; u only shapes the unrolled structure (and the length of a
    captured trace's straight-line blocks).
    """
    _check_operands(a, b, "mxm2b")
    depth = a.ncols
    if not isinstance(u, int) or isinstance(u, bool) or not 1 <= u <= depth:
        raise ParameterError(
            f"unroll factor must be an integer in [1, {depth}], got {u!r}"
        )
    m, n = a.nrows, b.ncols
    c = _rank1(a, b, m, n, 0)
    for k in range(1, u):
        c = ewise("+", c, _rank1(a, b, m, n, k))
    for blk in range(1, depth // u):
        for k in range(blk * u, (blk + 1) * u):
            c = ewise("+", c, _rank1(a, b, m, n, k))
    for k in range((depth // u) * u, depth):
        c = ewise("+", c, _rank1(a, b, m, n, k))
    return c


MXM_VARIANTS = {
    "mxm0": mxm0,
    "mxm1": mxm1,
    "mxm2a": mxm2a,
    "mxm2b": mxm2b,
}
