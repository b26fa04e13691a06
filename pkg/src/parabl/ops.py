"""Collective operations over dense containers.

Every op is pure: inputs are never mutated and each result is freshly
allocated (or a read-only view over immutable data, which the value
semantics make indistinguishable).

Floating-point sums use a fixed-shape blocked pairwise tree: the
operand is zero-padded to a multiple of 256, each 256-block is reduced
by a halving tree, and the block sums (zero-padded to a power of two)
are reduced by the same tree.  The tree depends only on the operand
length, and parallel workers are assigned whole blocks, so results are
bit-identical for every worker count.  add_reduce and add_reduce_rows
share the tree, so reducing a row of repeat_row(v, r) reproduces
add_reduce(v) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import tracing
from .containers import Container, DenseMatrix, DenseVector, ElemKind
from .errors import (
    BoundsError,
    KindError,
    ParameterError,
    ShapeError,
)
from .execution import CHUNK, active_workers, chunk_ranges, run_tasks
from .tracing import OPCODE_IMPLS, unwrap

# Test hook: set to a callable length -> index iterable to force a
# particular element evaluation order in the scalar map path.
_eval_order_hook = None

_REAL_SCALARS = (int, float)
_COMPLEX_SCALARS = (int, float, complex)


# ---------------------------------------------------------------------------
# validation helpers

def _check_vector(v, op: str) -> DenseVector:
    if not isinstance(v, DenseVector):
        raise KindError(f"{op} expects a vector, got {type(v).__name__}")
    return v


def _check_matrix(m, op: str) -> DenseMatrix:
    if not isinstance(m, DenseMatrix):
        raise KindError(f"{op} expects a matrix, got {type(m).__name__}")
    return m


def _check_container(c, op: str):
    if not isinstance(c, (DenseVector, DenseMatrix)):
        raise KindError(f"{op} expects a container, got {type(c).__name__}")
    return c


def _check_same(a, b, op: str):
    if type(a) is not type(b):
        raise ShapeError(
            f"{op} operands must both be vectors or both matrices, got "
            f"{type(a).__name__} and {type(b).__name__}"
        )
    if a.kind is not b.kind:
        raise KindError(
            f"{op} operands must share a kind, got {a.kind.value} and "
            f"{b.kind.value}"
        )
    if a._data.shape != b._data.shape:
        raise ShapeError(
            f"{op} operands must share a shape, got {a.shape} and {b.shape}"
        )


def _check_index(i, bound: int, what: str):
    if not isinstance(i, int) or isinstance(i, bool):
        raise ParameterError(f"{what} must be an integer, got {i!r}")
    if not 0 <= i < bound:
        raise BoundsError(f"{what} {i} outside range [0, {bound})")


def _check_scalar(s, kind: ElemKind, op: str):
    if isinstance(s, bool):
        raise KindError(f"{op} scalar must match kind {kind.value}, got a bool")
    allowed = _COMPLEX_SCALARS if kind is ElemKind.COMPLEX128 else (
        (int,) if kind is ElemKind.INDEX32 else _REAL_SCALARS
    )
    if not isinstance(s, allowed):
        raise KindError(
            f"{op} scalar {s!r} does not match element kind {kind.value}"
        )


def _to_py(value, kind: ElemKind):
    if kind is ElemKind.REAL64:
        return float(value)
    if kind is ElemKind.INDEX32:
        return int(value)
    return complex(value)


# ---------------------------------------------------------------------------
# tracing dispatch

def _collective(opcode: str, impl: Callable) -> Callable:
    """Wrap an op so active captures record it; plain calls stay direct."""
    OPCODE_IMPLS[opcode] = impl

    def wrapper(*args):
        tracer = tracing._active
        if tracer is None:
            return impl(*args)
        out = impl(*(unwrap(a) for a in args))
        return tracer.record(opcode, args, out)

    wrapper.__name__ = impl.__name__.lstrip("_")
    wrapper.__doc__ = impl.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# the deterministic reduction tree

def _tree_last(a: np.ndarray) -> np.ndarray:
    # fold the last axis (power-of-two width) by repeated halving
    w = a.shape[-1]
    while w > 1:
        h = w // 2
        a = a[..., :h] + a[..., h:]
        w = h
    return a[..., 0]


def _pad_last(a: np.ndarray, width: int) -> np.ndarray:
    if a.shape[-1] == width:
        return a
    out = np.zeros(a.shape[:-1] + (width,), dtype=a.dtype)
    out[..., : a.shape[-1]] = a
    return out


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def _block_sums(x: np.ndarray) -> np.ndarray:
    # 1-D -> per-256-block sums via the in-block halving tree
    nb = -(-x.shape[0] // 256)
    padded = _pad_last(x, nb * 256)
    return _tree_last(padded.reshape(nb, 256))


def _fold_vector(x: np.ndarray):
    if x.shape[0] == 0:
        return x.dtype.type(0)
    nb = -(-x.shape[0] // 256)
    workers = active_workers()
    ranges = chunk_ranges(nb, workers, 4) if workers > 1 else [(0, nb)]
    if len(ranges) > 1:
        sums = np.empty(nb, dtype=x.dtype)
        end = x.shape[0]

        def task(lo=0, hi=0):
            sums[lo:hi] = _block_sums(x[lo * 256 : min(hi * 256, end)])

        run_tasks([lambda lo=lo, hi=hi: task(lo, hi) for lo, hi in ranges])
    else:
        sums = _block_sums(x)
    return _tree_last(_pad_last(sums, _next_pow2(nb)))


def _fold_rows(a: np.ndarray) -> np.ndarray:
    # (r, c) -> (r,) with the same tree per row as _fold_vector
    r, c = a.shape
    if c == 0:
        return np.zeros(r, dtype=a.dtype)
    nb = -(-c // 256)
    padded = _pad_last(a, nb * 256)
    sums = _tree_last(padded.reshape(r, nb, 256))
    return _tree_last(_pad_last(sums, _next_pow2(nb)))


# ---------------------------------------------------------------------------
# element-wise machinery

def _apply2(ufunc, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    workers = active_workers()
    if x.ndim == 1:
        ranges = chunk_ranges(x.shape[0], workers) if workers > 1 else [(0, 0)]
        if len(ranges) > 1:
            out = np.empty(x.shape[0], dtype=x.dtype)
            run_tasks(
                [
                    lambda lo=lo, hi=hi: ufunc(x[lo:hi], y[lo:hi], out=out[lo:hi])
                    for lo, hi in ranges
                ]
            )
            return out
        return ufunc(x, y)
    rows, cols = x.shape
    min_rows = max(1, -(-CHUNK // max(cols, 1)))
    ranges = chunk_ranges(rows, workers, min_rows) if workers > 1 else [(0, 0)]
    if len(ranges) > 1:
        out = np.empty((rows, cols), dtype=x.dtype)
        run_tasks(
            [
                lambda lo=lo, hi=hi: ufunc(x[lo:hi], y[lo:hi], out=out[lo:hi])
                for lo, hi in ranges
            ]
        )
        return out
    return ufunc(x, y)


def _apply_scalar(ufunc, x: np.ndarray, s) -> np.ndarray:
    workers = active_workers()
    flat_len = x.shape[0] if x.ndim == 1 else x.shape[0] * max(x.shape[1], 1)
    if workers > 1 and flat_len >= 2 * CHUNK:
        if x.ndim == 1:
            ranges = chunk_ranges(x.shape[0], workers)
        else:
            min_rows = max(1, -(-CHUNK // max(x.shape[1], 1)))
            ranges = chunk_ranges(x.shape[0], workers, min_rows)
        if len(ranges) > 1:
            out = np.empty(x.shape, dtype=x.dtype)
            run_tasks(
                [
                    lambda lo=lo, hi=hi: ufunc(x[lo:hi], s, out=out[lo:hi])
                    for lo, hi in ranges
                ]
            )
            return out
    return ufunc(x, s)


def _wrap_like(template: Container, arr: np.ndarray) -> Container:
    arr.flags.writeable = False
    if isinstance(template, DenseVector):
        return DenseVector._wrap(arr, template.kind)
    return DenseMatrix._wrap(arr, template.kind)


def _ewise_add(a, b):
    _check_container(a, "ewise")
    _check_same(a, b, "ewise")
    return _wrap_like(a, _apply2(np.add, a._data, b._data))


def _ewise_sub(a, b):
    _check_container(a, "ewise")
    _check_same(a, b, "ewise")
    return _wrap_like(a, _apply2(np.subtract, a._data, b._data))


def _ewise_mul(a, b):
    _check_container(a, "ewise")
    _check_same(a, b, "ewise")
    return _wrap_like(a, _apply2(np.multiply, a._data, b._data))


_EWISE_ADD = _collective("ewise_add", _ewise_add)
_EWISE_SUB = _collective("ewise_sub", _ewise_sub)
_EWISE_MUL = _collective("ewise_mul", _ewise_mul)

_EWISE_TABLE = {"+": _EWISE_ADD, "-": _EWISE_SUB, "*": _EWISE_MUL}


def ewise(op: str, a: Container, b: Container) -> Container:
    """Element-wise '+', '-', or '*' over same-shape, same-kind operands."""
    try:
        f = _EWISE_TABLE[op]
    except (KeyError, TypeError):
        raise ParameterError(f"ewise op must be one of '+', '-', '*', got {op!r}")
    return f(a, b)


def _scale(a, s):
    _check_container(a, "scale")
    _check_scalar(s, a.kind, "scale")
    return _wrap_like(a, _apply_scalar(np.multiply, a._data, s))


scale = _collective("scale", _scale)


def _add_reduce(v):
    """Sum a vector to a scalar with the blocked pairwise tree."""
    _check_vector(v, "add_reduce")
    return _to_py(_fold_vector(v._data), v.kind)


add_reduce = _collective("add_reduce", _add_reduce)


def _add_reduce_rows(m):
    """Row sums of a matrix, each via the blocked pairwise tree."""
    _check_matrix(m, "add_reduce_rows")
    arr = m._data
    rows, cols = arr.shape
    workers = active_workers()
    min_rows = max(1, -(-CHUNK // max(cols, 1)))
    ranges = chunk_ranges(rows, workers, min_rows) if workers > 1 else [(0, 0)]
    if len(ranges) > 1:
        out = np.empty(rows, dtype=arr.dtype)

        def task(lo, hi):
            out[lo:hi] = _fold_rows(arr[lo:hi])

        run_tasks([lambda lo=lo, hi=hi: task(lo, hi) for lo, hi in ranges])
    else:
        out = _fold_rows(arr)
    out.flags.writeable = False
    return DenseVector._wrap(out, m.kind)


add_reduce_rows = _collective("add_reduce_rows", _add_reduce_rows)


def _section(v, offset, length, stride):
    """Strided window copy: out[k] = v[offset + k*stride]."""
    _check_vector(v, "section")
    for name, val in (("offset", offset), ("length", length), ("stride", stride)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParameterError(f"section {name} must be an integer, got {val!r}")
    if stride < 1:
        raise ParameterError(f"section stride must be >= 1, got {stride}")
    if length < 0:
        raise ParameterError(f"section length must be >= 0, got {length}")
    if offset < 0:
        raise BoundsError(f"section offset must be >= 0, got {offset}")
    if length == 0:
        return DenseVector._wrap(np.empty(0, dtype=v.kind.dtype), v.kind)
    last = offset + (length - 1) * stride
    if last >= v.length:
        raise BoundsError(
            f"section [{offset}:{last}:{stride}] reaches past vector of "
            f"length {v.length}"
        )
    out = v._data[offset : last + 1 : stride].copy()
    out.flags.writeable = False
    return DenseVector._wrap(out, v.kind)


section = _collective("section", _section)


def _repeat(v, times):
    """Concatenate `times` copies of a vector."""
    _check_vector(v, "repeat")
    if not isinstance(times, int) or isinstance(times, bool) or times < 1:
        raise ParameterError(f"repeat count must be a positive integer, got {times!r}")
    out = np.tile(v._data, times)
    out.flags.writeable = False
    return DenseVector._wrap(out, v.kind)


repeat = _collective("repeat", _repeat)


def _repeat_row(v, nrows):
    """Matrix whose every row is v: out[m, n] = v[n]."""
    _check_vector(v, "repeat_row")
    if not isinstance(nrows, int) or isinstance(nrows, bool) or nrows < 1:
        raise ParameterError(f"row count must be a positive integer, got {nrows!r}")
    out = np.broadcast_to(v._data, (nrows, v.length))
    return DenseMatrix._wrap(out, v.kind)


repeat_row = _collective("repeat_row", _repeat_row)


def _repeat_col(v, ncols):
    """Matrix whose every column is v: out[m, n] = v[m]."""
    _check_vector(v, "repeat_col")
    if not isinstance(ncols, int) or isinstance(ncols, bool) or ncols < 1:
        raise ParameterError(f"column count must be a positive integer, got {ncols!r}")
    out = np.broadcast_to(v._data[:, None], (v.length, ncols))
    return DenseMatrix._wrap(out, v.kind)


repeat_col = _collective("repeat_col", _repeat_col)


def _cat(a, b):
    """Concatenate two same-kind vectors."""
    _check_vector(a, "cat")
    _check_vector(b, "cat")
    if a.kind is not b.kind:
        raise KindError(
            f"cat operands must share a kind, got {a.kind.value} and {b.kind.value}"
        )
    out = np.concatenate((a._data, b._data))
    out.flags.writeable = False
    return DenseVector._wrap(out, a.kind)


cat = _collective("cat", _cat)


def _replace_col(m, j, v):
    """Copy of m with column j replaced by v."""
    _check_matrix(m, "replace_col")
    _check_vector(v, "replace_col")
    _check_index(j, m.ncols, "column")
    if v.kind is not m.kind:
        raise KindError(
            f"replace_col operands must share a kind, got {m.kind.value} "
            f"and {v.kind.value}"
        )
    if v.length != m.nrows:
        raise ShapeError(
            f"replacement column has length {v.length}, matrix has "
            f"{m.nrows} rows"
        )
    out = np.array(m._data)
    out[:, j] = v._data
    out.flags.writeable = False
    return DenseMatrix._wrap(out, m.kind)


replace_col = _collective("replace_col", _replace_col)


def _row(m, i):
    """Row i of a matrix as a fresh vector."""
    _check_matrix(m, "row")
    _check_index(i, m.nrows, "row")
    out = m._data[i].copy()
    out.flags.writeable = False
    return DenseVector._wrap(out, m.kind)


row = _collective("row", _row)


def _col(m, j):
    """Column j of a matrix as a fresh vector."""
    _check_matrix(m, "col")
    _check_index(j, m.ncols, "column")
    out = np.ascontiguousarray(m._data[:, j])
    out.flags.writeable = False
    return DenseVector._wrap(out, m.kind)


col = _collective("col", _col)


# ---------------------------------------------------------------------------
# constructors that participate in traces

def _fill_impl(shape, kind, value):
    if not isinstance(kind, ElemKind):
        raise KindError(f"fill kind must be an ElemKind, got {kind!r}")
    _check_scalar(value, kind, "fill")
    if isinstance(shape, (tuple, list)):
        if len(shape) != 2:
            raise ShapeError(f"fill shape must be int or (rows, cols), got {shape}")
        r, c = int(shape[0]), int(shape[1])
        if r < 0 or c < 0:
            raise ShapeError(f"negative dimension in fill shape {shape}")
        out = np.full((r, c), value, dtype=kind.dtype)
        out.flags.writeable = False
        return DenseMatrix._wrap(out, kind)
    n = int(shape)
    if n < 0:
        raise ShapeError(f"negative fill length {n}")
    out = np.full(n, value, dtype=kind.dtype)
    out.flags.writeable = False
    return DenseVector._wrap(out, kind)


def fill(shape, kind: ElemKind, value) -> Container:
    """Container of the given shape with every element set to value."""
    tracer = tracing._active
    if tracer is None:
        return _fill_impl(shape, kind, value)
    out = _fill_impl(shape, kind, unwrap(value))
    return tracer.record("fill", (value,), out)


def _pack_impl(values, kind):
    if not isinstance(kind, ElemKind):
        raise KindError(f"pack kind must be an ElemKind, got {kind!r}")
    for s in values:
        _check_scalar(s, kind, "pack")
    out = np.array(values, dtype=kind.dtype)
    out.flags.writeable = False
    return DenseVector._wrap(out, kind)


def pack(values: Sequence, kind: ElemKind) -> DenseVector:
    """Vector assembled from host scalars (or captured scalar results)."""
    vals = tuple(values)
    tracer = tracing._active
    if tracer is None:
        return _pack_impl(vals, kind)
    out = _pack_impl(tuple(unwrap(v) for v in vals), kind)
    return tracer.record("pack", vals, out)


# ---------------------------------------------------------------------------
# map

@dataclass(frozen=True)
class MapKernel:
    """Scalar kernel applied element-wise by map_elements.

    fn(*element_scalars, *aux_arrays) -> scalar defines the semantics.
    It must be pure per element; it may loop serially over index ranges
    derived from its scalar arguments, gathering from the read-only
    auxiliary arrays.  batch, when given, is a vectorized equivalent
    taking chunk arrays in place of scalars; it must reproduce fn
    exactly and exists only to speed up the common path.
    """

    name: str
    fn: Callable
    out_kind: ElemKind
    batch: Optional[Callable] = None


MAP_KERNELS: dict[str, MapKernel] = {}


def register_map_kernel(kernel: MapKernel) -> MapKernel:
    """Make a kernel resolvable by name when parsing dumped traces."""
    existing = MAP_KERNELS.get(kernel.name)
    if existing is not None and existing is not kernel:
        raise ParameterError(f"map kernel {kernel.name!r} already registered")
    MAP_KERNELS[kernel.name] = kernel
    return kernel


def _map_impl(kernel, inputs, aux):
    if not isinstance(kernel, MapKernel):
        raise ParameterError(
            f"map_elements needs a MapKernel, got {type(kernel).__name__}"
        )
    if not inputs:
        raise ParameterError("map_elements needs at least one element-wise input")
    for v in inputs:
        _check_vector(v, "map_elements input")
    for v in aux:
        _check_vector(v, "map_elements auxiliary")
    length = inputs[0].length
    for v in inputs[1:]:
        if v.length != length:
            raise ShapeError(
                f"map_elements inputs must share a length, got {length} "
                f"and {v.length}"
            )
    dtype = kernel.out_kind.dtype
    if length == 0:
        out = np.empty(0, dtype=dtype)
        out.flags.writeable = False
        return DenseVector._wrap(out, kernel.out_kind)

    in_arrs = tuple(v._data for v in inputs)
    aux_arrs = tuple(v._data for v in aux)
    hook = _eval_order_hook
    workers = active_workers()
    ranges = (
        chunk_ranges(length, workers)
        if workers > 1 and hook is None
        else [(0, length)]
    )

    out = np.empty(length, dtype=dtype)
    if kernel.batch is not None and hook is None:
        def task(lo, hi):
            out[lo:hi] = kernel.batch(*(a[lo:hi] for a in in_arrs), *aux_arrs)
    else:
        cols = [a.tolist() for a in in_arrs]
        fn = kernel.fn

        def task(lo, hi):
            order = range(lo, hi) if hook is None else hook(length)
            for i in order:
                out[i] = fn(*(c[i] for c in cols), *aux_arrs)

    if len(ranges) > 1:
        run_tasks([lambda lo=lo, hi=hi: task(lo, hi) for lo, hi in ranges])
    else:
        task(*ranges[0])
    out.flags.writeable = False
    return DenseVector._wrap(out, kernel.out_kind)


def map_elements(kernel: MapKernel, inputs, aux=()) -> DenseVector:
    """Apply a scalar kernel over same-length vectors.

    out[i] = kernel.fn(inputs[0][i], ..., *aux) with auxiliaries passed
    as whole read-only arrays for indexed gathers.  Elements are
    independent: evaluation order and chunking never change the output.
    """
    inputs = tuple(inputs)
    aux = tuple(aux)
    tracer = tracing._active
    if tracer is None:
        return _map_impl(kernel, inputs, aux)
    out = _map_impl(
        kernel,
        tuple(unwrap(v) for v in inputs),
        tuple(unwrap(v) for v in aux),
    )
    return tracer.record(
        "map", inputs + aux, out, kernel=kernel, aux_split=len(inputs)
    )


# scalar arithmetic recorded from TracedScalar operands
OPCODE_IMPLS["sadd"] = lambda a, b: a + b
OPCODE_IMPLS["ssub"] = lambda a, b: a - b
OPCODE_IMPLS["smul"] = lambda a, b: a * b
OPCODE_IMPLS["sdiv"] = lambda a, b: a / b
