"""Dense value-semantic containers.

Vectors and matrices own an immutable snapshot of their elements; the
host buffer they were built from can be mutated or dropped without the
container noticing.  Matrices index mathematically as (row, col) over
row-major storage.
"""

from __future__ import annotations

import enum
from typing import Sequence, Union

import numpy as np

from .errors import BoundsError, CaptureError, KindError, ShapeError
from .tracing import is_traced


class ElemKind(enum.Enum):
    """Element kinds a container can hold."""

    REAL64 = "f64"
    INDEX32 = "i32"
    COMPLEX128 = "c128"

    @property
    def dtype(self) -> np.dtype:
        return _DTYPES[self]

    @property
    def zero(self):
        return _ZEROS[self]


_DTYPES = {
    ElemKind.REAL64: np.dtype(np.float64),
    ElemKind.INDEX32: np.dtype(np.int32),
    ElemKind.COMPLEX128: np.dtype(np.complex128),
}
_ZEROS = {
    ElemKind.REAL64: 0.0,
    ElemKind.INDEX32: 0,
    ElemKind.COMPLEX128: 0j,
}
KIND_BY_TOKEN = {k.value: k for k in ElemKind}

_PY_SCALARS = {
    ElemKind.REAL64: float,
    ElemKind.INDEX32: int,
    ElemKind.COMPLEX128: complex,
}

_I32_MIN = -(2**31)
_I32_MAX = 2**31 - 1


def _infer_kind(arr: np.ndarray) -> ElemKind:
    if np.issubdtype(arr.dtype, np.complexfloating):
        return ElemKind.COMPLEX128
    if np.issubdtype(arr.dtype, np.signedinteger) or np.issubdtype(
        arr.dtype, np.unsignedinteger
    ):
        return ElemKind.INDEX32
    if np.issubdtype(arr.dtype, np.floating):
        return ElemKind.REAL64
    raise KindError(f"cannot infer element kind from dtype {arr.dtype}")


def _coerce(arr: np.ndarray, kind: ElemKind) -> np.ndarray:
    if kind is ElemKind.INDEX32 and arr.dtype != np.int32:
        if arr.size and (arr.min() < _I32_MIN or arr.max() > _I32_MAX):
            raise KindError("index values do not fit in 32 bits")
    out = np.array(arr, dtype=kind.dtype, copy=True)
    out.flags.writeable = False
    return out


class DenseVector:
    """One-dimensional container with value semantics."""

    __slots__ = ("kind", "_data")

    def __init__(self, data: np.ndarray, kind: ElemKind):
        self.kind = kind
        self._data = data

    @classmethod
    def _wrap(cls, arr: np.ndarray, kind: ElemKind) -> "DenseVector":
        # Fast path for op results: arr is freshly allocated (or a
        # read-only view over immutable data), so no copy is taken.
        v = cls.__new__(cls)
        v.kind = kind
        v._data = arr
        return v

    @property
    def length(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self) -> tuple:
        return (self.length,)

    def __len__(self) -> int:
        return self.length

    def __repr__(self):
        return f"DenseVector(len={self.length}, kind={self.kind.value})"


class DenseMatrix:
    """Two-dimensional container with value semantics, (row, col) indexed."""

    __slots__ = ("kind", "_data")

    def __init__(self, data: np.ndarray, kind: ElemKind):
        self.kind = kind
        self._data = data

    @classmethod
    def _wrap(cls, arr: np.ndarray, kind: ElemKind) -> "DenseMatrix":
        m = cls.__new__(cls)
        m.kind = kind
        m._data = arr
        return m

    @property
    def nrows(self) -> int:
        return self._data.shape[0]

    @property
    def ncols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple:
        return self._data.shape[0], self._data.shape[1]

    def __repr__(self):
        return (
            f"DenseMatrix({self.nrows}x{self.ncols}, kind={self.kind.value})"
        )


Container = Union[DenseVector, DenseMatrix]


def from_host(
    buffer: Sequence, shape, kind: ElemKind | None = None
) -> Container:
    """Copy a host buffer into a fresh container.

    shape is an int for vectors or a (rows, cols) pair for matrices;
    matrix buffers are consumed in row-major order.  When kind is not
    given it is inferred from the data: complex values give COMPLEX128,
    integer-typed numpy arrays give INDEX32, everything else REAL64.
    """
    arr = np.asarray(buffer)
    if arr.ndim > 1:
        arr = arr.reshape(-1)
    if kind is None:
        kind = _infer_kind(arr)
        if kind is ElemKind.INDEX32 and not isinstance(buffer, np.ndarray):
            # Plain Python ints are valid reals; only explicit int arrays
            # (or an explicit kind argument) select INDEX32.
            kind = ElemKind.REAL64
    data = _coerce(arr, kind)
    if isinstance(shape, (tuple, list)):
        if len(shape) != 2:
            raise ShapeError(f"matrix shape must be (rows, cols), got {shape}")
        r, c = int(shape[0]), int(shape[1])
        if r < 0 or c < 0:
            raise ShapeError(f"negative dimension in shape {shape}")
        if data.shape[0] != r * c:
            raise ShapeError(
                f"buffer holds {data.shape[0]} elements, shape "
                f"({r}, {c}) needs {r * c}"
            )
        m = data.reshape(r, c)
        m.flags.writeable = False
        return DenseMatrix._wrap(m, kind)
    n = int(shape)
    if n < 0:
        raise ShapeError(f"negative vector length {n}")
    if data.shape[0] != n:
        raise ShapeError(
            f"buffer holds {data.shape[0]} elements, expected {n}"
        )
    return DenseVector._wrap(data, kind)


def to_host(c: Container) -> np.ndarray:
    """Copy a container out to a contiguous 1-D host array (row-major)."""
    if is_traced(c):
        raise CaptureError("host read of a traced container during capture")
    _check_container(c)
    return np.ascontiguousarray(c._data).reshape(-1).copy()


def get(v: DenseVector, i: int):
    """Read one vector element as a Python scalar."""
    if is_traced(v):
        raise CaptureError("host read of a traced container during capture")
    if not isinstance(v, DenseVector):
        raise KindError(f"get expects a vector, got {type(v).__name__}")
    if not 0 <= i < v.length:
        raise BoundsError(f"index {i} outside vector of length {v.length}")
    return _PY_SCALARS[v.kind](v._data[i])


def get2(m: DenseMatrix, i: int, j: int):
    """Read one matrix element (row i, column j) as a Python scalar."""
    if is_traced(m):
        raise CaptureError("host read of a traced container during capture")
    if not isinstance(m, DenseMatrix):
        raise KindError(f"get2 expects a matrix, got {type(m).__name__}")
    if not 0 <= i < m.nrows:
        raise BoundsError(f"row {i} outside matrix with {m.nrows} rows")
    if not 0 <= j < m.ncols:
        raise BoundsError(f"column {j} outside matrix with {m.ncols} columns")
    return _PY_SCALARS[m.kind](m._data[i, j])


def _check_container(c):
    if not isinstance(c, (DenseVector, DenseMatrix)):
        raise KindError(f"expected a container, got {type(c).__name__}")
