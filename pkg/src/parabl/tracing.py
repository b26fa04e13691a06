"""Recording machinery shared by the collective ops and the capture API.

A Tracer is installed while a kernel is being captured.  Collective ops
execute eagerly as usual but additionally append one record per call,
wrapping their results in Traced handles so later ops can refer to them
by operand id.  Scalar results become TracedScalar, which supports the
arithmetic a kernel needs for things like step sizes while keeping the
dataflow in the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import CaptureError

# opcode -> callable on concrete operands, registered by the ops module
# and consumed by trace replay.
OPCODE_IMPLS: dict[str, Any] = {}

_SCALAR_KINDS = {float: "f64", int: "i32", complex: "c128"}


@dataclass(frozen=True)
class TraceOp:
    """One recorded collective call."""

    opcode: str
    args: tuple  # ("ref", id) | ("lit", value)
    out_id: int
    out_kind: str  # "f64" | "i32" | "c128"
    out_shape: Optional[tuple]  # None for scalars, (n,) vectors, (r, c) matrices
    kernel: Any = None  # MapKernel for map ops, else None
    aux_split: Optional[int] = None  # index separating inputs from auxiliaries


class Traced:
    """Handle for a container flowing through a capture.

    Shape and kind queries pass through to the underlying value; the
    recorded trace is specialized to them.  Element reads are refused,
    capture-time control flow may depend on shapes only.
    """

    __slots__ = ("value", "id", "tracer")

    def __init__(self, value, id_, tracer):
        self.value = value
        self.id = id_
        self.tracer = tracer

    @property
    def kind(self):
        return self.value.kind

    @property
    def shape(self):
        return self.value.shape

    @property
    def length(self):
        return self.value.length

    @property
    def nrows(self):
        return self.value.nrows

    @property
    def ncols(self):
        return self.value.ncols

    def __repr__(self):
        return f"Traced(%{self.id}, {self.value!r})"


class TracedScalar:
    """Handle for a scalar produced by a reduction during capture.

    Arithmetic with other scalars is recorded (sadd/ssub/smul/sdiv);
    comparisons and float()/int()/complex() read the eager value so
    ordinary Python control flow keeps working.
    """

    __slots__ = ("value", "id", "tracer", "kind")

    def __init__(self, value, id_, tracer, kind):
        self.value = value
        self.id = id_
        self.tracer = tracer
        self.kind = kind

    def __float__(self):
        return float(self.value)

    def __int__(self):
        return int(self.value)

    def __complex__(self):
        return complex(self.value)

    def __bool__(self):
        return bool(self.value)

    def _binop(self, other, opcode, fn, swapped=False):
        if isinstance(other, TracedScalar):
            if other.tracer is not self.tracer:
                raise CaptureError("scalar operands belong to different captures")
            ov = other.value
        elif isinstance(other, (int, float, complex)):
            ov = other
        else:
            return NotImplemented
        a, b = (ov, self.value) if swapped else (self.value, ov)
        out = fn(a, b)
        left = other if swapped else self
        right = self if swapped else other
        return self.tracer.record_scalar(opcode, (left, right), out)

    def __add__(self, other):
        return self._binop(other, "sadd", lambda a, b: a + b)

    def __radd__(self, other):
        return self._binop(other, "sadd", lambda a, b: a + b, swapped=True)

    def __sub__(self, other):
        return self._binop(other, "ssub", lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, "ssub", lambda a, b: a - b, swapped=True)

    def __mul__(self, other):
        return self._binop(other, "smul", lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binop(other, "smul", lambda a, b: a * b, swapped=True)

    def __truediv__(self, other):
        return self._binop(other, "sdiv", lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, "sdiv", lambda a, b: a / b, swapped=True)

    def __lt__(self, other):
        return self.value < _eager(other)

    def __le__(self, other):
        return self.value <= _eager(other)

    def __gt__(self, other):
        return self.value > _eager(other)

    def __ge__(self, other):
        return self.value >= _eager(other)

    def __repr__(self):
        return f"TracedScalar(%{self.id}, {self.value!r})"


def _eager(x):
    return x.value if isinstance(x, TracedScalar) else x


def is_traced(x) -> bool:
    return isinstance(x, (Traced, TracedScalar))


def unwrap(x):
    return x.value if isinstance(x, (Traced, TracedScalar)) else x


def scalar_kind_token(value) -> str:
    for py_type, token in _SCALAR_KINDS.items():
        if type(value) is py_type:
            return token
    # numpy scalars and bools never reach here; reductions hand back
    # plain Python scalars.
    raise CaptureError(f"unsupported scalar type {type(value).__name__}")


@dataclass
class Tracer:
    """Accumulates TraceOps while a capture is active."""

    inputs: list = field(default_factory=list)  # (kind_token, shape) per slot
    ops: list = field(default_factory=list)
    _next_id: int = 0

    def fresh_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i

    def add_input(self, container) -> Traced:
        self.inputs.append((container.kind.value, container.shape))
        return Traced(container, self.fresh_id(), self)

    def describe_args(self, args) -> tuple:
        """Turn call arguments into ref/lit descriptors.

        Containers must already be Traced (host data that was not passed
        as a capture input cannot be replayed) and must belong to this
        tracer.
        """
        descs = []
        for a in args:
            if isinstance(a, (Traced, TracedScalar)):
                if a.tracer is not self:
                    raise CaptureError("operand belongs to a different capture")
                descs.append(("ref", a.id))
            elif isinstance(a, (int, float, complex)):
                descs.append(("lit", a))
            else:
                raise CaptureError(
                    "host container used inside a capture without being "
                    "passed as an input"
                )
        return tuple(descs)

    def record(self, opcode, args, result, kernel=None, aux_split=None):
        """Record one op and wrap its eager result."""
        descs = self.describe_args(args)
        out_id = self.fresh_id()
        if isinstance(result, (int, float, complex)):
            token = scalar_kind_token(result)
            self.ops.append(
                TraceOp(opcode, descs, out_id, token, None, kernel, aux_split)
            )
            return TracedScalar(result, out_id, self, token)
        self.ops.append(
            TraceOp(
                opcode, descs, out_id, result.kind.value, result.shape,
                kernel, aux_split,
            )
        )
        return Traced(result, out_id, self)

    def record_scalar(self, opcode, args, result):
        return self.record(opcode, args, result)


_active: Optional[Tracer] = None


def current_tracer() -> Optional[Tracer]:
    return _active


def set_tracer(tracer: Optional[Tracer]):
    global _active
    _active = tracer


def find_tracer(args) -> Optional[Tracer]:
    """Tracer owning any traced argument, or None for plain execution."""
    for a in args:
        if isinstance(a, (Traced, TracedScalar)):
            return a.tracer
    return None
