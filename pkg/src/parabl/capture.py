"""Record-and-replay for collective programs.

capture() runs a Python function once with traced stand-ins for its
container arguments and records every collective it performs into a
Trace: a linear SSA program over typed values.  replay() executes a
Trace against fresh inputs without re-entering the Python function.
dump()/parse() give the trace a stable text form.

Control flow is resolved at capture time: loops unroll, and branches
take whichever side the example inputs chose.  A trace therefore
replays the recorded schedule; callers whose iteration count depends
on the data (iterative solvers) get a faithful replay only for inputs
that drive the same schedule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .containers import (
    KIND_BY_TOKEN,
    Container,
    DenseMatrix,
    DenseVector,
)
from .errors import CaptureError, ParseError, ReplayError
from .ops import MAP_KERNELS, _fill_impl, _map_impl, _pack_impl
from .tracing import (
    OPCODE_IMPLS,
    TraceOp,
    Traced,
    TracedScalar,
    Tracer,
    current_tracer,
    scalar_kind_token,
    set_tracer,
)

_HEADER = "parabl-trace v1"


@dataclass
class Trace:
    """A captured program: typed inputs, SSA ops, output references."""

    inputs: list = field(default_factory=list)  # (kind token, shape tuple)
    ops: list = field(default_factory=list)
    output_ids: tuple = ()
    tuple_output: bool = False

    def validate(self) -> None:
        defined = set(range(len(self.inputs)))
        for op in self.ops:
            for tag, val in op.args:
                if tag == "ref" and val not in defined:
                    raise ReplayError(
                        f"op %{op.out_id} references undefined value %{val}"
                    )
            if op.out_id in defined:
                raise ReplayError(f"value %{op.out_id} defined twice")
            defined.add(op.out_id)
            if op.opcode == "map":
                if op.kernel is None:
                    raise ReplayError(f"map op %{op.out_id} has no kernel")
                if not 1 <= op.aux_split <= len(op.args):
                    raise ReplayError(
                        f"map op %{op.out_id} has bad input split "
                        f"{op.aux_split}"
                    )
        if not self.output_ids:
            raise ReplayError("trace has no outputs")
        for out in self.output_ids:
            if out not in defined:
                raise ReplayError(f"output references undefined value %{out}")


def capture(fn: Callable, *inputs: Container) -> Trace:
    """Run fn once over traced handles and record its collectives.

    Positional arguments must be containers; structural scalars such
    as sizes belong in a closure and are recorded as literals.  fn may
    return a container, a captured scalar, or a tuple of those.
    """
    if current_tracer() is not None:
        raise CaptureError("capture is already active")
    for c in inputs:
        if not isinstance(c, (DenseVector, DenseMatrix)):
            raise CaptureError(
                f"capture inputs must be containers, got {type(c).__name__}"
            )
    tracer = Tracer()
    handles = [tracer.add_input(c) for c in inputs]
    set_tracer(tracer)
    try:
        result = fn(*handles)
    finally:
        set_tracer(None)

    if isinstance(result, tuple) and len(result) == 1:
        result = result[0]
    if isinstance(result, tuple):
        outs = result
        tuple_output = True
    else:
        outs = (result,)
        tuple_output = False
    ids = []
    for r in outs:
        if not isinstance(r, (Traced, TracedScalar)):
            raise CaptureError(
                "capture output was not computed from the traced inputs"
            )
        if r.tracer is not tracer:
            raise CaptureError("capture output belongs to a different capture")
        ids.append(r.id)

    trace = Trace(
        inputs=list(tracer.inputs),
        ops=list(tracer.ops),
        output_ids=tuple(ids),
        tuple_output=tuple_output,
    )
    trace.validate()
    return trace


def _shape_of(c) -> tuple:
    return c.shape


def replay(trace: Trace, *inputs: Container):
    """Execute a trace against fresh inputs.

    Input kinds and shapes must match the capture exactly; the replayed
    collectives then reproduce the captured run bit for bit.
    """
    if len(inputs) != len(trace.inputs):
        raise ReplayError(
            f"trace takes {len(trace.inputs)} inputs, got {len(inputs)}"
        )
    env: dict = {}
    for i, (c, (token, shape)) in enumerate(zip(inputs, trace.inputs)):
        if not isinstance(c, (DenseVector, DenseMatrix)):
            raise ReplayError(
                f"replay input {i} must be a container, got {type(c).__name__}"
            )
        if c.kind.value != token or c.shape != tuple(shape):
            want = _format_type(token, tuple(shape))
            got = _format_type(c.kind.value, c.shape)
            raise ReplayError(f"replay input {i} is {got}, trace wants {want}")
        env[i] = c

    for op in trace.ops:
        args = []
        for tag, val in op.args:
            if tag == "ref":
                if val not in env:
                    raise ReplayError(
                        f"op %{op.out_id} references undefined value %{val}"
                    )
                args.append(env[val])
            else:
                args.append(val)
        if op.opcode == "map":
            if op.kernel is None:
                raise ReplayError(f"map op %{op.out_id} has no kernel")
            result = _map_impl(
                op.kernel,
                tuple(args[: op.aux_split]),
                tuple(args[op.aux_split :]),
            )
        elif op.opcode == "fill":
            shape = op.out_shape
            arg_shape = shape[0] if len(shape) == 1 else tuple(shape)
            result = _fill_impl(arg_shape, KIND_BY_TOKEN[op.out_kind], args[0])
        elif op.opcode == "pack":
            result = _pack_impl(tuple(args), KIND_BY_TOKEN[op.out_kind])
        else:
            impl = OPCODE_IMPLS.get(op.opcode)
            if impl is None:
                raise ReplayError(f"unknown opcode {op.opcode!r}")
            result = impl(*args)
        if op.out_shape is None:
            if scalar_kind_token(result) != op.out_kind:
                raise ReplayError(
                    f"op %{op.out_id} produced {type(result).__name__}, "
                    f"trace expects scalar {op.out_kind}"
                )
        else:
            if result.kind.value != op.out_kind or result.shape != tuple(
                op.out_shape
            ):
                raise ReplayError(
                    f"op %{op.out_id} produced "
                    f"{_format_type(result.kind.value, result.shape)}, trace "
                    f"expects {_format_type(op.out_kind, tuple(op.out_shape))}"
                )
        env[op.out_id] = result

    outs = tuple(env[i] for i in trace.output_ids)
    return outs if trace.tuple_output else outs[0]


# ---------------------------------------------------------------------------
# text form

def _format_type(token: str, shape) -> str:
    if shape is None:
        return token
    return f"{token}[{','.join(str(d) for d in shape)}]"


def _format_literal(v) -> str:
    if isinstance(v, complex):
        return f"({v.real!r},{v.imag!r})"
    return repr(v)


def _format_arg(arg) -> str:
    tag, val = arg
    if tag == "ref":
        return f"%{val}"
    return _format_literal(val)


def dump(trace: Trace) -> str:
    """Render a trace as text; parse() inverts this exactly."""
    lines = [_HEADER]
    for i, (token, shape) in enumerate(trace.inputs):
        lines.append(f"input %{i} : {_format_type(token, tuple(shape))}")
    for op in trace.ops:
        ann = _format_type(
            op.out_kind, None if op.out_shape is None else tuple(op.out_shape)
        )
        if op.opcode == "map":
            ins = ", ".join(_format_arg(a) for a in op.args[: op.aux_split])
            aux = ", ".join(_format_arg(a) for a in op.args[op.aux_split :])
            body = f"map({op.kernel.name}; {ins}"
            if aux:
                body += f"; aux={aux}"
            body += ")"
        else:
            body = f"{op.opcode}({', '.join(_format_arg(a) for a in op.args)})"
        lines.append(f"%{op.out_id} = {body} : {ann}")
    for out in trace.output_ids:
        lines.append(f"output %{out}")
    return "\n".join(lines) + "\n"


_TYPE_RE = re.compile(r"^(f64|i32|c128)(?:\[(\d+(?:,\d+)?)\])?$")
_INT_RE = re.compile(r"^[+-]?\d+$")
_COMPLEX_RE = re.compile(r"^\(([^,]+),([^)]+)\)$")


def _parse_type(text: str, line_no: int):
    m = _TYPE_RE.match(text.strip())
    if m is None:
        raise ParseError(f"bad type annotation {text.strip()!r}", line=line_no)
    token = m.group(1)
    if m.group(2) is None:
        return token, None
    return token, tuple(int(d) for d in m.group(2).split(","))


def _parse_literal(text: str, line_no: int):
    m = _COMPLEX_RE.match(text)
    if m is not None:
        try:
            return complex(float(m.group(1)), float(m.group(2)))
        except ValueError:
            raise ParseError(f"bad complex literal {text!r}", line=line_no)
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"bad literal {text!r}", line=line_no)


def _parse_arg(text: str, line_no: int):
    text = text.strip()
    if text.startswith("%"):
        if not _INT_RE.match(text[1:]):
            raise ParseError(f"bad value reference {text!r}", line=line_no)
        return ("ref", int(text[1:]))
    return ("lit", _parse_literal(text, line_no))


def _split_args(text: str, line_no: int) -> list:
    # split on commas outside parentheses
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses", line=line_no)
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced parentheses", line=line_no)
    tail = text[start:]
    if tail.strip() or parts:
        parts.append(tail)
    return [p for p in parts if p.strip()]


_OP_RE = re.compile(r"^%(\d+) = (\w+)\((.*)\) : (\S+)$")
_INPUT_RE = re.compile(r"^input %(\d+) : (\S+)$")
_OUTPUT_RE = re.compile(r"^output %(\d+)$")


def parse(text: str) -> Trace:
    """Rebuild a trace from its text form.

    Map kernels are resolved by name against the registry; an
    unregistered name is a parse error.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != _HEADER:
        raise ParseError(f"expected header {_HEADER!r}", line=1)

    trace = Trace()
    outputs = []
    defined = set()
    seen_op = False
    for idx, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue

        m = _INPUT_RE.match(line)
        if m is not None:
            if seen_op or outputs:
                raise ParseError("input after first op", line=idx)
            vid = int(m.group(1))
            if vid != len(trace.inputs):
                raise ParseError(
                    f"expected input %{len(trace.inputs)}, got %{vid}", line=idx
                )
            token, shape = _parse_type(m.group(2), idx)
            if shape is None:
                raise ParseError("inputs must be containers", line=idx)
            trace.inputs.append((token, shape))
            defined.add(vid)
            continue

        m = _OUTPUT_RE.match(line)
        if m is not None:
            vid = int(m.group(1))
            if vid not in defined:
                raise ParseError(f"output %{vid} is undefined", line=idx)
            outputs.append(vid)
            continue

        m = _OP_RE.match(line)
        if m is None:
            raise ParseError(f"unrecognized line {line!r}", line=idx)
        if outputs:
            raise ParseError("op after output", line=idx)
        seen_op = True
        vid = int(m.group(1))
        opcode = m.group(2)
        body = m.group(3)
        token, shape = _parse_type(m.group(4), idx)
        if vid in defined:
            raise ParseError(f"value %{vid} defined twice", line=idx)

        kernel = None
        aux_split = None
        if opcode == "map":
            segs = body.split(";")
            if len(segs) not in (2, 3):
                raise ParseError("map needs (kernel; inputs[; aux=...])", line=idx)
            name = segs[0].strip()
            kernel = MAP_KERNELS.get(name)
            if kernel is None:
                raise ParseError(f"unknown map kernel {name!r}", line=idx)
            args = [_parse_arg(a, idx) for a in _split_args(segs[1], idx)]
            aux_split = len(args)
            if len(segs) == 3:
                aux_text = segs[2].strip()
                if not aux_text.startswith("aux="):
                    raise ParseError("map auxiliaries need aux=", line=idx)
                args += [
                    _parse_arg(a, idx)
                    for a in _split_args(aux_text[4:], idx)
                ]
        else:
            args = [_parse_arg(a, idx) for a in _split_args(body, idx)]

        for tag, val in args:
            if tag == "ref" and val not in defined:
                raise ParseError(f"%{val} used before definition", line=idx)
        trace.ops.append(
            TraceOp(
                opcode=opcode,
                args=tuple(args),
                out_id=vid,
                out_kind=token,
                out_shape=shape,
                kernel=kernel,
                aux_split=aux_split,
            )
        )
        defined.add(vid)

    if not outputs:
        raise ParseError("trace has no outputs", line=len(lines))
    trace.output_ids = tuple(outputs)
    trace.tuple_output = len(outputs) > 1
    trace.validate()
    return trace
