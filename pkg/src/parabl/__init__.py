"""Deterministic data-parallel containers, collectives, and kernels."""

from .containers import (
    DenseMatrix,
    DenseVector,
    ElemKind,
    from_host,
    get,
    get2,
    to_host,
)
from .capture import Trace, capture, dump, parse, replay
from .errors import (
    BoundsError,
    BreakdownError,
    CaptureError,
    ConfigError,
    FormatError,
    KindError,
    ParablError,
    ParameterError,
    ParseError,
    ReplayError,
    ShapeError,
    SingularError,
)
from .execution import (
    ExecutionConfig,
    OptLevel,
    current_execution,
    execution,
    set_execution,
)
from .ops import (
    MapKernel,
    add_reduce,
    add_reduce_rows,
    cat,
    col,
    ewise,
    fill,
    map_elements,
    pack,
    register_map_kernel,
    repeat,
    repeat_col,
    repeat_row,
    replace_col,
    row,
    scale,
    section,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsError",
    "BreakdownError",
    "CaptureError",
    "ConfigError",
    "DenseMatrix",
    "DenseVector",
    "ElemKind",
    "ExecutionConfig",
    "FormatError",
    "KindError",
    "MapKernel",
    "OptLevel",
    "ParablError",
    "ParameterError",
    "ParseError",
    "ReplayError",
    "ShapeError",
    "SingularError",
    "Trace",
    "add_reduce",
    "add_reduce_rows",
    "capture",
    "cat",
    "col",
    "current_execution",
    "dump",
    "ewise",
    "execution",
    "fill",
    "from_host",
    "get",
    "get2",
    "map_elements",
    "pack",
    "parse",
    "register_map_kernel",
    "repeat",
    "repeat_col",
    "repeat_row",
    "replace_col",
    "replay",
    "row",
    "scale",
    "section",
    "set_execution",
    "to_host",
    "__version__",
]
