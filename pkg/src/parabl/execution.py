"""Execution configuration and the worker-thread machinery.

The active ExecutionConfig decides whether collective ops fan work out
to a thread pool.  Results never depend on the worker count: reductions
follow a fixed tree and element-wise work is split into chunks that
cannot interact.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

from .errors import ConfigError

ENV_WORKERS = "PARABL_NUM_WORKERS"

# Minimum elements of work per parallel task; anything smaller runs
# serially because the dispatch overhead would dominate.
CHUNK = 1024

# Reductions are built from fixed 256-element blocks; workers are only
# ever assigned whole blocks.
REDUCE_BLOCK = 256


class OptLevel(enum.Enum):
    SERIAL = "serial"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class ExecutionConfig:
    """How collective ops run: serially or across num_workers threads."""

    opt_level: OptLevel = OptLevel.SERIAL
    num_workers: int = 1

    def __post_init__(self):
        if not isinstance(self.opt_level, OptLevel):
            raise ConfigError(f"bad opt_level {self.opt_level!r}")
        if not isinstance(self.num_workers, int) or self.num_workers < 1:
            raise ConfigError(
                f"num_workers must be a positive integer, got "
                f"{self.num_workers!r}"
            )


_current: ExecutionConfig | None = None
_env_default: ExecutionConfig | None = None  # cached; rebuilt on reset


def _default_config() -> ExecutionConfig:
    global _env_default
    if _env_default is None:
        raw = os.environ.get(ENV_WORKERS)
        if raw is None:
            _env_default = ExecutionConfig(OptLevel.SERIAL, 1)
        else:
            try:
                w = int(raw)
            except ValueError:
                raise ConfigError(
                    f"{ENV_WORKERS} must be a positive integer, got {raw!r}"
                )
            if w < 1:
                raise ConfigError(
                    f"{ENV_WORKERS} must be a positive integer, got {raw!r}"
                )
            _env_default = ExecutionConfig(OptLevel.PARALLEL, w)
    return _env_default


def current_execution() -> ExecutionConfig:
    """The active config; defaults to serial unless PARABL_NUM_WORKERS is set."""
    if _current is not None:
        return _current
    return _default_config()


def set_execution(config: ExecutionConfig | None):
    """Install a config; None restores the environment-driven default.

    Restoring the default re-reads the environment variable.
    """
    global _current, _env_default
    if config is not None and not isinstance(config, ExecutionConfig):
        raise ConfigError(f"expected ExecutionConfig, got {type(config).__name__}")
    if config is None:
        _env_default = None
    _current = config


@contextmanager
def execution(config: ExecutionConfig):
    """Temporarily run under the given config."""
    global _current
    prev = _current
    set_execution(config)
    try:
        yield config
    finally:
        _current = prev


def active_workers() -> int:
    cfg = _current
    if cfg is None:
        cfg = _default_config()
    return cfg.num_workers if cfg.opt_level is OptLevel.PARALLEL else 1


_pools: dict[int, ThreadPoolExecutor] = {}


def _pool(workers: int) -> ThreadPoolExecutor:
    pool = _pools.get(workers)
    if pool is None:
        pool = ThreadPoolExecutor(max_workers=workers)
        _pools[workers] = pool
    return pool


def chunk_ranges(total: int, workers: int, min_chunk: int = CHUNK) -> list:
    """Contiguous (lo, hi) work ranges, each at least min_chunk long.

    Returns a single range when the work is too small to split.  The
    split depends only on total and workers, never on runtime state.
    """
    if total <= 0:
        return [(0, total)]
    pieces = min(workers, total // min_chunk)
    if pieces <= 1:
        return [(0, total)]
    base, extra = divmod(total, pieces)
    ranges = []
    lo = 0
    for i in range(pieces):
        hi = lo + base + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def run_tasks(tasks) -> list:
    """Run zero-arg callables, in parallel when more than one, results in order."""
    if len(tasks) == 1:
        return [tasks[0]()]
    pool = _pool(active_workers())
    futures = [pool.submit(t) for t in tasks]
    return [f.result() for f in futures]
