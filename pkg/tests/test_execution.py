"""Execution configuration, environment default, and work splitting."""

import os

import numpy as np
import pytest

from parabl import (
    ConfigError,
    ExecutionConfig,
    OptLevel,
    add_reduce,
    current_execution,
    execution,
    from_host,
    set_execution,
)
from parabl.execution import CHUNK, ENV_WORKERS, chunk_ranges, run_tasks


def _restore_env(old):
    if old is None:
        os.environ.pop(ENV_WORKERS, None)
    else:
        os.environ[ENV_WORKERS] = old
    set_execution(None)


# --- configuration ---

def test_config_validation():
    cfg = ExecutionConfig(OptLevel.PARALLEL, 4)
    assert cfg.num_workers == 4
    with pytest.raises(ConfigError):
        ExecutionConfig("parallel", 2)
    with pytest.raises(ConfigError):
        ExecutionConfig(OptLevel.SERIAL, 0)
    with pytest.raises(ConfigError):
        ExecutionConfig(OptLevel.SERIAL, 1.5)


def test_default_is_serial():
    old = os.environ.pop(ENV_WORKERS, None)
    set_execution(None)
    try:
        cfg = current_execution()
        assert cfg.opt_level is OptLevel.SERIAL
        assert cfg.num_workers == 1
    finally:
        _restore_env(old)


def test_env_variable_sets_parallel_default():
    old = os.environ.get(ENV_WORKERS)
    os.environ[ENV_WORKERS] = "3"
    set_execution(None)
    try:
        cfg = current_execution()
        assert cfg.opt_level is OptLevel.PARALLEL
        assert cfg.num_workers == 3
    finally:
        _restore_env(old)


def test_env_variable_rejects_garbage():
    old = os.environ.get(ENV_WORKERS)
    try:
        for bad in ("zero", "0", "-2", "2.5"):
            os.environ[ENV_WORKERS] = bad
            set_execution(None)
            with pytest.raises(ConfigError):
                current_execution()
    finally:
        _restore_env(old)


def test_explicit_config_overrides_env():
    old = os.environ.get(ENV_WORKERS)
    os.environ[ENV_WORKERS] = "7"
    set_execution(None)
    try:
        set_execution(ExecutionConfig(OptLevel.SERIAL, 1))
        assert current_execution().opt_level is OptLevel.SERIAL
        set_execution(None)
        assert current_execution().num_workers == 7
    finally:
        _restore_env(old)


def test_execution_context_restores_previous():
    outer = ExecutionConfig(OptLevel.PARALLEL, 2)
    set_execution(outer)
    try:
        with execution(ExecutionConfig(OptLevel.PARALLEL, 5)):
            assert current_execution().num_workers == 5
        assert current_execution() is outer
    finally:
        set_execution(None)


def test_set_execution_rejects_non_config():
    with pytest.raises(ConfigError):
        set_execution("serial")


# --- work splitting ---

def test_chunk_ranges_tile_the_index_space():
    for total in (1, CHUNK - 1, CHUNK, 3 * CHUNK + 17, 10 * CHUNK):
        for workers in (1, 2, 3, 8):
            ranges = chunk_ranges(total, workers)
            assert ranges[0][0] == 0
            assert ranges[-1][1] == total
            for (lo, hi), (lo2, _) in zip(ranges, ranges[1:]):
                assert hi == lo2
                assert hi > lo


def test_chunk_ranges_respect_minimum():
    ranges = chunk_ranges(CHUNK * 2, 8)
    assert len(ranges) <= 2
    for lo, hi in ranges:
        assert hi - lo >= CHUNK
    assert chunk_ranges(CHUNK - 1, 8) == [(0, CHUNK - 1)]
    assert chunk_ranges(0, 4) == [(0, 0)]


def test_chunk_ranges_custom_minimum():
    ranges = chunk_ranges(16, 4, min_chunk=4)
    assert len(ranges) == 4
    assert ranges == [(0, 4), (4, 8), (8, 12), (12, 16)]


def test_run_tasks_preserves_order():
    results = run_tasks([lambda i=i: i * i for i in range(5)])
    assert results == [0, 1, 4, 9, 16]


# --- worker count never changes results ---

def test_parallel_one_matches_serial_bitwise():
    data = np.random.default_rng(7).standard_normal(4 * CHUNK)
    v = from_host(data, data.shape[0])
    with execution(ExecutionConfig(OptLevel.SERIAL, 1)):
        serial = add_reduce(v)
    with execution(ExecutionConfig(OptLevel.PARALLEL, 1)):
        par1 = add_reduce(v)
    with execution(ExecutionConfig(OptLevel.PARALLEL, 4)):
        par4 = add_reduce(v)
    assert serial == par1 == par4
