"""Dense product kernels against the reference and each other."""

import numpy as np
import pytest

from parabl import (
    ExecutionConfig,
    KindError,
    OptLevel,
    ParameterError,
    ShapeError,
    capture,
    execution,
    from_host,
    replay,
    to_host,
)
from parabl.kernels import MXM_VARIANTS, mxm0, mxm1, mxm2a, mxm2b
from parabl.oracles import mxm_naive


def _mat(arr):
    arr = np.asarray(arr, dtype=np.float64)
    return from_host(arr, arr.shape)


def _rand(r, c, seed):
    return np.random.default_rng(seed).standard_normal((r, c))


def _host2d(m):
    return to_host(m).reshape(m.shape)


def test_hand_worked_2x2_all_variants():
    a = _mat([[1.0, 2.0], [3.0, 4.0]])
    b = _mat([[5.0, 6.0], [7.0, 8.0]])
    for name, fn in MXM_VARIANTS.items():
        out = fn(a, b) if name != "mxm2b" else fn(a, b, 2)
        assert to_host(out).tolist() == [19.0, 22.0, 43.0, 50.0], name


def test_identity_product_is_exact():
    ah = np.random.default_rng(5).integers(-5, 6, (6, 6)).astype(np.float64)
    a = _mat(ah)
    eye = _mat(np.eye(6))
    assert _host2d(mxm1(a, eye)).tobytes() == ah.tobytes()
    assert np.array_equal(_host2d(mxm0(eye, a)), ah)


def test_zero_operand_gives_zero():
    z = _mat(np.zeros((4, 4)))
    b = _mat(_rand(4, 4, 6))
    assert not np.any(_host2d(mxm2a(z, b)))


def test_all_variants_within_tolerance_of_reference():
    n = 64
    ah, bh = _rand(n, n, 7), _rand(n, n, 8)
    want = mxm_naive(ah, bh)
    scale = np.max(np.abs(want))
    a, b = _mat(ah), _mat(bh)
    for name, fn in MXM_VARIANTS.items():
        got = _host2d(fn(a, b))
        assert np.max(np.abs(got - want)) <= 1e-12 * n * scale, name


def test_dot_and_row_reduction_forms_agree_bitwise():
    # both accumulate each element through the same reduction tree
    for n in (3, 33, 64):
        a = _mat(_rand(n, n, n))
        b = _mat(_rand(n, n, n + 1))
        assert to_host(mxm0(a, b)).tobytes() == to_host(mxm1(a, b)).tobytes()


def test_rank1_form_matches_reference_bitwise():
    # same rank-1 updates in the same ascending-k order
    ah, bh = _rand(20, 20, 9), _rand(20, 20, 10)
    got = _host2d(mxm2a(_mat(ah), _mat(bh)))
    assert got.tobytes() == mxm_naive(ah, bh).tobytes()


def test_blocking_factor_never_changes_bits():
    a, b = _mat(_rand(10, 10, 11)), _mat(_rand(10, 10, 12))
    base = to_host(mxm2a(a, b)).tobytes()
    for u in (1, 2, 3, 5, 8, 10):
        assert to_host(mxm2b(a, b, u)).tobytes() == base, u
    a, b = _mat(_rand(33, 33, 13)), _mat(_rand(33, 33, 14))
    assert to_host(mxm2b(a, b, 8)).tobytes() == to_host(mxm2a(a, b)).tobytes()


def test_rectangular_shapes():
    ah, bh = _rand(3, 5, 15), _rand(5, 2, 16)
    want = mxm_naive(ah, bh)
    a, b = _mat(ah), _mat(bh)
    for fn in (mxm0, mxm1, mxm2a):
        assert np.max(np.abs(_host2d(fn(a, b)) - want)) <= 1e-12 * 5
    assert np.max(np.abs(_host2d(mxm2b(a, b, 3)) - want)) <= 1e-12 * 5


def test_operand_validation():
    a = _mat(_rand(2, 3, 17))
    with pytest.raises(ShapeError):
        mxm0(a, a)  # inner dimensions 3 vs 2
    v = from_host([1.0, 2.0], 2)
    with pytest.raises(KindError):
        mxm1(v, a)
    ints = from_host(np.arange(4, dtype=np.int32), (2, 2))
    with pytest.raises(KindError):
        mxm2a(ints, ints)


def test_unroll_factor_validation():
    a, b = _mat(_rand(4, 4, 18)), _mat(_rand(4, 4, 19))
    for bad in (0, 5, -1, 2.5, True):
        with pytest.raises(ParameterError):
            mxm2b(a, b, bad)


def test_worker_invariance():
    a, b = _mat(_rand(33, 33, 20)), _mat(_rand(33, 33, 21))
    for name, fn in MXM_VARIANTS.items():
        outs = []
        for w in (1, 2, 4):
            with execution(ExecutionConfig(OptLevel.PARALLEL, w)):
                outs.append(to_host(fn(a, b)).tobytes())
        assert outs[0] == outs[1] == outs[2], name


def test_capture_replay_matches_direct():
    a, b = _mat(_rand(5, 5, 22)), _mat(_rand(5, 5, 23))
    a2, b2 = _mat(_rand(5, 5, 24)), _mat(_rand(5, 5, 25))
    variants = dict(MXM_VARIANTS)
    variants["mxm2b"] = lambda x, y: mxm2b(x, y, 2)
    for name, fn in variants.items():
        t = capture(fn, a, b)
        assert to_host(replay(t, a, b)).tobytes() == to_host(fn(a, b)).tobytes()
        assert (
            to_host(replay(t, a2, b2)).tobytes() == to_host(fn(a2, b2)).tobytes()
        ), name
