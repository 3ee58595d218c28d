"""The compiled and pure-Python kernels must agree bit for bit on samples.

Deterministic functions may differ by a few ulps: Python's math.lgamma is
not the C library one.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gll import _pykernels
from conftest import _kernels, requires_cython

pytestmark = requires_cython

CASES = [(0.5, 0.0, 0.0), (2.0, 1.0, 1.0), (5.0, 2.0, 2.5), (0.3, 10.0, 0.0)]


@pytest.mark.parametrize("case", CASES)
def test_sample_gll_bit_identical(case):
    a = _kernels.sample_gll(np.random.PCG64(7), 2000, *case)
    b = _pykernels.sample_gll(np.random.PCG64(7), 2000, *case)
    assert a.tobytes() == b.tobytes()


def test_sample_ll_bit_identical():
    a = _kernels.sample_ll(np.random.PCG64(3), 2000, 1.5, 0.7)
    b = _pykernels.sample_ll(np.random.PCG64(3), 2000, 1.5, 0.7)
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("shape", [1.0, 1.5, 4.0, 30.0])
def test_gamma_bit_identical(shape):
    a = _kernels.gamma_variates(np.random.PCG64(11), 1000, shape, 2.0)
    b = _pykernels.gamma_variates(np.random.PCG64(11), 1000, shape, 2.0)
    assert a.tobytes() == b.tobytes()


def test_stream_position_shared():
    # continuing the same bit generator across backends gives one stream
    bg1, bg2 = np.random.PCG64(5), np.random.PCG64(5)
    first = np.concatenate([_kernels.sample_gll(bg1, 50, 2, 1, 1), _pykernels.sample_gll(bg1, 50, 2, 1, 1)])
    second = _kernels.sample_gll(bg2, 100, 2, 1, 1)
    assert first.tobytes() == second.tobytes()


@given(st.floats(1e-12, 1 - 1e-12), st.floats(0.1, 30), st.floats(0, 10), st.floats(0, 5))
def test_cdf_sf_agree(x, theta, lam, p):
    assert _kernels.cdf_scalar(x, theta, lam, p) == pytest.approx(_pykernels.cdf_scalar(x, theta, lam, p), rel=1e-14, abs=1e-300)
    assert _kernels.sf_scalar(x, theta, lam, p) == pytest.approx(_pykernels.sf_scalar(x, theta, lam, p), rel=1e-14, abs=1e-300)


def test_array_kernels_keep_shape():
    x = np.linspace(0.1, 0.9, 6).reshape(2, 3)
    for k in (_kernels, _pykernels):
        assert k.cdf_array(x, 2, 1, 1).shape == (2, 3)
        assert k.sf_array(x, 2, 1, 1).shape == (2, 3)


@given(st.floats(0.0, 0.999), st.sampled_from([(0, 0.5, 1.0), (1, 0.5, 1.0), (2, 2.5, 0.5)]))
def test_integrands_agree(t, risk):
    kind, a, b = risk
    assert _kernels.ph_integrand(t, kind, a, b, 0.4) == pytest.approx(_pykernels.ph_integrand(t, kind, a, b, 0.4), rel=1e-14, abs=1e-300)
    assert _kernels.distorted_integrand(t, kind, a, b, 0.3, 0.5, 1.0) == pytest.approx(
        _pykernels.distorted_integrand(t, kind, a, b, 0.3, 0.5, 1.0), rel=1e-14, abs=1e-300)


def test_backend_selection(monkeypatch):
    import importlib

    from gll import _backend

    monkeypatch.setenv("GLL_PURE_PYTHON", "1")
    assert importlib.reload(_backend).BACKEND == "python"
    monkeypatch.setenv("GLL_PURE_PYTHON", "0")
    assert importlib.reload(_backend).BACKEND == "cython"
    monkeypatch.delenv("GLL_PURE_PYTHON")
    importlib.reload(_backend)
