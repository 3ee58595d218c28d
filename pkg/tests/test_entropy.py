import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gll import entropy as e
from gll.distribution import GllParams
from gll.errors import UnsupportedParamsError

from oracles import quad_t

# high-precision references: −∫ f log f by mpmath at 30 digits
MPMATH_ENTROPY = {
    (1.0, 1.0, 0.0): -0.10502650060165173,
    (2.0, 0.5, 1.0): -0.21610168109803412,
    (0.7, 3.0, 2.0): -2.7795400322846513,
}


@pytest.mark.parametrize("key,value", MPMATH_ENTROPY.items())
def test_entropy_numeric_reference(key, value):
    assert e.entropy_numeric(GllParams(*key)) == pytest.approx(value, abs=1e-10)


def test_entropy_numeric_substitution_value():
    # −(1/2){2 log(1/2) + 2Γ(3)ψ(3)}, ψ(3) = 3/2 − γ
    expected = -0.5 * (2 * math.log(0.5) + 4 * (1.5 - 0.5772156649015329))
    assert e.entropy_numeric(GllParams(1, 0, 1)) == pytest.approx(expected, abs=1e-10)
    assert expected == pytest.approx(-1.1524215, abs=5e-8)


def test_uniform_limit():
    assert e.entropy_numeric(GllParams(1, 1e6, 0)) == pytest.approx(0.0, abs=1e-5)


CLOSED_GRID = [GllParams(t, l, p) for t in (0.3, 1.0, 2.5, 8.0) for l in (0.05, 1.0, 6.0) for p in (0, 1, 2)]


@pytest.mark.parametrize("params", CLOSED_GRID, ids=str)
def test_entropy_closed_matches_quadrature(params):
    with warnings.catch_warnings():
        warnings.simplefilter("error", e.ClosedFormDiscrepancy)
        closed = e._closed_value(params)
        assert closed == pytest.approx(e.entropy_numeric(params), abs=1e-6)
        assert e.entropy_closed(params) == closed


@pytest.mark.parametrize("p", [1, 2])
def test_expected_log_t_closed_form(p):
    for theta, lam in [(0.5, 0.2), (3.0, 4.0)]:
        ref = quad_t(math.log, theta, lam, p)
        assert e.expected_log_t(GllParams(theta, lam, p)) == pytest.approx(ref, rel=1e-9)


def test_closed_form_discrepancy_is_surfaced(monkeypatch, caplog):
    params = GllParams(2, 1, 1)
    monkeypatch.setattr(e, "_closed_value", lambda _: 123.0)
    with pytest.warns(e.ClosedFormDiscrepancy):
        value = e.entropy_closed(params)
    assert value == pytest.approx(e.entropy_numeric(params))
    assert "closed-form entropy" in caplog.text


@pytest.mark.parametrize("params", [GllParams(1, 1, 0.5), GllParams(1, 0, 1), GllParams(1, 1, 3)], ids=str)
def test_entropy_closed_unsupported(params):
    with pytest.raises(UnsupportedParamsError):
        e.entropy_closed(params)


def test_weighted_entropy():
    params = GllParams(2, 1, 1)
    assert e.weighted_entropy(params, 0) == e.entropy_numeric(params)
    lf = lambda t: params.log_norm + math.log(t) + math.log(1 + t) - t
    assert e.weighted_entropy(params, 2) == pytest.approx(-quad_t(lambda t: t * t * lf(t), 2, 1, 1), rel=1e-9)
    with pytest.raises(UnsupportedParamsError):
        e.weighted_entropy(params, -1)


@given(st.floats(0.2, 10), st.floats(0, 5), st.floats(0, 3))
def test_kl_self_is_zero(theta, lam, p):
    params = GllParams(theta, lam, p)
    assert e.kl_divergence(params, params) == 0.0


@given(st.floats(0.3, 5), st.floats(0, 3), st.floats(0, 2), st.floats(0.3, 5), st.floats(0, 3), st.floats(0, 2))
def test_kl_nonnegative(t1, l1, p1, t2, l2, p2):
    assert e.kl_divergence(GllParams(t1, l1, p1), GllParams(t2, l2, p2)) >= 0.0


def test_kl_reference_value():
    a, b = GllParams(2, 1, 1), GllParams(1, 0.5, 0)
    la = lambda t: a.log_norm + math.log(t) + math.log(1 + t) - t
    lb = lambda t: b.log_norm + math.log(0.5 + t)
    assert e.kl_divergence(a, b) == pytest.approx(quad_t(lambda t: la(t) - lb(t), 2, 1, 1), rel=1e-9)
