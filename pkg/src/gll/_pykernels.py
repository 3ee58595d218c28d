"""Pure-Python implementation of the compiled kernels.

Used when the Cython extension is unavailable or ``GLL_PURE_PYTHON=1`` is
set.  Every routine performs the same floating-point operations in the same
order as ``_kernels.pyx`` and draws uniforms from the same bit generator
stream, so samplers are bit-identical across backends.
"""

import math

import numpy as np
from scipy.special import gammainc, gammaincc, log_ndtr

BACKEND = "python"

_LOG4 = 1.3862943611198906
_SG_MAGIC = 2.504077396776274  # 1 + log(4.5)


def _int_p(p):
    r = math.floor(p + 0.5)
    return int(r) if abs(p - r) <= 1e-9 else -1


def _head(lx, y, theta, lam, p):
    return math.exp(theta * lx + (1.0 + p) * math.log(y) - math.lgamma(1.0 + p)
                    - math.log(1.0 + p + lam * theta))


def cdf_scalar(x, theta, lam, p):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lx = math.log(x)
    y = -theta * lx
    ip = _int_p(p)
    if ip >= 0:
        s = 1.0
        term = 1.0
        for k in range(1, ip + 1):
            term = term * y / k
            s += term
        term = term * y / (1.0 + ip + lam * theta)
        return min(1.0, math.exp(theta * lx) * (s + term))
    return min(1.0, _head(lx, y, theta, lam, p) + float(gammaincc(1.0 + p, y)))


def sf_scalar(x, theta, lam, p):
    if x <= 0.0:
        return 1.0
    if x >= 1.0:
        return 0.0
    y = -theta * math.log(x)
    d = 1.0 + p + lam * theta
    return (lam * theta * float(gammainc(1.0 + p, y)) + (1.0 + p) * float(gammainc(2.0 + p, y))) / d


def cdf_array(x, theta, lam, p):
    xs = np.asarray(x, dtype=np.float64)
    out = np.array([cdf_scalar(v, theta, lam, p) for v in xs.ravel()])
    return out.reshape(xs.shape)


def sf_array(x, theta, lam, p):
    xs = np.asarray(x, dtype=np.float64)
    out = np.array([sf_scalar(v, theta, lam, p) for v in xs.ravel()])
    return out.reshape(xs.shape)


def risk_sf(x, kind, a, b):
    if x <= 0.0:
        return 1.0
    if kind == 0:
        return math.exp(-a * x)
    if kind == 1:
        return math.exp(-((x / b) ** a))
    c = math.sqrt(b / x)
    l1 = float(log_ndtr(-c * (x / a - 1.0)))
    l2 = float(log_ndtr(-c * (x / a + 1.0))) + 2.0 * b / a
    if l2 >= l1:
        return 0.0
    return math.exp(l1) * (-math.expm1(l2 - l1))


def ph_integrand(t, kind, a, b, n):
    if t >= 1.0:
        return 0.0
    om = 1.0 - t
    s = risk_sf(t / om, kind, a, b)
    if s <= 0.0:
        return 0.0
    return s ** n / (om * om)


def distorted_integrand(t, kind, a, b, theta, lam, p):
    if t >= 1.0:
        return 0.0
    om = 1.0 - t
    s = risk_sf(t / om, kind, a, b)
    return cdf_scalar(s, theta, lam, p) / (om * om)


def _uniform_source(bit_generator):
    draw = np.random.Generator(bit_generator).random

    def uniform():
        u = draw()
        while u == 0.0:
            u = draw()
        return u

    return uniform


def _gamma(uniform, shape, rate):
    if shape == 1.0:
        return -math.log(uniform()) / rate
    aa = 1.0 / math.sqrt(2.0 * shape - 1.0)
    bb = shape - _LOG4
    cc = shape + 1.0 / aa
    while True:
        u1 = uniform()
        u2 = uniform()
        v = aa * math.log(u1 / (1.0 - u1))
        x = shape * math.exp(v)
        z = u1 * u1 * u2
        r = bb + cc * v - x
        if r + _SG_MAGIC - 4.5 * z >= 0.0 or r >= math.log(z):
            return x / rate


def gamma_variates(bit_generator, n, shape, rate):
    uniform = _uniform_source(bit_generator)
    return np.array([_gamma(uniform, shape, rate) for _ in range(n)], dtype=np.float64)


def sample_gll(bit_generator, n, theta, lam, p):
    uniform = _uniform_source(bit_generator)
    w = lam * theta / (1.0 + p + lam * theta)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        while True:
            u = uniform()
            if u <= w:
                xv = _gamma(uniform, p + 1.0, theta)
            else:
                xv = _gamma(uniform, p + 2.0, theta)
            z = math.exp(-xv)
            if 0.0 < z < 1.0:
                break
        out[i] = z
    return out


def sample_ll(bit_generator, n, theta, lam):
    uniform = _uniform_source(bit_generator)
    w = lam * theta / (1.0 + lam * theta)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        while True:
            u = uniform()
            if u <= w:
                xv = -math.log(u / w) / theta
            else:
                xv = -(math.log((u - w) / (1.0 - w)) + math.log(uniform())) / theta
            z = math.exp(-xv)
            if 0.0 < z < 1.0:
                break
        out[i] = z
    return out
