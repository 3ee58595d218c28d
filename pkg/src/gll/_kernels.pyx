# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: scalar cdf/survival, quadrature integrands, samplers.

Mirrors :mod:`gll._pykernels` operation for operation so that both backends
produce bit-identical results from the same bit generator state.
"""

import numpy as np
cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport exp, log, sqrt, pow, lgamma, expm1, fabs, floor, fmin
from numpy.random cimport bitgen_t
from scipy.special.cython_special cimport gammaincc, gammainc, log_ndtr

cnp.import_array()

cdef double LOG4 = 1.3862943611198906
cdef double SG_MAGIC = 2.504077396776274  # 1 + log(4.5)

BACKEND = "cython"


cdef inline int _int_p(double p) noexcept nogil:
    cdef double r = floor(p + 0.5)
    if fabs(p - r) <= 1e-9:
        return <int>r
    return -1


cdef double _cdf(double x, double theta, double lam, double p) noexcept nogil:
    cdef double y, lx, head, s, term
    cdef int k, ip
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lx = log(x)
    y = -theta * lx
    ip = _int_p(p)
    if ip >= 0:
        # x^θ [Σ_{k≤p} y^k/k! + y^{p+1}/((1+p+λθ) p!)]
        s = 1.0
        term = 1.0
        for k in range(1, ip + 1):
            term = term * y / k
            s += term
        term = term * y / (1.0 + ip + lam * theta)
        # the sum can round one ulp above 1 next to x = 1
        return fmin(1.0, exp(theta * lx) * (s + term))
    head = exp(theta * lx + (1.0 + p) * log(y) - lgamma(1.0 + p)
               - log(1.0 + p + lam * theta))
    return fmin(1.0, head + gammaincc(1.0 + p, y))


cdef double _sf(double x, double theta, double lam, double p) noexcept nogil:
    # gamma-mixture form: no cancellation as x -> 1
    cdef double y, d
    if x <= 0.0:
        return 1.0
    if x >= 1.0:
        return 0.0
    y = -theta * log(x)
    d = 1.0 + p + lam * theta
    return (lam * theta * gammainc(1.0 + p, y) + (1.0 + p) * gammainc(2.0 + p, y)) / d


def cdf_scalar(double x, double theta, double lam, double p):
    return _cdf(x, theta, lam, p)


def sf_scalar(double x, double theta, double lam, double p):
    return _sf(x, theta, lam, p)


def cdf_array(x, double theta, double lam, double p):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xs)
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        out[i] = _cdf(xs[i], theta, lam, p)
    return out.reshape(np.shape(x))


def sf_array(x, double theta, double lam, double p):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xs)
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        out[i] = _sf(xs[i], theta, lam, p)
    return out.reshape(np.shape(x))


cdef double _risk_sf(double x, int kind, double a, double b) noexcept nogil:
    cdef double c, l1, l2
    if x <= 0.0:
        return 1.0
    if kind == 0:
        return exp(-a * x)
    if kind == 1:
        return exp(-pow(x / b, a))
    # inverse Gaussian, mean a, shape b
    c = sqrt(b / x)
    l1 = log_ndtr(-c * (x / a - 1.0))
    l2 = log_ndtr(-c * (x / a + 1.0)) + 2.0 * b / a
    if l2 >= l1:
        return 0.0
    return exp(l1) * (-expm1(l2 - l1))


def risk_sf(double x, int kind, double a, double b):
    return _risk_sf(x, kind, a, b)


def ph_integrand(double t, int kind, double a, double b, double n):
    cdef double x, s, om
    if t >= 1.0:
        return 0.0
    om = 1.0 - t
    x = t / om
    s = _risk_sf(x, kind, a, b)
    if s <= 0.0:
        return 0.0
    return pow(s, n) / (om * om)


def distorted_integrand(double t, int kind, double a, double b,
                        double theta, double lam, double p):
    cdef double x, s, om
    if t >= 1.0:
        return 0.0
    om = 1.0 - t
    x = t / om
    s = _risk_sf(x, kind, a, b)
    return _cdf(s, theta, lam, p) / (om * om)


cdef inline double _uniform(bitgen_t *rng) noexcept nogil:
    cdef double u = rng.next_double(rng.state)
    while u == 0.0:
        u = rng.next_double(rng.state)
    return u


cdef double _gamma(bitgen_t *rng, double shape, double rate) noexcept nogil:
    cdef double aa, bb, cc, u1, u2, v, x, z, r
    if shape == 1.0:
        return -log(_uniform(rng)) / rate
    aa = 1.0 / sqrt(2.0 * shape - 1.0)
    bb = shape - LOG4
    cc = shape + 1.0 / aa
    while True:
        u1 = _uniform(rng)
        u2 = _uniform(rng)
        v = aa * log(u1 / (1.0 - u1))
        x = shape * exp(v)
        z = u1 * u1 * u2
        r = bb + cc * v - x
        if r + SG_MAGIC - 4.5 * z >= 0.0 or r >= log(z):
            return x / rate


cdef bitgen_t *_bitgen(object bit_generator) except NULL:
    capsule = bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def gamma_variates(bit_generator, Py_ssize_t n, double shape, double rate):
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with bit_generator.lock, nogil:
        for i in range(n):
            out[i] = _gamma(rng, shape, rate)
    return out


def sample_gll(bit_generator, Py_ssize_t n, double theta, double lam, double p):
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double w = lam * theta / (1.0 + p + lam * theta)
    cdef double u, xv, z
    cdef Py_ssize_t i
    with bit_generator.lock, nogil:
        for i in range(n):
            while True:
                u = _uniform(rng)
                if u <= w:
                    xv = _gamma(rng, p + 1.0, theta)
                else:
                    xv = _gamma(rng, p + 2.0, theta)
                z = exp(-xv)
                if 0.0 < z < 1.0:
                    break
            out[i] = z
    return out


def sample_ll(bit_generator, Py_ssize_t n, double theta, double lam):
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double w = lam * theta / (1.0 + lam * theta)
    cdef double u, xv, z
    cdef Py_ssize_t i
    with bit_generator.lock, nogil:
        for i in range(n):
            while True:
                u = _uniform(rng)
                if u <= w:
                    xv = -log(u / w) / theta
                else:
                    xv = -(log((u - w) / (1.0 - w)) + log(_uniform(rng))) / theta
                z = exp(-xv)
                if 0.0 < z < 1.0:
                    break
            out[i] = z
    return out
