"""Seedable random variate generation via the gamma-mixture representation.

With ``T = −log X``, the density of ``T`` is a two-component mixture::

    λθ/(1+p+λθ) · Gamma(p+1, θ)  +  (1+p)/(1+p+λθ) · Gamma(p+2, θ)

so a draw is ``exp(−T)``.  Gamma variates use Cheng's GB rejection method
(shape >= 1; shape 1 short-circuits to an exponential).  The loops live in the
compiled kernel; see :mod:`gll._backend`.
"""

import numpy as np

from ._backend import kernels
from .distribution import GllParams
from .errors import DomainError

_MAX_SEED = 2 ** 64


class RngState:
    """A PCG64 stream owned by one caller; identical seeds give identical streams."""

    def __init__(self, seed):
        if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) < _MAX_SEED:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = int(seed)
        self.bit_generator = np.random.PCG64(self.seed)

    def __repr__(self):
        return f"RngState(seed={self.seed})"


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    return int(n)


def gamma_variates(shape, rate, n, rng):
    """``n`` draws from Gamma(shape, rate) with density ∝ x^(shape−1) e^(−rate·x)."""
    if not shape >= 1.0:
        raise DomainError(f"shape must be >= 1, got {shape!r}")
    if not rate > 0.0:
        raise DomainError(f"rate must be > 0, got {rate!r}")
    return kernels.gamma_variates(rng.bit_generator, _check_n(n), float(shape), float(rate))


def gamma_variate(shape, rate, rng):
    return float(gamma_variates(shape, rate, 1, rng)[0])


def sample_gll(params, n, rng):
    """``n`` independent draws strictly inside (0, 1)."""
    if not isinstance(params, GllParams):
        raise TypeError("params must be GllParams")
    return kernels.sample_gll(rng.bit_generator, _check_n(n), *params.as_tuple())


def sample_ll(theta, lam, n, rng):
    """Log-Lindley draws using only logarithms of uniforms.

    The branch uniform is rescaled and reused as the first exponential, so a
    draw costs two or three logarithms.
    """
    GllParams(theta, lam, 0.0)
    return kernels.sample_ll(rng.bit_generator, _check_n(n), float(theta), float(lam))
