"""Scalar special functions with explicit domain checks.

Thin, validated wrappers around :mod:`math` and :mod:`scipy.special`.  Every
function raises :class:`~gll.errors.DomainError` instead of returning a
non-finite value.
"""

import math

from scipy import special as sc

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243


def _finite(value, name):
    if not math.isfinite(value):
        raise DomainError(f"{name} produced a non-finite value")
    return float(value)


def log_gamma(a):
    """Natural logarithm of the gamma function for ``a > 0``."""
    if not a > 0:
        raise DomainError(f"log_gamma requires a > 0, got {a!r}")
    return math.lgamma(a)


def upper_incomplete_gamma(a, x):
    """Non-regularized upper incomplete gamma ``Γ(a, x)``.

    ``a = 0`` returns the exponential integral ``E1(x)``.
    """
    if not x > 0:
        raise DomainError(f"upper_incomplete_gamma requires x > 0, got {x!r}")
    if not a >= 0:
        raise DomainError(f"upper_incomplete_gamma requires a >= 0, got {a!r}")
    if a == 0:
        return _finite(sc.exp1(x), "upper_incomplete_gamma")
    return _finite(sc.gammaincc(a, x) * math.gamma(a), "upper_incomplete_gamma")


def gen_exp_integral(n, z):
    """Generalized exponential integral ``E_n(z) = z^(n-1) Γ(1-n, z)``.

    Defined for real ``n <= 1``, which covers ``n = -p`` with ``p >= 0``.
    """
    if not z > 0:
        raise DomainError(f"gen_exp_integral requires z > 0, got {z!r}")
    if n > 1:
        # Γ(1-n, z) with negative first argument: use the recurrence downward.
        if float(n).is_integer():
            return _finite(sc.expn(int(n), z), "gen_exp_integral")
        raise DomainError("gen_exp_integral supports n <= 1 or integer n")
    return _finite(z ** (n - 1) * upper_incomplete_gamma(1 - n, z), "gen_exp_integral")


def exp_integral_neg(x):
    """``Ei(-x) = -Γ(0, x)`` for ``x > 0``; always strictly negative."""
    if not x > 0:
        raise DomainError(f"exp_integral_neg requires x > 0, got {x!r}")
    return -upper_incomplete_gamma(0.0, x)


def polygamma(order, x):
    """Digamma (``order=0``) or trigamma (``order=1``) at ``x > 0``."""
    if order not in (0, 1):
        raise DomainError(f"polygamma order must be 0 or 1, got {order!r}")
    if not x > 0:
        raise DomainError(f"polygamma requires x > 0, got {x!r}")
    if order == 0:
        return _finite(sc.digamma(x), "polygamma")
    return _finite(sc.polygamma(1, x), "polygamma")


def std_normal_cdf(z):
    """Standard normal cdf, accurate in both tails."""
    if math.isnan(z):
        raise DomainError("std_normal_cdf requires a number, got nan")
    return float(sc.ndtr(z))
