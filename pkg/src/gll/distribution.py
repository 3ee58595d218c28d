"""The generalized Log-Lindley distribution on (0, 1).

Density::

    f(x; θ, λ, p) = θ^(2+p) / (Γ(1+p) (1+p+λθ)) · (−log x)^p (λ − log x) x^(θ−1)

``p = 0`` is the Log-Lindley distribution.  Writing ``T = −log X`` turns the
law into a two-component gamma mixture, which several routines below exploit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._backend import kernels
from .errors import BoundaryError, ConvergenceError, DomainError, InvalidParamsError


@dataclass(frozen=True)
class GllParams:
    """Canonical parameter triple: ``theta > 0``, ``lam >= 0``, ``p >= 0``."""

    theta: float
    lam: float = 0.0
    p: float = 0.0

    def __post_init__(self):
        for name in ("theta", "lam", "p"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise InvalidParamsError(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.theta <= 0:
            raise InvalidParamsError(f"theta must be > 0, got {self.theta}")
        if self.lam < 0:
            raise InvalidParamsError(f"lambda must be >= 0, got {self.lam}")
        if self.p < 0:
            raise InvalidParamsError(f"p must be >= 0, got {self.p}")

    @property
    def log_norm(self):
        """Log of the normalizing constant θ^(2+p) / (Γ(1+p)(1+p+λθ))."""
        return ((2.0 + self.p) * math.log(self.theta) - math.lgamma(1.0 + self.p)
                - math.log1p(self.p + self.lam * self.theta))

    def as_tuple(self):
        return (self.theta, self.lam, self.p)


@dataclass(frozen=True)
class PiParams:
    """Bounded re-parameterization with ``pi = λθ / (1 + λθ)`` in [0, 1]."""

    theta: float
    pi: float
    p: float = 0.0

    def __post_init__(self):
        if not self.theta > 0:
            raise InvalidParamsError(f"theta must be > 0, got {self.theta}")
        if not 0.0 <= self.pi <= 1.0:
            raise InvalidParamsError(f"pi must lie in [0, 1], got {self.pi}")
        if not self.p >= 0:
            raise InvalidParamsError(f"p must be >= 0, got {self.p}")


@dataclass(frozen=True)
class MeanParams:
    """Mean re-parameterization: ``0 < mu < 1``, ``phi > 0``, ``1 <= gamma < 1/mu``."""

    mu: float
    phi: float
    gamma: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise InvalidParamsError(f"mu must lie in (0, 1), got {self.mu}")
        if not self.phi > 0:
            raise InvalidParamsError(f"phi must be > 0, got {self.phi}")
        if not self.gamma >= 1.0:
            raise InvalidParamsError(f"gamma must be >= 1, got {self.gamma}")
        if not self.mu * self.gamma < 1.0:
            raise BoundaryError(f"mu*gamma must be < 1, got {self.mu * self.gamma}")


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _check_open(arr, name="x"):
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"{name} must lie strictly inside (0, 1)")


def _check_closed(arr, name="x"):
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def logpdf(params, x):
    """Log-density, evaluated in log space for stability at large θ or p."""
    arr, scalar = _as_array(x)
    _check_open(arr)
    t = -np.log(arr)
    out = params.log_norm + np.log(params.lam + t) - (params.theta - 1.0) * t
    if params.p != 0.0:
        out = out + params.p * np.log(t)
    return _out(out, scalar)


def pdf(params, x):
    """Density at ``x`` in (0, 1)."""
    arr, scalar = _as_array(x)
    return _out(np.exp(logpdf(params, arr)), scalar)


def cdf(params, x):
    """Distribution function; ``cdf(0) = 0`` and ``cdf(1) = 1`` by continuity.

    Integer ``p`` (within 1e-9) uses the finite-sum form, otherwise the
    regularized upper incomplete gamma path.
    """
    arr, scalar = _as_array(x)
    _check_closed(arr)
    if scalar:
        return kernels.cdf_scalar(float(arr), *params.as_tuple())
    return kernels.cdf_array(arr, *params.as_tuple())


def survival(params, x):
    """Survival function as a mixture of regularized lower incomplete gammas."""
    arr, scalar = _as_array(x)
    _check_closed(arr)
    if scalar:
        return kernels.sf_scalar(float(arr), *params.as_tuple())
    return kernels.sf_array(arr, *params.as_tuple())


def hazard(params, x):
    """Hazard rate ``pdf / survival``.

    Raises :class:`DomainError` where the survival function underflows to 0.
    """
    arr, scalar = _as_array(x)
    s = np.asarray(survival(params, arr))
    if np.any(s <= 0.0):
        raise DomainError("hazard overflow: survival underflows to 0 near x = 1")
    return _out(np.asarray(pdf(params, arr)) / s, scalar)


def moment(params, r):
    """Raw moment ``E[X^r]``; requires ``r + θ > 0``."""
    theta, lam, p = params.as_tuple()
    s = r + theta
    if not s > 0:
        raise DomainError(f"moment of order {r} diverges (needs r + theta > 0)")
    return math.exp((2.0 + p) * (math.log(theta) - math.log(s))) * (s * lam + 1.0 + p) / (1.0 + p + lam * theta)


def mean(params):
    theta, lam, p = params.as_tuple()
    return (theta / (1.0 + theta)) ** (2.0 + p) * (1.0 + p + lam * (1.0 + theta)) / (1.0 + p + lam * theta)


def variance(params):
    return moment(params, 2.0) - mean(params) ** 2


def _dlogf_dt(params, t):
    theta, lam, p = params.as_tuple()
    return (p / t if p else 0.0) + 1.0 / (lam + t) - (theta - 1.0)


def mode(params):
    """Location of the density maximum.

    Returns a point in (0, 1) for an interior mode, otherwise ``0.0`` or
    ``1.0`` naming the boundary toward which the density increases.
    """
    theta, lam, p = params.as_tuple()
    if theta == 1.0:
        # stationarity degenerates to (p+1)t + pλ = 0: no positive root
        roots = []
    else:
        a = 1.0 + p + lam * (1.0 - theta)
        disc = 4.0 * p * lam * (theta - 1.0) + a * a
        roots = []
        if disc >= 0.0:
            sq = math.sqrt(disc)
            for sign in (1.0, -1.0):
                s = (a + sign * sq) / (2.0 * (1.0 - theta))
                if s < 0.0:
                    roots.append(math.exp(s))
    interior = [x for x in roots if 0.0 < x < 1.0]
    if interior:
        return max(interior, key=lambda x: logpdf(params, x))
    # monotone density: sign of d log f / dt is constant on t > 0
    return 0.0 if _dlogf_dt(params, 1.0) > 0.0 else 1.0


def neg_log_moment(params, r):
    """``E[(−log X)^r]`` for integer ``r >= 1``.

    Equals ``(p+1)_[r] (1+r+p+λθ) / (θ^r (1+p+λθ))`` with the rising factorial.
    """
    if isinstance(r, bool) or int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    r = int(r)
    theta, lam, p = params.as_tuple()
    rising = math.prod(p + k for k in range(1, r + 1))
    return rising * (1.0 + r + p + lam * theta) / (theta ** r * (1.0 + p + lam * theta))


def x_r_log_moment(params, r):
    """``E[X^r log X]``; requires ``r + θ > 0``."""
    theta, lam, p = params.as_tuple()
    s = r + theta
    if not s > 0:
        raise DomainError(f"E[X^r log X] diverges for r={r} (needs r + theta > 0)")
    return -((theta / s) ** (p + 3.0)) * (p + 1.0) * (2.0 + p + lam * s) / (theta * (1.0 + p + lam * theta))


def weight_expectation(theta, lam, p):
    """``E[(−log X)^p]`` under the Log-Lindley law LL(θ, λ)."""
    GllParams(theta, lam, p)
    return math.exp(math.lgamma(1.0 + p) - p * math.log(theta)) * (1.0 + p + lam * theta) / (1.0 + lam * theta)


def quantile(params, u):
    """Inverse cdf by bracketed root finding in ``t = −log x``.

    Returns ``x`` with ``|cdf(x) − u| <= 1e-12``.
    """
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0, 1), got {u!r}")
    theta, lam, p = params.as_tuple()

    def g(t):
        # cdf is decreasing in t
        return kernels.cdf_scalar(math.exp(-t), theta, lam, p) - u

    hi = max(1.0, neg_log_moment(params, 1))
    lo = 0.0
    for _ in range(200):
        if g(hi) < 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ConvergenceError("quantile bracket search failed")
    try:
        t = optimize.brentq(g, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"quantile did not converge: {exc}") from exc
    return math.exp(-t)


def to_pi(params):
    lt = params.lam * params.theta
    return PiParams(params.theta, lt / (1.0 + lt), params.p)


def from_pi(pp):
    if pp.pi >= 1.0:
        raise BoundaryError("pi = 1 corresponds to lambda = infinity")
    return GllParams(pp.theta, pp.pi / (pp.theta * (1.0 - pp.pi)), pp.p)


def pdf_pi(pp, x):
    """Density written directly in the (θ, π, p) parameterization."""
    arr, scalar = _as_array(x)
    _check_open(arr)
    theta, pi, p = pp.theta, pp.pi, pp.p
    lx = np.log(arr)
    out = (theta ** (1.0 + p) / (math.gamma(1.0 + p) * (1.0 + (1.0 - pi) * p))
           * (-lx) ** p * (pi + theta * (pi - 1.0) * lx) * arr ** (theta - 1.0))
    return _out(out, scalar)


def from_mean(mp):
    """Map ``(μ, φ, γ)`` to canonical parameters with mean exactly ``μ``."""
    mu, phi, gam = mp.mu, mp.phi, mp.gamma
    mg = mu * gam
    if not mg < 1.0:
        raise BoundaryError("mu*gamma -> 1 sends theta to infinity")
    theta = (mg * (2.0 + phi) + math.sqrt(mg * mg * phi * phi + 4.0 * mg * (1.0 + phi))) / (
        2.0 * (1.0 - mg) * (1.0 + phi))
    p = math.log(gam) / math.log1p(1.0 / theta)
    lam = (1.0 + p) / (1.0 + theta) * phi
    return GllParams(theta, lam, p)


def to_mean(params):
    """Inverse of :func:`from_mean`: ``γ = (1 + 1/θ)^p``, ``φ = λ(1+θ)/(1+p)``."""
    theta, lam, p = params.as_tuple()
    return MeanParams(mean(params), lam * (1.0 + theta) / (1.0 + p), math.exp(p * math.log1p(1.0 / theta)))
