"""Proportional-hazard and GLL-distorted premiums over parametric risks.

Both premiums are integrals of a transformed risk survival function over
[0, ∞)::

    P_n       = ∫ Ḡ(x)^n dx
    P_{θ,λ,p} = ∫ F(Ḡ(x); θ, λ, p) dx

Quadrature runs on (0, 1) after the substitution ``x = t/(1−t)``.
"""

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

from . import _quad
from ._backend import kernels
from .distribution import GllParams
from .errors import DomainError

_KIND_CODES = {"exponential": 0, "weibull": 1, "inverse_gaussian": 2}
_KIND_KEYS = {
    "exponential": ("rate",),
    "weibull": ("shape", "scale"),
    "inverse_gaussian": ("mean", "shape"),
}
_ALIASES = {"exp": "exponential", "ig": "inverse_gaussian", "invgauss": "inverse_gaussian"}
_KEY_ALIASES = {"lambda": "rate", "alpha": "shape", "beta": "scale", "mu": "mean", "sigma": "shape"}

# Weibull(0.5) tails are heavy enough that the default tolerance is too loose
_EPSABS = 1e-10
_EPSREL = 1e-10


@dataclass(frozen=True)
class RiskModel:
    """A loss distribution given by its survival function.

    ``exponential(rate)``, ``weibull(shape, scale)`` and
    ``inverse_gaussian(mean, shape)``.  The inverse Gaussian "scale" of
    premium tables is the shape parameter of the (mean, shape) form, so its
    net premium equals the mean.
    """

    kind: str
    a: float
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise DomainError(f"unknown risk kind {self.kind!r}")
        for v in (self.a, self.b):
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"risk parameters must be finite and > 0, got {self.a!r}, {self.b!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", rate)

    @classmethod
    def weibull(cls, shape, scale):
        return cls("weibull", shape, scale)

    @classmethod
    def inverse_gaussian(cls, mean, shape):
        return cls("inverse_gaussian", mean, shape)

    @classmethod
    def parse(cls, text):
        """Parse ``kind:key=val,...`` such as ``weibull:shape=1.5,scale=0.5``."""
        kind, _, rest = text.partition(":")
        kind = _ALIASES.get(kind.strip().lower(), kind.strip().lower())
        if kind not in _KIND_KEYS:
            raise DomainError(f"unknown risk kind {kind!r}")
        values = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, sep, val = item.partition("=")
            if not sep:
                raise DomainError(f"malformed risk parameter {item!r}")
            key = _KEY_ALIASES.get(key.strip().lower(), key.strip().lower())
            try:
                values[key] = float(val)
            except ValueError:
                raise DomainError(f"risk parameter {key} is not a number: {val!r}") from None
        keys = _KIND_KEYS[kind]
        missing = [k for k in keys if k not in values]
        extra = [k for k in values if k not in keys]
        if missing or extra:
            raise DomainError(f"{kind} takes parameters {', '.join(keys)}")
        return cls(kind, *(values[k] for k in keys))

    @property
    def code(self):
        return _KIND_CODES[self.kind]

    @property
    def mean(self):
        if self.kind == "exponential":
            return 1.0 / self.a
        if self.kind == "weibull":
            return self.b * math.gamma(1.0 + 1.0 / self.a)
        return self.a

    def label(self):
        keys = _KIND_KEYS[self.kind]
        vals = (self.a, self.b)[: len(keys)]
        return f"{self.kind}({' '.join(f'{k}={v:g}' for k, v in zip(keys, vals))})"


@dataclass(frozen=True)
class DistortionSpec:
    """Either a proportional-hazard exponent or a concave GLL distortion."""

    kind: str
    n: float = 1.0
    params: GllParams = None

    @classmethod
    def ph(cls, n):
        if not 0.0 < n <= 1.0:
            raise DomainError(f"proportional-hazard exponent must lie in (0, 1], got {n!r}")
        return cls("ph", n=float(n))

    @classmethod
    def gll(cls, params):
        _check_concave(params)
        return cls("gll", params=params)

    def label(self):
        if self.kind == "ph":
            return f"P_n={self.n:g}"
        t, l, p = self.params.as_tuple()
        return f"GLL(theta={t:g} lam={l:g} p={p:g})"


def _check_concave(params):
    if not isinstance(params, GllParams):
        raise TypeError("params must be GllParams")
    if not params.theta <= 1.0:
        raise DomainError(f"distortion requires 0 < theta <= 1 (concave cdf), got {params.theta}")


def risk_survival(model, x):
    if not x >= 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    return kernels.risk_sf(float(x), model.code, model.a, model.b)


def _integrate(fn, args):
    # the integrand is bounded near t = 1 only after the Jacobian is absorbed
    return _quad.quad(fn, 0.0, 1.0, epsabs=_EPSABS, epsrel=_EPSREL, limit=2000,
                      points=(0.5, 0.9, 0.99), args=args)


def ph_premium(model, n):
    """``∫ Ḡ(x)^n dx``; closed form for exponential and Weibull risks."""
    if not 0.0 < n <= 1.0:
        raise DomainError(f"proportional-hazard exponent must lie in (0, 1], got {n!r}")
    if model.kind == "exponential":
        return 1.0 / (n * model.a)
    if model.kind == "weibull":
        return model.b * n ** (-1.0 / model.a) * math.gamma(1.0 + 1.0 / model.a)
    if n == 1.0:
        return model.mean
    return _integrate(kernels.ph_integrand, (model.code, model.a, model.b, float(n)))


def distorted_premium(model, params):
    """``∫ F(Ḡ(x); θ, λ, p) dx`` for a concave distortion (``θ <= 1``)."""
    _check_concave(params)
    return _integrate(kernels.distorted_integrand, (model.code, model.a, model.b) + params.as_tuple())


def premium(model, spec):
    if spec.kind == "ph":
        return ph_premium(model, spec.n)
    return distorted_premium(model, spec.params)


DEFAULT_RISKS = (
    RiskModel.exponential(0.5),
    RiskModel.exponential(2.0),
    RiskModel.weibull(0.5, 1.0),
    RiskModel.weibull(1.5, 0.5),
    RiskModel.weibull(1.5, 1.5),
    RiskModel.inverse_gaussian(0.5, 1.0),
    RiskModel.inverse_gaussian(2.5, 0.5),
    RiskModel.inverse_gaussian(2.0, 2.0),
)
DEFAULT_PH = (0.4, 0.75, 1.0)
DEFAULT_GLL = tuple(
    GllParams(theta, lam, p)
    for p in (1.0, 2.0)
    for theta in (0.3, 0.7)
    for lam in (0.5, 1.5)
)


@dataclass
class PremiumTable:
    risks: list
    ph_exponents: list
    gll_specs: list
    ph_values: list
    gll_values: list

    @property
    def columns(self):
        return ([f"P_{n:g}" for n in self.ph_exponents]
                + [DistortionSpec("gll", params=g).label() for g in self.gll_specs])

    def bound_check(self):
        """Per row: every ``P_n <= P_{θ,λ,p}`` with ``n >= θ`` holds."""
        flags = []
        for ph, gl in zip(self.ph_values, self.gll_values):
            ok = True
            for n, pn in zip(self.ph_exponents, ph):
                for g, pg in zip(self.gll_specs, gl):
                    if n >= g.theta and pn > pg:
                        ok = False
            flags.append(ok)
        return flags

    def rows(self):
        """Rows of ``(risk label, [values...], bound flag)``."""
        flags = self.bound_check()
        return [(r.label(), list(ph) + list(gl), f)
                for r, ph, gl, f in zip(self.risks, self.ph_values, self.gll_values, flags)]


def premium_table(risks=DEFAULT_RISKS, ph_exponents=DEFAULT_PH, gll_specs=DEFAULT_GLL):
    risks, ph_exponents, gll_specs = list(risks), list(ph_exponents), list(gll_specs)
    for g in gll_specs:
        _check_concave(g)
    ph_vals = [[ph_premium(r, n) for n in ph_exponents] for r in risks]
    gll_vals = [[distorted_premium(r, g) for g in gll_specs] for r in risks]
    return PremiumTable(risks, ph_exponents, gll_specs, ph_vals, gll_vals)


def format_3dp(value):
    """Round half to even at 3 decimals, on the decimal expansion of the double."""
    return str(Decimal(value).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))
