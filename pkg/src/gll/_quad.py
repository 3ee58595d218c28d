"""Adaptive quadrature with convergence failures turned into exceptions."""

import math
import warnings

from scipy import integrate

from .errors import ConvergenceError


def quad(fn, a, b, *, epsabs=1e-13, epsrel=1e-12, limit=400, points=None, args=()):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        kw = {"points": points} if points is not None and math.isfinite(b) else {}
        value, err, info, *rest = integrate.quad(
            fn, a, b, args=args, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1, **kw
        )
    ier = rest[0] if rest and isinstance(rest[0], str) else None
    if not math.isfinite(value):
        raise ConvergenceError("quadrature produced a non-finite value")
    # ier codes other than "roundoff detected" with a tiny error are failures
    if ier is not None and err > max(10 * epsabs, 10 * epsrel * abs(value), 1e-9):
        raise ConvergenceError(f"quadrature did not converge: {ier.splitlines()[0]}")
    return value


def halfline(fn, scale, **kw):
    """Integrate ``fn`` over (0, ∞), splitting where most mass sits."""
    cut = 8.0 * scale
    return quad(fn, 0.0, cut, **kw) + quad(fn, cut, math.inf, **kw)
