"""Bounded-response regression with GLL errors.

Two links map a linear predictor ``η_i = β_0 + x_iᵀβ`` through the logistic
function:

* θ-link: ``θ_i = logistic(η_i)`` with ``λ`` and ``p`` shared by all rows;
* mean-link: ``μ_i = logistic(η_i)`` with ``φ`` and ``γ`` shared, each row
  mapped to canonical parameters by :func:`gll.distribution.from_mean`.

The mean-link constraint ``γ < 1/max μ_i`` is enforced during fitting by
``γ = 1 + (1/max μ_i − 1)·logistic(g)``.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .distribution import GllParams, MeanParams, from_mean, mean as gll_mean
from .errors import BoundaryError, ConvergenceError, DomainError, InfeasibleError
from .estimation import FitOptions, Sample, fit_mle

_DELIMITERS = ",\t"


def logistic(eta):
    """Overflow-safe ``exp(η)/(1+exp(η))`` for scalars or arrays."""
    out = special.expit(eta)
    return float(out) if np.ndim(out) == 0 else out


def _check_response(y):
    bad = ~np.isfinite(y) | (y <= 0.0) | (y >= 1.0)
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(
            f"response row {i} = {y[i]!r} is not strictly inside (0, 1); consider the "
            f"transformation (y*(n-1) + 0.5)/n, which is not applied automatically")


@dataclass
class Dataset:
    """Responses in (0, 1) and a covariate matrix; the intercept is implicit."""

    response: np.ndarray
    covariates: np.ndarray
    names: list = field(default_factory=list)

    def __post_init__(self):
        self.response = np.asarray(self.response, dtype=np.float64).ravel()
        cov = np.asarray(self.covariates, dtype=np.float64)
        if cov.size == 0:
            cov = np.zeros((self.response.size, 0))
        if cov.ndim == 1:
            cov = cov[:, None]
        self.covariates = cov
        if cov.shape[0] != self.response.size:
            raise DomainError(f"{self.response.size} responses but {cov.shape[0]} covariate rows")
        if not np.all(np.isfinite(cov)):
            raise DomainError("covariates contain non-finite entries")
        _check_response(self.response)
        if not self.names:
            self.names = [f"x{j + 1}" for j in range(cov.shape[1])]
        if len(self.names) != cov.shape[1]:
            raise DomainError("one name per covariate column is required")

    @property
    def n(self):
        return self.response.size

    @property
    def k(self):
        return self.covariates.shape[1]

    @property
    def design(self):
        return np.hstack([np.ones((self.n, 1)), self.covariates])

    def coefficient_names(self):
        return ["(Intercept)"] + list(self.names)

    def complement(self):
        return Dataset(1.0 - self.response, self.covariates, list(self.names))

    @classmethod
    def from_csv(cls, path, response, covariates=(), divisor=1.0, complement=False):
        """Read a delimited file with a header row (comma or tab).

        ``response`` names the response column, divided by ``divisor``;
        ``complement`` models ``1 − y``.  Missing values are an error.
        """
        with open(path, newline="", encoding="utf-8") as fh:
            text = fh.read()
        if not text.strip():
            raise DomainError(f"{path}: empty file")
        first = text.splitlines()[0]
        delim = "\t" if first.count("\t") > first.count(",") else ","
        rows = list(csv.reader(text.splitlines(), delimiter=delim))
        header = [h.strip() for h in rows[0]]
        body = [r for r in rows[1:] if any(c.strip() for c in r)]
        wanted = [response] + list(covariates)
        missing = [c for c in wanted if c not in header]
        if missing:
            raise DomainError(f"{path}: columns not found: {', '.join(missing)}")
        cols = {name: header.index(name) for name in wanted}
        data = np.empty((len(body), len(wanted)))
        for i, row in enumerate(body, start=2):
            if len(row) != len(header):
                raise DomainError(f"{path}:{i}: expected {len(header)} fields, got {len(row)}")
            for j, name in enumerate(wanted):
                cell = row[cols[name]].strip()
                try:
                    data[i - 2, j] = float(cell)
                except ValueError:
                    raise DomainError(f"{path}:{i}: column {name} has non-numeric or missing value {cell!r}") from None
        y = data[:, 0] / float(divisor)
        if complement:
            y = 1.0 - y
        return cls(y, data[:, 1:], list(covariates))


@dataclass
class ThetaLinkModel:
    beta: np.ndarray
    lam: float
    p: float

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.beta)):
            raise DomainError("coefficients must be finite")
        if not (math.isfinite(self.lam) and self.lam >= 0.0 and math.isfinite(self.p) and self.p >= 0.0):
            raise DomainError(f"lambda and p must be finite and >= 0, got {self.lam}, {self.p}")

    def row_params(self, design):
        theta = logistic(design @ self.beta)
        return np.atleast_1d(theta)


@dataclass
class MeanLinkModel:
    beta: np.ndarray
    phi: float
    gamma: float = 1.0

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.beta)):
            raise DomainError("coefficients must be finite")
        if not (math.isfinite(self.phi) and self.phi > 0.0):
            raise DomainError(f"phi must be > 0, got {self.phi}")
        if not (math.isfinite(self.gamma) and self.gamma >= 1.0):
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")

    def row_params(self, design):
        return np.atleast_1d(logistic(design @ self.beta))


def _check_width(model, data):
    if model.beta.size != data.k + 1:
        raise DomainError(f"model has {model.beta.size} coefficients, data needs {data.k + 1}")


# θ-link -------------------------------------------------------------------

def _theta_terms(theta, lam, p, y):
    t = -np.log(y)
    d = 1.0 + p + lam * theta
    ll = ((2.0 + p) * np.log(theta) - special.gammaln(1.0 + p) - np.log(d)
          + np.log(lam + t) - (theta - 1.0) * t)
    if p:
        ll = ll + p * np.log(t)
    g_theta = (2.0 + p) / theta - lam / d - t
    g_lam = -theta / d + 1.0 / (lam + t)
    g_p = np.log(theta) - special.digamma(1.0 + p) - 1.0 / d + np.log(t)
    return ll, g_theta, g_lam, g_p


def _mean_map(mu, phi, gam):
    """Vectorized ``from_mean`` with its Jacobian.

    Returns ``θ, λ, p`` and the partials of each with respect to
    ``(μ, φ, γ)`` as arrays shaped like ``mu``.
    """
    m = mu * gam
    if np.any(m >= 1.0):
        i = int(np.argmax(m >= 1.0))
        raise InfeasibleError(f"row {i}: mu*gamma = {m[i]:.6g} >= 1 (gamma must stay below 1/mu)")
    s = np.sqrt(m * m * phi * phi + 4.0 * m * (1.0 + phi))
    num = m * (2.0 + phi) + s
    den = 2.0 * (1.0 - m) * (1.0 + phi)
    theta = num / den
    s_m = (m * phi * phi + 2.0 * (1.0 + phi)) / s
    s_phi = (m * m * phi + 2.0 * m) / s
    th_m = ((2.0 + phi + s_m) * den + num * 2.0 * (1.0 + phi)) / (den * den)
    th_phi = ((m + s_phi) * den - num * 2.0 * (1.0 - m)) / (den * den)
    big_l = np.log1p(1.0 / theta)
    lg = math.log(gam)
    p = lg / big_l
    p_th = lg / (big_l * big_l * theta * (theta + 1.0))
    p_gam_direct = 1.0 / (gam * big_l)
    lam = (1.0 + p) * phi / (1.0 + theta)
    lam_p = phi / (1.0 + theta)
    lam_phi_direct = (1.0 + p) / (1.0 + theta)
    lam_th = -(1.0 + p) * phi / (1.0 + theta) ** 2

    d_theta = {"mu": th_m * gam, "phi": th_phi, "gamma": th_m * mu}
    d_p = {k: p_th * v for k, v in d_theta.items()}
    d_p["gamma"] = d_p["gamma"] + p_gam_direct
    d_lam = {k: lam_th * d_theta[k] + lam_p * d_p[k] for k in d_theta}
    d_lam["phi"] = d_lam["phi"] + lam_phi_direct
    return theta, lam, p, d_theta, d_lam, d_p


def _mean_terms(mu, phi, gam, y):
    theta, lam, p, d_theta, d_lam, d_p = _mean_map(mu, phi, gam)
    t = -np.log(y)
    d = 1.0 + p + lam * theta
    ll = ((2.0 + p) * np.log(theta) - special.gammaln(1.0 + p) - np.log(d)
          + p * np.log(t) + np.log(lam + t) - (theta - 1.0) * t)
    g_theta = (2.0 + p) / theta - lam / d - t
    g_lam = -theta / d + 1.0 / (lam + t)
    g_p = np.log(theta) - special.digamma(1.0 + p) - 1.0 / d + np.log(t)
    grads = {k: g_theta * d_theta[k] + g_lam * d_lam[k] + g_p * d_p[k] for k in d_theta}
    return ll, grads


def regression_loglik(model, data):
    """Sum of per-row GLL log-densities under ``model``."""
    _check_width(model, data)
    if isinstance(model, ThetaLinkModel):
        theta = model.row_params(data.design)
        ll = _theta_terms(theta, model.lam, model.p, data.response)[0]
    elif isinstance(model, MeanLinkModel):
        mu = model.row_params(data.design)
        ll = _mean_terms(mu, model.phi, model.gamma, data.response)[0]
    else:
        raise TypeError("model must be ThetaLinkModel or MeanLinkModel")
    return float(np.sum(ll))


def regression_score(model, data):
    """Gradient of :func:`regression_loglik`.

    Ordered as ``(β..., λ, p)`` for the θ-link and ``(β..., φ, γ)`` for the
    mean-link.
    """
    _check_width(model, data)
    x = data.design
    if isinstance(model, ThetaLinkModel):
        theta = model.row_params(x)
        _, g_th, g_lam, g_p = _theta_terms(theta, model.lam, model.p, data.response)
        g_beta = x.T @ (g_th * theta * (1.0 - theta))
        return np.concatenate([g_beta, [np.sum(g_lam), np.sum(g_p)]])
    mu = model.row_params(x)
    _, grads = _mean_terms(mu, model.phi, model.gamma, data.response)
    g_beta = x.T @ (grads["mu"] * mu * (1.0 - mu))
    return np.concatenate([g_beta, [np.sum(grads["phi"]), np.sum(grads["gamma"])]])


def predict(model, covariate_row):
    """Mean of the fitted distribution at one covariate row (no intercept column)."""
    row = np.concatenate([[1.0], np.atleast_1d(np.asarray(covariate_row, dtype=np.float64))])
    if row.size != model.beta.size:
        raise DomainError(f"expected {model.beta.size - 1} covariates, got {row.size - 1}")
    eta = float(row @ model.beta)
    if isinstance(model, ThetaLinkModel):
        theta = logistic(eta)
        if theta <= 0.0:
            raise InfeasibleError("theta underflows to 0 at this row")
        return gll_mean(GllParams(theta, model.lam, model.p))
    mu = logistic(eta)
    if mu * model.gamma >= 1.0:
        raise InfeasibleError(f"mu*gamma = {mu * model.gamma:.6g} >= 1 at this row")
    return mu


def simulate_response(model, covariates, rng):
    """One draw per covariate row from the model, for simulation studies."""
    from .sampling import sample_gll

    cov = np.asarray(covariates, dtype=np.float64)
    cov = cov[:, None] if cov.ndim == 1 else cov
    design = np.hstack([np.ones((cov.shape[0], 1)), cov])
    out = np.empty(cov.shape[0])
    if isinstance(model, ThetaLinkModel):
        for i, th in enumerate(model.row_params(design)):
            out[i] = sample_gll(GllParams(th, model.lam, model.p), 1, rng)[0]
    else:
        for i, mu in enumerate(model.row_params(design)):
            out[i] = sample_gll(from_mean(MeanParams(mu, model.phi, model.gamma)), 1, rng)[0]
    return out


# fitting ------------------------------------------------------------------

@dataclass
class RegressionFit:
    model: object
    loglik: float
    names: list
    estimates: np.ndarray
    standard_errors: np.ndarray
    grad_norm: float
    converged: bool
    boundary_flags: dict = field(default_factory=dict)

    def as_dict(self):
        out = {"loglik": self.loglik, "converged": self.converged}
        for name, est, se in zip(self.names, self.estimates, self.standard_errors):
            out[name] = float(est)
            out[f"se_{name}"] = float(se)
        for key, flag in self.boundary_flags.items():
            out[f"{key}_at_boundary"] = bool(flag)
        return out


@dataclass
class RegressionOptions:
    fix_p_zero: bool = False
    fix_gamma_one: bool = False
    max_iter: int = 2000
    tol: float = 1e-4


def _check_design(data):
    k = data.k
    if not data.n > k + 3:
        raise DomainError(f"need more than {k + 3} observations for {k} covariates, got {data.n}")
    if np.linalg.matrix_rank(data.design) < k + 1:
        raise DomainError("design matrix is rank deficient")


def _numeric_hessian(grad, x, rel=1e-5):
    """Symmetrized central differences of an analytic gradient."""
    k = x.size
    h = np.empty((k, k))
    for j in range(k):
        step = rel * max(1.0, abs(x[j]))
        up, dn = x.copy(), x.copy()
        up[j] += step
        dn[j] -= step
        h[:, j] = (grad(up) - grad(dn)) / (2.0 * step)
    return 0.5 * (h + h.T)


def _standard_errors(grad, x):
    h = _numeric_hessian(grad, x)
    try:
        cov = np.linalg.inv(-h)
    except np.linalg.LinAlgError:
        return np.full(x.size, np.nan)
    d = np.diag(cov)
    return np.where(d > 0, np.sqrt(np.abs(d)), np.nan)


def _minimize(fun, starts, max_iter):
    best = None
    for z0 in starts:
        res = optimize.minimize(fun, z0, jac=True, method="L-BFGS-B",
                                options={"maxiter": max_iter, "gtol": 1e-10, "ftol": 1e-15})
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise ConvergenceError("no starting point produced a finite likelihood")
    return best


def _theta_fit_sub(data, free_lam, free_p, starts, options):
    x, y = data.design, data.response
    kb = x.shape[1]
    n = data.n

    def unpack(z):
        beta = z[:kb]
        lam = math.exp(min(z[kb], 700.0)) if free_lam else 0.0
        p = math.exp(min(z[kb + 1], 700.0)) if free_p else 0.0
        return beta, lam, p

    def fun(z):
        beta, lam, p = unpack(z)
        theta = logistic(x @ beta)
        if np.any(theta <= 0.0) or not math.isfinite(lam) or not math.isfinite(p):
            return math.inf, np.zeros_like(z)
        ll, g_th, g_lam, g_p = _theta_terms(np.atleast_1d(theta), lam, p, y)
        total = float(np.sum(ll))
        g = np.concatenate([x.T @ (g_th * theta * (1.0 - theta)),
                            [np.sum(g_lam) * lam if free_lam else 0.0,
                             np.sum(g_p) * p if free_p else 0.0]])
        if not (math.isfinite(total) and np.all(np.isfinite(g))):
            return math.inf, np.zeros_like(z)
        return -total / n, -g / n

    res = _minimize(fun, starts, options.max_iter)
    beta, lam, p = unpack(res.x)
    return ThetaLinkModel(beta, lam, p), -res.fun * n


def fit_theta_model(data, options=None):
    """Maximize the θ-link likelihood over ``(β, λ, p)``.

    Boundary sub-models with ``p = 0`` and/or ``λ = 0`` are refitted and the
    best likelihood kept, ties going to the smaller model.
    """
    options = options or RegressionOptions()
    _check_design(data)
    kb = data.k + 1
    # intercept-only GLL fit seeds λ, p and the intercept
    base = fit_mle(Sample(data.response), FitOptions(fix_p_zero=options.fix_p_zero))
    th0 = min(max(base.params.theta, 0.05), 0.95)
    b0 = np.zeros(kb)
    b0[0] = math.log(th0 / (1.0 - th0))
    seeds = [(max(base.params.lam, 1e-3), max(base.params.p, 1e-3)), (1.0, 1.0), (0.1, 0.5), (5.0, 2.0)]

    variants = [(True, not options.fix_p_zero), (True, False), (False, not options.fix_p_zero), (False, False)]
    seen = []
    for v in variants:
        if v not in seen:
            seen.append(v)
    results = []
    for free_lam, free_p in seen:
        starts = [np.concatenate([b0, [math.log(lam), math.log(p)]]) for lam, p in seeds]
        model, ll = _theta_fit_sub(data, free_lam, free_p, starts, options)
        results.append(((free_lam, free_p), model, ll))

    best = results[0]
    for cand in results[1:]:
        tol = 1e-7 * max(1.0, abs(best[2]))
        if cand[2] > best[2] + tol or (cand[2] >= best[2] - tol and sum(cand[0]) < sum(best[0])):
            best = cand
    (free_lam, free_p), model, _ = best

    def grad(v):
        return regression_score(ThetaLinkModel(v[:kb], max(v[kb], 0.0), max(v[kb + 1], 0.0)), data)

    est = np.concatenate([model.beta, [model.lam, model.p]])
    g = grad(est)
    mask = np.concatenate([np.ones(kb, bool), [free_lam, free_p]])
    se = np.full(est.size, np.nan)
    idx = np.flatnonzero(mask)
    se[idx] = _standard_errors(lambda v: grad(_embed(v, est, idx))[idx], est[idx])
    gnorm = float(np.max(np.abs(g[idx])))
    names = data.coefficient_names() + ["lambda", "p"]
    return RegressionFit(model, regression_loglik(model, data), names, est, se, gnorm,
                         bool(gnorm <= options.tol * max(1.0, data.n)),
                         {"lambda": not free_lam, "p": not free_p})


def _embed(v, full, idx):
    out = full.copy()
    out[idx] = v
    return out


def fit_mean_model(data, options=None):
    """Maximize the mean-link likelihood over ``(β, φ, γ)`` with ``1 <= γ < 1/max μ``."""
    options = options or RegressionOptions()
    _check_design(data)
    x, y = data.design, data.response
    kb = x.shape[1]
    n = data.n
    free_g = not options.fix_gamma_one

    def unpack(z):
        beta = z[:kb]
        phi = math.exp(min(z[kb], 700.0))
        mu = np.atleast_1d(logistic(x @ beta))
        j = int(np.argmax(mu))
        room = 1.0 / mu[j] - 1.0
        s = logistic(z[kb + 1]) if free_g else 0.0
        return beta, phi, mu, j, room, s, 1.0 + room * s

    def fun(z):
        beta, phi, mu, j, room, s, gam = unpack(z)
        if not (math.isfinite(phi) and phi > 0) or np.any(mu <= 0.0) or np.any(mu * gam >= 1.0):
            return math.inf, np.zeros_like(z)
        try:
            with np.errstate(all="ignore"):
                ll, grads = _mean_terms(mu, phi, gam, y)
        except InfeasibleError:
            return math.inf, np.zeros_like(z)
        total = float(np.sum(ll))
        g_gam = float(np.sum(grads["gamma"]))
        g_beta = x.T @ (grads["mu"] * mu * (1.0 - mu))
        if free_g:
            # γ depends on β through the row with the largest μ
            g_beta = g_beta - g_gam * s * (1.0 - mu[j]) / mu[j] * x[j]
        g = np.concatenate([g_beta, [np.sum(grads["phi"]) * phi,
                                     g_gam * room * s * (1.0 - s) if free_g else 0.0]])
        if not (math.isfinite(total) and np.all(np.isfinite(g))):
            return math.inf, np.zeros_like(z)
        return -total / n, -g / n

    ybar = float(np.mean(y))
    b0 = np.zeros(kb)
    b0[0] = math.log(ybar / (1.0 - ybar))
    starts = [np.concatenate([b0, [math.log(phi), g]])
              for phi in (0.2, 1.0, 5.0) for g in ((-4.0, 0.0) if free_g else (0.0,))]
    res = _minimize(fun, starts, options.max_iter)
    beta, phi, mu, j, room, s, gam = unpack(res.x)
    model = MeanLinkModel(beta, phi, gam)

    def grad(v):
        return regression_score(MeanLinkModel(v[:kb], v[kb], max(v[kb + 1], 1.0)), data)

    est = np.concatenate([beta, [phi, gam]])
    idx = np.arange(est.size if free_g else est.size - 1)
    se = np.full(est.size, np.nan)
    g = grad(est)
    # φ collapsing toward 0 is a boundary solution: no interior curvature to report
    phi_boundary = phi < 1e-8 and g[kb] <= 0.0
    if not phi_boundary:
        try:
            se[idx] = _standard_errors(lambda v: grad(_embed(v, est, idx))[idx], est[idx])
        except (InfeasibleError, DomainError):
            pass
    # at γ = 1 only a non-positive γ-score is stationary
    at_boundary = (not free_g) or (gam - 1.0 < 1e-6 and g[-1] <= 0.0)
    active = [i for i in range(est.size)
              if not (i == kb and phi_boundary) and not (i == kb + 1 and at_boundary)]
    gnorm = float(np.max(np.abs(g[active])))
    names = data.coefficient_names() + ["phi", "gamma"]
    return RegressionFit(model, regression_loglik(model, data), names, est, se, gnorm,
                         bool(gnorm <= options.tol * max(1.0, n)),
                         {"phi": bool(phi_boundary), "gamma": bool(at_boundary)})


def intercept_only_params(model):
    """Canonical parameters implied by an intercept-only model."""
    if model.beta.size != 1:
        raise DomainError("model has covariates")
    if isinstance(model, ThetaLinkModel):
        return GllParams(logistic(model.beta[0]), model.lam, model.p)
    mu = logistic(model.beta[0])
    if mu * model.gamma >= 1.0:
        raise BoundaryError("mu*gamma >= 1")
    return from_mean(MeanParams(mu, model.phi, model.gamma))
