"""Numeric checks of the structural properties of the GLL family.

Every check scans a fixed grid and returns a :class:`GridReport`.  Checks
whose premises do not hold for the inputs return ``verdict=None`` with an
explanatory note instead of a pass or fail.

Writing ``t = −log x`` and ``h(t) = θ − 1 − p/t − 1/(λ+t)``:

* ``d log f/dx = h(t)/x``, so the sign of ``F''`` is the sign of ``h``;
* ``d² log f/dx² = −K(t)/x²`` with ``K(t) = h(t) + p/t² + 1/(λ+t)²``.
"""

from dataclasses import dataclass, field

import numpy as np

from .distribution import GllParams, cdf, logpdf, moment, survival

GRID_SIZE = 2048
GRID_EPS = 1e-8
MOMENT_ORDERS = (0.5, 1.0, 2.0, 3.0)

HYPOTHESIS_FAILED = "hypothesis not satisfied"
OUTSIDE_LOG_CONCAVE = "outside log-concavity regime (theta <= 1)"
NO_SHAPE_PREDICTION = "no shape prediction for these parameters"


@dataclass
class GridReport:
    grid: np.ndarray
    verdict: object  # "pass", "fail" or None when the check does not apply
    first_violation: object = None
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"

    def summary(self):
        if self.verdict is None:
            return f"n/a ({self.note})"
        if self.passed:
            return "pass"
        x, vals = self.first_violation
        return f"fail at x={x:.6g}: {vals}"


def log_grid(size=GRID_SIZE, eps=GRID_EPS):
    """Points on (eps, 1 − eps), geometrically dense toward both endpoints."""
    if size < 4:
        raise ValueError("grid needs at least 4 points")
    half = size // 2
    left = np.geomspace(eps, 0.5, half, endpoint=False)
    right = 1.0 - np.geomspace(0.5, eps, size - half)
    return np.concatenate([left, right])


def _report(grid, bad, values, note="", details=None):
    if np.any(bad):
        i = int(np.argmax(bad))
        vals = {k: float(v[i]) for k, v in values.items()}
        return GridReport(grid, "fail", (float(grid[i]), vals), note, details or {})
    return GridReport(grid, "pass", None, note, details or {})


def lr_hypothesis(p1, p2):
    """``θ₁ <= θ₂``, ``λ₁ <= λ₂`` and ``p₂ <= p₁``."""
    return p1.theta <= p2.theta and p1.lam <= p2.lam and p2.p <= p1.p


def _log_ratio(p1, p2, x):
    return np.asarray(logpdf(p2, x)) - np.asarray(logpdf(p1, x))


def lr_ratio_monotone(p1, p2, grid_size=GRID_SIZE):
    """Is ``f(x; p2)/f(x; p1)`` non-decreasing in ``x``?

    Monotonicity is tested on the log ratio, with successive differences
    allowed to dip by 1e-12 relative.
    """
    grid = log_grid(grid_size)
    lr = _log_ratio(p1, p2, grid)
    step = np.diff(lr)
    tol = 1e-12 * np.maximum(1.0, np.abs(lr[:-1]))
    bad = step < -tol
    report = _report(grid[:-1], bad, {"log_ratio": lr[:-1], "next": lr[1:]})
    report.grid = grid
    report.details["monotone"] = report.passed
    if not lr_hypothesis(p1, p2):
        report.verdict, report.first_violation, report.note = None, None, HYPOTHESIS_FAILED
    return report


def moment_hazard_ordering(p1, p2, grid_size=GRID_SIZE):
    """Consequences of ``X₁ <=_LR X₂`` checked numerically.

    * ``E[X₁^k] <= E[X₂^k]`` for ``k`` in 0.5, 1, 2, 3;
    * hazard rates ``r₁(x) >= r₂(x)`` (hazard-rate order);
    * reversed hazards ``f₁/F₁ <= f₂/F₂``.
    """
    grid = log_grid(grid_size)
    if not lr_hypothesis(p1, p2):
        return GridReport(grid, None, None, HYPOTHESIS_FAILED)
    m1 = np.array([moment(p1, k) for k in MOMENT_ORDERS])
    m2 = np.array([moment(p2, k) for k in MOMENT_ORDERS])
    moments_ok = bool(np.all(m1 <= m2 * (1.0 + 1e-12)))
    details = {"moments_1": m1.tolist(), "moments_2": m2.tolist(), "moments_ok": moments_ok}
    if not moments_ok:
        k = int(np.argmax(m1 > m2 * (1.0 + 1e-12)))
        return GridReport(grid, "fail", (float("nan"), {"order": MOMENT_ORDERS[k], "m1": m1[k], "m2": m2[k]}),
                          "moment ordering violated", details)

    lf1, lf2 = np.asarray(logpdf(p1, grid)), np.asarray(logpdf(p2, grid))
    with np.errstate(divide="ignore"):
        lh1 = lf1 - np.log(np.asarray(survival(p1, grid)))
        lh2 = lf2 - np.log(np.asarray(survival(p2, grid)))
        lg1 = lf1 - np.log(np.asarray(cdf(p1, grid)))
        lg2 = lf2 - np.log(np.asarray(cdf(p2, grid)))
    tol = 1e-9
    finite = np.isfinite(lh1) & np.isfinite(lh2)
    bad_h = finite & (lh1 < lh2 - tol * np.maximum(1.0, np.abs(lh2)))
    bad_g = lg1 > lg2 + tol * np.maximum(1.0, np.abs(lg2))
    details["hazard_points"] = int(finite.sum())
    return _report(grid, bad_h | bad_g,
                   {"log_hazard_1": lh1, "log_hazard_2": lh2,
                    "log_rev_hazard_1": lg1, "log_rev_hazard_2": lg2}, details=details)


def _h_and_k(params, t):
    theta, lam, p = params.as_tuple()
    h = theta - 1.0 - 1.0 / (lam + t)
    k = 1.0 / (lam + t) ** 2
    if p:
        h = h - p / t
        k = k + p / (t * t)
    return h, h + k


def log_concavity_margin(params, grid_size=GRID_SIZE):
    """``min K(t)`` over the grid; the density is log-concave there iff positive."""
    t = -np.log(log_grid(grid_size))
    return float(np.min(_h_and_k(params, t)[1]))


def log_concavity_check(params, grid_size=GRID_SIZE):
    """Sign scan of the analytic ``(log f)''`` for ``θ > 1``."""
    grid = log_grid(grid_size)
    if not params.theta > 1.0:
        return GridReport(grid, None, None, OUTSIDE_LOG_CONCAVE)
    t = -np.log(grid)
    _, k = _h_and_k(params, t)
    second = -k / (grid * grid)
    return _report(grid, second >= 0.0, {"d2_log_pdf": second, "K": k},
                   details={"margin": float(np.min(k))})


def predicted_cdf_shape(params):
    """Shape implied by the concavity results, or None when none applies."""
    theta, lam, p = params.as_tuple()
    if theta <= 1.0:
        return "concave"
    if p > 0 and lam > 0:
        return "neither"
    if p == 0 and lam * (theta - 1.0) >= 1.0:
        return "convex"
    return None


def _classify(h):
    if np.all(h <= 0.0):
        return "concave"
    if np.all(h >= 0.0):
        return "convex"
    return "neither"


def cdf_shape_classify(params, grid_size=GRID_SIZE):
    """Classify the cdf from the sign of ``F''`` on the grid.

    Returns ``(shape, report)`` with ``shape`` one of ``concave``, ``convex``
    or ``neither``.  The report passes when the shape agrees with the
    prediction for the parameter regime.
    """
    grid = log_grid(grid_size)
    h, _ = _h_and_k(params, -np.log(grid))
    shape = _classify(h)
    expected = predicted_cdf_shape(params)
    details = {"shape": shape, "expected": expected,
               "sign_changes": int(np.count_nonzero(np.diff(np.sign(h))))}
    if expected is None:
        return shape, GridReport(grid, None, None, NO_SHAPE_PREDICTION, details)
    if shape == expected:
        return shape, GridReport(grid, "pass", None, "", details)
    if expected == "concave":
        bad = h > 0.0
    elif expected == "convex":
        bad = h < 0.0
    else:
        bad = np.ones_like(h, dtype=bool)
    i = int(np.argmax(bad))
    return shape, GridReport(grid, "fail", (float(grid[i]), {"h": float(h[i])}),
                             f"expected {expected}, found {shape}", details)


def dominance_check(param_list, grid_size=GRID_SIZE):
    """``F(x) >= x^θ`` at every grid point for every parameter set."""
    grid = log_grid(grid_size)
    for params in param_list:
        f = np.asarray(cdf(params, grid))
        lower = grid ** params.theta
        bad = f < lower * (1.0 - 1e-14)
        if np.any(bad):
            i = int(np.argmax(bad))
            return GridReport(grid, "fail", (float(grid[i]), {"cdf": float(f[i]), "x^theta": float(lower[i])}),
                              f"violated for {params}")
    return GridReport(grid, "pass", None, f"{len(param_list)} parameter sets")


def default_suite():
    """Configurations exercised by the ``check`` command."""
    lr_pairs = [(GllParams(1, 1, 2), GllParams(2, 2, 1)),
                (GllParams(0.5, 0.5, 1), GllParams(0.7, 1.5, 1)),
                (GllParams(2, 1, 1), GllParams(2, 1, 0)),
                (GllParams(1, 0, 3), GllParams(3, 0.5, 0.5))]
    concavity = [GllParams(2, 1, 1), GllParams(3, 2, 2), GllParams(1.5, 0, 0), GllParams(1.0001, 0, 0)]
    shapes = [GllParams(0.7, 1, 2), GllParams(2, 1, 1), GllParams(2, 2, 0), GllParams(0.3, 0.5, 1)]
    return lr_pairs, concavity, shapes


def run_suite(grid_size=GRID_SIZE):
    """Run every check on the default configurations; yields ``(name, report)``."""
    from .premium import DEFAULT_GLL

    lr_pairs, concavity, shapes = default_suite()
    for a, b in lr_pairs:
        tag = f"{a.as_tuple()} vs {b.as_tuple()}"
        yield f"lr_ratio_monotone {tag}", lr_ratio_monotone(a, b, grid_size)
        yield f"moment_hazard_ordering {tag}", moment_hazard_ordering(a, b, grid_size)
    for params in concavity:
        yield f"log_concavity_check {params.as_tuple()}", log_concavity_check(params, grid_size)
    for params in shapes:
        shape, rep = cdf_shape_classify(params, grid_size)
        yield f"cdf_shape_classify {params.as_tuple()} -> {shape}", rep
    yield "dominance F(x) >= x^theta (premium grid)", dominance_check(DEFAULT_GLL, grid_size)
