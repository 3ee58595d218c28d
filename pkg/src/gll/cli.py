"""Command-line interface: ``gll <command> [options]``.

Exit status is 0 on success, 1 for invalid input or domain errors and 2 when
a numerical routine fails to converge.
"""

import argparse
import csv
import io
import json
import math
import sys
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from . import analysis, distribution as dist, entropy, estimation, premium, regression, sampling
from .errors import ConvergenceError, DomainError

FORMATS = ("delimited", "structured")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# output -------------------------------------------------------------------

def _fmt_value(value, precision):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        if isinstance(precision, str) and precision.startswith("sig"):
            return f"{value:.{int(precision[3:])}g}"
        out = Decimal(value).quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_EVEN)
        return "0." + "0" * precision if out.is_zero() else str(out)
    return str(value)


def emit(records, fmt="delimited", precision=6, columns=None):
    """Serialize a list of flat dicts.

    ``delimited`` writes a comma-separated header and fixed-precision rows;
    ``precision`` is a number of decimals, ``"sigN"`` for N significant
    figures, or a dict mapping column names to either.  ``structured`` writes
    JSON with keys in record order and full-precision numbers.
    """
    if fmt not in FORMATS:
        raise DomainError(f"format must be one of {', '.join(FORMATS)}")
    columns = list(columns) if columns else (list(records[0]) if records else [])
    if fmt == "structured":
        clean = [{k: _jsonable(r.get(k)) for k in columns} for r in records]
        return json.dumps({"columns": columns, "records": clean}, indent=2, allow_nan=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([_fmt_value(r.get(k), precision.get(k, 6) if isinstance(precision, dict) else precision)
                         for k in columns])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def _parse_cell(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse(text, fmt="delimited"):
    """Inverse of :func:`emit`; returns a list of dicts."""
    if fmt == "structured":
        return json.loads(text)["records"]
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return []
    header = rows[0]
    return [dict(zip(header, map(_parse_cell, r))) for r in rows[1:]]


# argument helpers ---------------------------------------------------------

def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _add_params(p):
    g = p.add_argument_group("distribution parameters")
    g.add_argument("--theta", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--p", type=float)
    g.add_argument("--pi", type=float, help="bounded form: pi = lambda*theta/(1+lambda*theta)")
    g.add_argument("--mu", type=float, help="mean form (with --phi and --gamma)")
    g.add_argument("--phi", type=float)
    g.add_argument("--gamma", type=float)


def _add_output(p):
    p.add_argument("--format", choices=FORMATS, default="delimited")
    p.add_argument("--out", help="write output to this file instead of stdout")


def _params(args):
    if args.mu is not None or args.phi is not None:
        if args.mu is None or args.phi is None:
            raise UsageError("--mu and --phi must be given together")
        return dist.from_mean(dist.MeanParams(args.mu, args.phi, 1.0 if args.gamma is None else args.gamma))
    if args.theta is None:
        raise UsageError("--theta is required")
    p = 0.0 if args.p is None else args.p
    if args.pi is not None:
        if args.lam is not None:
            raise UsageError("give either --lambda or --pi, not both")
        return dist.from_pi(dist.PiParams(args.theta, args.pi, p))
    return dist.GllParams(args.theta, 0.0 if args.lam is None else args.lam, p)


# commands -----------------------------------------------------------------

_EVAL_POINTWISE = {
    "pdf": dist.pdf, "cdf": dist.cdf, "sf": dist.survival, "hazard": dist.hazard,
    "quantile": dist.quantile,
}
_EVAL_SCALAR = {
    "mean": dist.mean, "variance": dist.variance, "mode": dist.mode,
    "entropy": entropy.entropy_numeric,
}


def cmd_eval(args):
    params = _params(args)
    what = args.what
    records = []
    if what in _EVAL_POINTWISE:
        if args.x is None:
            raise UsageError(f"--x is required for {what}")
        for x in _floats(args.x):
            records.append({"x": x, "what": what, "value": _EVAL_POINTWISE[what](params, x)})
    elif what == "moment":
        if args.x is None:
            raise UsageError("--x gives the moment orders for moment")
        for r in _floats(args.x):
            records.append({"x": r, "what": what, "value": dist.moment(params, r)})
    else:
        records.append({"x": None, "what": what, "value": _EVAL_SCALAR[what](params)})
    return emit(records, args.format, {"x": "sig12", "value": 6}, ["x", "what", "value"])


def cmd_sample(args):
    params = _params(args)
    if args.n < 1:
        raise DomainError("-n must be >= 1")
    rng = sampling.RngState(args.seed)
    if args.method == "ll":
        if params.p != 0.0:
            raise DomainError("--method ll requires p = 0")
        draws = sampling.sample_ll(params.theta, params.lam, args.n, rng)
    else:
        draws = sampling.sample_gll(params, args.n, rng)
    records = [{"i": i, "value": float(v)} for i, v in enumerate(draws)]
    return emit(records, args.format, {"value": "sig17"}, ["i", "value"])


def _fit_records(res):
    d = res.as_dict()
    order = ["theta", "lam", "p", "se_theta", "se_lam", "se_p", "loglik", "score_norm",
             "converged", "lam_at_boundary", "p_at_boundary", "n"]
    return [{k: d[k] for k in order}], order


def cmd_fit(args):
    data = regression.Dataset.from_csv(args.data, args.response, (), args.divisor, args.complement)
    opts = estimation.FitOptions(fix_lam_zero=args.fix_lambda_zero, fix_p_zero=args.fix_p_zero)
    res = estimation.fit_mle(estimation.Sample(data.response), opts)
    records, order = _fit_records(res)
    prec = {k: 4 for k in order}
    prec["score_norm"] = "sig3"
    return emit(records, args.format, prec, order)


def cmd_regress(args):
    covs = [c.strip() for c in args.covariates.split(",") if c.strip()] if args.covariates else []
    data = regression.Dataset.from_csv(args.data, args.response, covs, args.divisor, args.complement)
    if args.model == "theta":
        res = regression.fit_theta_model(data, regression.RegressionOptions(fix_p_zero=args.fix_p_zero))
    else:
        res = regression.fit_mean_model(data, regression.RegressionOptions(fix_gamma_one=args.fix_gamma_one))
    records = [{"term": "loglik", "estimate": res.loglik, "se": None}]
    records += [{"term": n, "estimate": float(e), "se": float(s)}
                for n, e, s in zip(res.names, res.estimates, res.standard_errors)]
    records.append({"term": "converged", "estimate": res.converged, "se": None})
    for key, flag in res.boundary_flags.items():
        records.append({"term": f"{key}_at_boundary", "estimate": flag, "se": None})
    if args.format == "delimited":
        # log-likelihood at 4 dp, coefficients at 6 significant figures
        text = emit(records[:1], "delimited", 4, ["term", "estimate", "se"])
        return text + emit(records[1:], "delimited", "sig6", ["term", "estimate", "se"]).split("\n", 1)[1]
    return emit(records, "structured", None, ["term", "estimate", "se"])


def cmd_premium(args):
    if args.target == "table1":
        table = premium.premium_table()
        cols = table.columns
        records = []
        family = None
        for risk, (label, vals, flag) in zip(table.risks, table.rows()):
            if risk.kind != family:
                # family header row with empty cells, as in the published layout
                family = risk.kind
                records.append({"risk": family})
            rec = {"risk": label}
            rec.update(zip(cols, vals))
            rec["bound_ok"] = flag
            records.append(rec)
        return emit(records, args.format, 3, ["risk"] + cols + ["bound_ok"])
    if args.risk is None:
        raise UsageError("--risk is required (or use 'premium table1')")
    model = premium.RiskModel.parse(args.risk)
    records = []
    for n in _floats(args.ph) if args.ph else []:
        records.append({"risk": model.label(), "premium": f"P_{n:g}", "value": premium.ph_premium(model, n)})
    if args.theta is not None or args.mu is not None:
        params = _params(args)
        spec = premium.DistortionSpec.gll(params)
        records.append({"risk": model.label(), "premium": spec.label(),
                        "value": premium.distorted_premium(model, params)})
    if not records:
        raise UsageError("give --ph and/or distortion parameters (--theta ...)")
    return emit(records, args.format, 3, ["risk", "premium", "value"])


def cmd_grid(args):
    params = _params(args)
    if args.points < 2:
        raise DomainError("--points must be >= 2")
    xs = np.linspace(0.0, 1.0, args.points + 2)[1:-1]
    fn = {"pdf": dist.pdf, "cdf": dist.cdf, "sf": dist.survival, "hazard": dist.hazard}[args.what]
    records = []
    for x in xs:
        try:
            v = fn(params, float(x))
        except DomainError:
            v = math.inf
        records.append({"x": float(x), args.what: v})
    return emit(records, args.format, 6, ["x", args.what])


def cmd_check(args):
    records = []
    for name, rep in analysis.run_suite(args.points):
        status = "n/a" if rep.verdict is None else rep.verdict
        records.append({"check": name, "status": status, "detail": rep.summary()})
    return emit(records, args.format, 6, ["check", "status", "detail"])


def build_parser():
    parser = _Parser(prog="gll", description="Generalized Log-Lindley distribution toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("eval", help="evaluate pdf, cdf, sf, hazard, quantile, moments or entropy")
    _add_params(p)
    p.add_argument("--x", help="comma-separated points (moment orders for --what moment)")
    p.add_argument("--what", default="pdf",
                   choices=sorted(list(_EVAL_POINTWISE) + list(_EVAL_SCALAR) + ["moment"]))
    _add_output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="draw a seeded sample")
    _add_params(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--method", choices=("gll", "ll"), default="gll")
    _add_output(p)
    p.set_defaults(func=cmd_sample)

    for name, func, help_ in (("fit", cmd_fit, "maximum-likelihood fit to a data column"),
                              ("regress", cmd_regress, "theta-link or mean-link regression")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--data", required=True, help="comma or tab delimited file with a header row")
        p.add_argument("--response", required=True, help="response column name")
        p.add_argument("--divisor", type=float, default=1.0, help="divide the response by this")
        p.add_argument("--complement", action="store_true", help="model 1 - y")
        _add_output(p)
        p.set_defaults(func=func)
        if name == "fit":
            p.add_argument("--fix-p-zero", action="store_true")
            p.add_argument("--fix-lambda-zero", action="store_true")
        else:
            p.add_argument("--covariates", default="", help="comma-separated column names")
            p.add_argument("--model", choices=("theta", "mean"), default="theta")
            p.add_argument("--fix-p-zero", action="store_true", help="theta model: fit the p = 0 sub-model")
            p.add_argument("--fix-gamma-one", action="store_true", help="mean model: fit gamma = 1")

    p = sub.add_parser("premium", help="proportional-hazard and distorted premiums")
    p.add_argument("target", nargs="?", choices=("table1",), help="reproduce the standard premium table")
    p.add_argument("--risk", help="kind:key=val,... e.g. weibull:shape=1.5,scale=0.5")
    p.add_argument("--ph", help="comma-separated proportional-hazard exponents")
    _add_params(p)
    _add_output(p)
    p.set_defaults(func=cmd_premium)

    p = sub.add_parser("grid", help="curve values on an even grid of (0, 1)")
    _add_params(p)
    p.add_argument("--what", choices=("pdf", "cdf", "sf", "hazard"), default="pdf")
    p.add_argument("--points", type=int, default=99)
    _add_output(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("check", help="run the structural property checks")
    p.add_argument("--points", type=int, default=analysis.GRID_SIZE)
    _add_output(p)
    p.set_defaults(func=cmd_check)
    return parser


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, run the command and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        text = args.func(args)
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except ConvergenceError as exc:
        print(f"gll: did not converge: {exc}", file=stderr)
        return 2
    except (DomainError, OSError) as exc:
        print(f"gll: error: {exc}", file=stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
