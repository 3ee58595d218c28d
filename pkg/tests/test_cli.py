import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gll import cli, estimation, regression
from gll.distribution import GllParams
from gll.errors import ConvergenceError
from gll.sampling import RngState, sample_gll


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def data_file(tmp_path_factory):
    rng = RngState(11)
    y = sample_gll(GllParams(1.5, 0.5, 1.0), 300, rng)
    x = np.random.default_rng(3).normal(size=300)
    path = tmp_path_factory.mktemp("data") / "props.csv"
    with open(path, "w") as fh:
        fh.write("y,x1\n")
        for a, b in zip(y, x):
            fh.write(f"{float(a)!r},{float(b)!r}\n")
    return str(path)


def test_eval_pdf_example():
    code, out, _ = run("eval", "--theta", "1", "--lambda", "0", "--p", "0",
                       "--x", "0.367879441", "--what", "pdf")
    assert code == 0
    assert out.splitlines() == ["x,what,value", "0.367879441,pdf,1.000000"]


def test_eval_several_points_and_forms():
    code, out, _ = run("eval", "--theta", "2", "--pi", "0.5", "--p", "1", "--x", "0.1,0.5", "--what", "cdf")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run("eval", "--mu", "0.4", "--phi", "1", "--gamma", "1.2", "--what", "mean")
    assert code == 0 and out.splitlines()[1] == ",mean,0.400000"


def test_eval_moment_orders():
    code, out, _ = run("eval", "--theta", "1", "--lambda", "1", "--p", "1", "--x", "0,1", "--what", "moment")
    assert code == 0
    assert out.splitlines()[1] == "0,moment,1.000000"


def test_sample_deterministic():
    argv = ("sample", "--theta", "1", "--lambda", "0", "--p", "0", "-n", "5", "--seed", "42")
    a, b = run(*argv), run(*argv)
    assert a[0] == 0 and a == b
    assert len(a[1].splitlines()) == 6


def test_sample_seed_changes_output():
    base = ("sample", "--theta", "1", "--lambda", "0.5", "--p", "1", "-n", "5")
    assert run(*base, "--seed", "1")[1] != run(*base, "--seed", "2")[1]


def test_sample_values_roundtrip_exactly():
    code, out, _ = run("sample", "--theta", "2", "--lambda", "1", "--p", "0.5", "-n", "20", "--seed", "9")
    vals = [r["value"] for r in cli.parse(out)]
    ref = sample_gll(GllParams(2, 1, 0.5), 20, RngState(9))
    assert vals == ref.tolist()


def test_sample_ll_method():
    assert run("sample", "--theta", "2", "--lambda", "1", "-n", "3", "--seed", "1", "--method", "ll")[0] == 0
    assert run("sample", "--theta", "2", "--lambda", "1", "--p", "1", "-n", "3", "--seed", "1",
               "--method", "ll")[0] == 1


@pytest.mark.parametrize("argv", [
    ["sample", "--theta", "1", "-n", "5"],               # seed is mandatory
    ["frobnicate"],
    ["eval", "--theta", "1", "--bogus", "3"],
    ["eval", "--lambda", "1", "--x", "0.5"],             # no theta
    ["eval", "--theta", "1", "--x", "a,b"],
    ["eval", "--theta", "-1", "--x", "0.5"],            # domain error
    ["eval", "--theta", "1", "--x", "1.5"],
    ["premium", "--risk", "gamma:shape=2", "--ph", "0.5"],
    ["premium", "--risk", "exp:rate=1", "--theta", "1.5", "--lambda", "1", "--p", "1"],
    ["premium"],
    [],
])
def test_usage_and_domain_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and err


def test_nonconvergence_exits_2(monkeypatch, data_file):
    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setattr(estimation, "fit_mle", boom)
    code, _, err = run("fit", "--data", data_file, "--response", "y")
    assert code == 2 and "converge" in err


def test_fit_output(data_file):
    code, out, _ = run("fit", "--data", data_file, "--response", "y")
    assert code == 0
    rec = cli.parse(out)[0]
    assert rec["n"] == 300 and rec["converged"] is True
    assert f"{rec['loglik']:.4f}" == str(rec["loglik"]) or len(str(rec["loglik"]).split(".")[1]) <= 4


def test_fit_structured_roundtrip(data_file):
    code, out, _ = run("fit", "--data", data_file, "--response", "y", "--format", "structured")
    res = estimation.fit_mle(estimation.Sample(regression.Dataset.from_csv(data_file, "y").response))
    records, order = cli._fit_records(res)
    assert cli.parse(out, "structured") == records
    assert cli.parse(cli.emit(records, "structured"), "structured") == records
    assert json.loads(out)["columns"] == order


def test_regress_output(data_file):
    code, out, _ = run("regress", "--data", data_file, "--response", "y", "--covariates", "x1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "term,estimate,se"
    term, est, _ = lines[1].split(",")
    assert term == "loglik" and len(est.split(".")[1]) == 4
    assert [l.split(",")[0] for l in lines[2:6]] == ["(Intercept)", "x1", "lambda", "p"]


def test_regress_mean_and_complement(data_file):
    code, out, _ = run("regress", "--data", data_file, "--response", "y", "--model", "mean",
                       "--complement", "--fix-gamma-one")
    assert code == 0 and "gamma_at_boundary,true" in out


def test_regress_missing_column(data_file):
    assert run("regress", "--data", data_file, "--response", "nope")[0] == 1
    assert run("fit", "--data", data_file + ".missing", "--response", "y")[0] == 1


def test_premium_table1():
    code, out, _ = run("premium", "table1")
    assert code == 0
    rows = cli.parse(out)
    assert len(rows) == 11
    assert [r["risk"] for r in rows if r["P_1"] is None] == ["exponential", "weibull", "inverse_gaussian"]
    assert rows[1]["P_0.4"] == 5.0 and out.splitlines()[2].split(",")[1] == "5.000"
    assert all(r["bound_ok"] is True for r in rows if r["P_1"] is not None)


def test_premium_table1_cells():
    # eight risk rows under three family headers, eleven premium columns
    rows = [r for r in cli.parse(run("premium", "table1")[1]) if r["P_1"] is not None]
    assert len(rows) == 8
    assert len(rows[0]) == 1 + 11 + 1


def test_premium_single_cells():
    code, out, _ = run("premium", "--risk", "exponential:rate=2", "--ph", "0.4,1",
                       "--theta", "0.3", "--lambda", "0.5", "--p", "1")
    assert code == 0
    assert out.splitlines()[1:] == [
        "exponential(rate=2),P_0.4,1.250",
        "exponential(rate=2),P_1,0.500",
        "exponential(rate=2),GLL(theta=0.3 lam=0.5 p=1),4.884",
    ]


def test_grid_and_check():
    code, out, _ = run("grid", "--theta", "2", "--lambda", "1", "--p", "1", "--points", "9")
    assert code == 0 and len(out.splitlines()) == 10
    code, out, _ = run("check", "--points", "256")
    assert code == 0
    statuses = {r["status"] for r in cli.parse(out)}
    assert statuses <= {"pass", "fail", "n/a"}


def test_out_file(tmp_path):
    path = tmp_path / "o.csv"
    code, out, _ = run("eval", "--theta", "1", "--x", "0.5", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("x,what,value\n")


def test_emit_empty_is_header_only():
    assert cli.emit([], "delimited", 3, ["a", "b"]) == "a,b\n"
    assert cli.parse(cli.emit([], "delimited", 3, ["a", "b"])) == []
    assert json.loads(cli.emit([], "structured", 3, ["a"])) == {"columns": ["a"], "records": []}


def test_emit_rounding():
    text = cli.emit([{"v": 0.0625, "w": 2.5e-7, "s": 123456.789}], "delimited",
                    {"v": 3, "w": 6, "s": "sig4"})
    assert text.splitlines()[1] == "0.062,0.000000,1.235e+05"


def test_emit_bad_format():
    with pytest.raises(Exception):
        cli.emit([], "yaml")


def test_emit_parse_roundtrip_delimited():
    recs = [{"a": 1, "b": 0.25, "c": "x", "d": True, "e": None}]
    assert cli.parse(cli.emit(recs, "delimited", 2)) == recs


def test_console_script_byte_identical():
    argv = [sys.executable, "-m", "gll.cli", "sample", "--theta", "1.3", "--lambda", "0.2",
            "--p", "2", "-n", "50", "--seed", "123"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a.splitlines()) == 51
