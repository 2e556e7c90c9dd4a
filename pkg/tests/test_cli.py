import csv
import io
import json
import subprocess
import sys

import pytest

from twisted_eisenstein import cli
from twisted_eisenstein._backend import get_backend, set_backend


@pytest.fixture
def run(capsys):
    def go(*argv):
        before = get_backend()
        try:
            code = cli.main(list(argv))
        finally:
            set_backend(before)
        out, err = capsys.readouterr()
        return code, out, err
    return go


def _strip_ts(text):
    d = json.loads(text)
    d.pop("timestamp")
    return d


class TestRationality:
    def test_json(self, run):
        code, out, _ = run("rationality", "--k", "12", "--s", "5", "--w", "2")
        assert code == 0
        d = json.loads(out)
        assert set(d) == {"command", "params", "results", "tolerances", "status", "timestamp"}
        assert d["command"] == "rationality" and d["status"] == "pass"
        row = d["results"][0]
        assert (row["numerator"], row["denominator"]) == ("-39", "2048")
        assert row["in_D"] and row["numeric_dev"] <= 1e-6
        assert d["params"]["backend"] in ("numba", "numpy")
        assert d["params"]["truncation"]["c_max"] == 200

    def test_outside_D_has_no_numeric(self, run):
        code, out, _ = run("rationality", "--k", "12", "--s", "10", "--w", "3")
        assert code == 0
        row = json.loads(out)["results"][0]
        assert row["exact"] == "-269/256" and row["numeric"] is None

    def test_odd_k(self, run):
        code, _, err = run("rationality", "--k", "13", "--s", "5", "--w", "2")
        assert code == 1 and "k must be even" in err

    def test_same_parity(self, run):
        code, _, err = run("rationality", "--k", "12", "--s", "5", "--w", "3")
        assert code == 1 and "opposite parity required" in err

    def test_out_of_range(self, run):
        code, _, err = run("rationality", "--k", "12", "--s", "11", "--w", "2")
        assert code == 1 and err.startswith("error:")

    def test_missing_argument(self, run):
        code, _, err = run("rationality", "--k", "12")
        assert code == 1 and "required" in err

    def test_text(self, run):
        code, out, _ = run("rationality", "--k", "12", "--s", "5", "--w", "2", "--format", "text")
        assert code == 0 and out.startswith("k=12 s=5 w=2: -39/2048")

    def test_deterministic_apart_from_timestamp(self, run):
        a = run("rationality", "--k", "12", "--s", "6", "--w", "3")[1]
        b = run("rationality", "--k", "12", "--s", "6", "--w", "3")[1]
        assert _strip_ts(a) == _strip_ts(b)


class TestTable:
    def test_csv_k12(self, run):
        code, out, _ = run("table", "--k", "12", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["k", "s", "w", "numerator", "denominator"]
        assert len(rows) - 1 == 40
        assert all((int(r[1]) + int(r[2])) % 2 == 1 for r in rows[1:])

    def test_k6(self, run):
        code, out, _ = run("table", "--k", "6")
        d = json.loads(out)
        assert code == 0 and len(d["results"]) == 4

    def test_subrange(self, run):
        code, out, _ = run("table", "--k", "12", "--s-min", "4", "--s-max", "5", "--w-max", "3")
        got = {(r["s"], r["w"]) for r in json.loads(out)["results"]}
        assert got == {(4, 3), (5, 2)}

    def test_empty_range_gives_header(self, run):
        code, out, _ = run("table", "--k", "12", "--s-min", "40", "--s-max", "50", "--format", "csv")
        assert code == 0 and out.strip() == "k,s,w,numerator,denominator"

    def test_bad_range(self, run):
        code, _, err = run("table", "--k", "12", "--s-min", "8", "--s-max", "4")
        assert code == 1 and "bad range" in err

    def test_bad_k(self, run):
        assert run("table", "--k", "4")[0] == 1
        assert run("table", "--k", "7")[0] == 1

    def test_deterministic(self, run):
        a = run("table", "--k", "10", "--format", "csv")[1]
        b = run("table", "--k", "10", "--format", "csv")[1]
        assert a == b


class TestVerify:
    def test_specfun(self, run):
        code, out, _ = run("verify", "specfun")
        d = json.loads(out)
        assert code == 0 and d["status"] == "pass"
        assert all(r["passed"] for r in d["results"])
        assert set(d["tolerances"]) == {r["name"] for r in d["results"]}

    def test_specfun_text(self, run):
        code, out, _ = run("verify", "specfun", "--format", "text")
        assert code == 0
        lines = out.strip().splitlines()
        assert all(l.startswith("PASS") for l in lines[:-1]) and lines[-1] == "status: pass"

    def test_unknown_suite(self, run):
        code, _, err = run("verify", "bogus")
        assert code == 1 and "invalid choice" in err

    def test_bad_truncation(self, run):
        code, _, err = run("verify", "specfun", "--x-samples", "8")
        assert code == 1 and "x_samples" in err

    def test_spectral_numpy_backend(self, run):
        code, out, _ = run("verify", "spectral", "--backend", "numpy")
        d = json.loads(out)
        assert code == 0 and d["params"]["backend"] == "numpy"


class TestCoefficient:
    def test_value(self, run):
        code, out, _ = run("coefficient", "--k", "12", "--s", "4.5", "--w", "2", "--m", "1",
                           "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["k", "s", "w", "m", "value", "error_estimate"]
        assert float(rows[1][5]) > 0

    def test_complex_point(self, run):
        code, out, _ = run("coefficient", "--k", "12", "--s", "4.2+0.3j", "--w", "2.1+0.2j")
        row = json.loads(out)["results"][0]
        assert code == 0 and isinstance(row["value"], list)

    def test_outside_D(self, run):
        code, _, err = run("coefficient", "--k", "12", "--s", "9.5", "--w", "2")
        assert code == 1 and err.startswith("error:")

    def test_bad_m(self, run):
        assert run("coefficient", "--k", "12", "--s", "4.5", "--w", "2", "--m", "0")[0] == 1


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "twisted_eisenstein", "table", "--k", "8",
                        "--format", "csv"], capture_output=True, text=True, timeout=300)
    assert p.returncode == 0
    assert p.stdout.splitlines()[0] == "k,s,w,numerator,denominator"


def test_version(run):
    with pytest.raises(SystemExit) as e:
        cli.main(["--version"])
    assert e.value.code == 0
