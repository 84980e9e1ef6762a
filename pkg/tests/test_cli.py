import json
import subprocess
import sys
from pathlib import Path

import pytest
import sympy as sp
from sympy.functions.combinatorial.numbers import stirling

import sympy_oracle as so
from qbern.cli import main
from qbern.exactcore import RatFunc, rf_eq

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_carlitz_number(capsys):
    code, out, _ = run(["compute", "--family", "carlitz-number", "--n", "2"], capsys)
    assert code == 0
    assert out.strip() == "q / (q^3 + 2 * q^2 + 2 * q + 1)"


def test_compute_degenerate_zero(capsys):
    assert run(["compute", "--family", "degenerate", "--n", "0"], capsys)[1] == "1\n"


def test_compute_limit(capsys):
    code, out, _ = run(["compute", "--family", "carlitz-number", "--n", "4", "--at", "q=1"], capsys)
    assert (code, out) == (0, "-1/30\n")
    code, out, _ = run(["limit", "--family", "carlitz-number", "--n", "12"], capsys)
    assert out == "-691/2730\n"


def test_compute_partial_evaluation(capsys):
    code, out, _ = run(
        ["compute", "--family", "degenerate", "--n", "2", "--at", "L=0,Q=1"], capsys
    )
    assert code == 0
    assert rf_eq(RatFunc.parse(out.strip()), RatFunc.parse("q / (q^3 + 2 * q^2 + 2 * q + 1)"))


def test_compute_formats(capsys):
    code, out, _ = run(
        ["compute", "--family", "carlitz-number", "--n", "1", "--format", "json"], capsys
    )
    assert json.loads(out) == {"num": [[0, 0, 0, "-1"]], "den": [[1, 0, 0, "1"], [0, 0, 0, "1"]]}
    code, out, _ = run(
        ["--format", "latex", "compute", "--family", "carlitz-number", "--n", "2"], capsys
    )
    assert out.strip() == r"\frac{q}{[3]_q [2]_q}"


def test_compute_pole_exit3(capsys):
    code, _, err = run(
        ["compute", "--family", "carlitz-number", "--n", "1", "--at", "q=-1"], capsys
    )
    assert code == 3
    assert "pole" in err


def test_usage_errors(capsys):
    assert run(["compute", "--family", "order-r", "--n", "1"], capsys)[0] == 2
    assert run(["compute", "--family", "degenerate", "--n", "1", "--at", "x=1"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--family", "nope", "--n", "1"])
    assert exc.value.code == 2


def test_table_golden(tmp_path, capsys):
    for name, family, max_n in [
        ("table_carlitz_number_3.json", "carlitz-number", "3"),
        ("table_degenerate_2.json", "degenerate", "2"),
    ]:
        out = tmp_path / name
        code, _, _ = run(["table", "--family", family, "--max-n", max_n, "--out", str(out)], capsys)
        assert code == 0
        assert out.read_bytes() == (FIXTURES / name).read_bytes()


def test_golden_values_against_sympy():
    entries = json.loads((FIXTURES / "table_carlitz_number_3.json").read_text())
    assert entries[0]["value"] == "1"
    ref = so.carlitz_numbers(3)
    for entry in entries:
        assert so.same(RatFunc.parse(entry["value"]), ref[entry["n"]])

    # degenerate: s1 transform of the closed form, rebuilt in sympy
    def closed(n):
        return sum(
            sp.binomial(n, j) * (-1) ** j * so.Qx**j * (j + 1) * (1 - so.q) / (1 - so.q ** (j + 1))
            for j in range(n + 1)
        ) / (1 - so.q) ** n

    entries = json.loads((FIXTURES / "table_degenerate_2.json").read_text())
    for entry in entries:
        n = entry["n"]
        expr = sum(
            stirling(n, l, kind=1, signed=True) * so.lam ** (n - l) * closed(l) for l in range(n + 1)
        )
        assert so.same(RatFunc.parse(entry["value"]), expr)


def test_table_bad_args(tmp_path, capsys):
    assert run(["table", "--family", "carlitz-number", "--max-n", "-1"], capsys)[0] == 2
    bad = tmp_path / "missing" / "t.json"
    assert run(["table", "--family", "carlitz-number", "--max-n", "1", "--out", str(bad)], capsys)[0] == 2


def test_verify_single(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "--identity", "T4", "--max-n", "8", "--out", str(out)], capsys)
    assert code == 0
    (report,) = json.loads(out.read_text())
    assert report["status"] == "pass" and report["params"] == {"n": 8}
    code, _, _ = run(["verify", "--identity", "T8", "--max-n", "4", "--m", "2"], capsys)
    assert code == 0


def test_verify_expected_failure_exit_codes(capsys):
    # alone, the printed variant fails as expected: expectations met
    assert run(["verify", "--identity", "T9-paper-variant", "--max-n", "2"], capsys)[0] == 0
    assert run(["verify", "--identity", "T99"], capsys)[0] == 2
    assert run(["verify", "--identity", "T8", "--max-n", "3", "--m", "9"], capsys)[0] == 3
    # fresh process: memoized values from other tests would bypass the budget
    proc = subprocess.run(
        [sys.executable, "-m", "qbern", "verify", "--identity", "T8", "--max-n", "3",
         "--budget-terms", "10"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert json.loads(proc.stdout)[0]["status"] == "error"


def test_verify_failure_exit1(monkeypatch, capsys):
    from qbern import verify

    real = verify.verify_identity

    def broken(identity_id, *a, **kw):
        rep = real(identity_id, *a, **kw)
        rep.status = "fail"
        return rep

    monkeypatch.setattr(verify, "verify_identity", broken)
    assert run(["verify", "--identity", "EQ23", "--max-j", "2"], capsys)[0] == 1


def test_padic_command(capsys):
    code, out, _ = run(["padic", "--p", "3", "--precision", "15", "--levels", "2,4,6", "--n", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert list(data) == ["n", "r", "p", "K", "lambda", "x", "levels", "nondecreasing", "exact"]
    vals = [lv["valuation"] for lv in data["levels"]]
    assert vals == sorted(vals) and data["nondecreasing"]

    code, out, _ = run(["padic", "--p", "3", "--precision", "15", "--levels", "2", "--n", "0"], capsys)
    assert json.loads(out)["exact"] is True

    code, out, _ = run(["padic", "--levels", "2,3", "--n", "1", "--r", "2"], capsys)
    assert code == 0 and json.loads(out)["r"] == 2


def test_padic_errors(capsys):
    assert run(["padic", "--p", "4", "--n", "1"], capsys)[0] == 2
    assert run(["padic", "--p", "3", "--precision", "5", "--levels", "2,6", "--n", "1"], capsys)[0] == 3
    assert run(["padic", "--n", "1", "--lambda", "1/3"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qbern", "compute", "--family", "carlitz-number", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-1 / (q + 1)"
