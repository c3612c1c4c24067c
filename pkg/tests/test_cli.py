import csv
import io
import json
import math

import pytest

from conftest import cli_json, run_cli

HARD = "ring: x y z over Q\nx^2*y - z + 1\ny^2*z - x\nz^2*x - y - 2\n"


@pytest.fixture
def hard(tmp_path):
    p = tmp_path / "hard.ideal"
    p.write_text(HARD)
    return p


def _err(proc):
    return json.loads(proc.stderr.strip().splitlines()[-1])


def test_lift_value():
    assert run_cli("lift", "--value", 8001, check=0).stdout.strip() == "1/4"
    assert cli_json("lift", "--value", 8001)["rational"] == "1/4"


def test_lift_unreconstructible_is_false():
    run_cli("lift", "--value", 3, "--modulus", 7, check=1)


def test_member_true_and_false(hard):
    run_cli("member", "--ideal", hard, "--poly", "x^2*y - z + 1", check=0)
    proc = run_cli("member", "--ideal", hard, "--poly", "x", check=1)
    assert proc.stdout.strip() == "false"


def test_radmember(tmp_path):
    p = tmp_path / "sq.ideal"
    p.write_text("ring: x y over Q\nx^2\ny^3\n")
    run_cli("radmember", "--ideal", p, "--poly", "x + y", check=0)
    run_cli("radmember", "--ideal", p, "--poly", "x + 1", check=1)


def test_bad_syntax_is_usage(hard):
    proc = run_cli("member", "--ideal", hard, "--poly", "x ** + 2", check=2)
    assert _err(proc)["exit_code"] == 2


def test_missing_file_is_usage():
    proc = run_cli("gb", "--ideal", "no/such.ideal", check=2)
    assert _err(proc)["error"] == "input"


def test_unknown_command_is_usage():
    proc = run_cli("frobnicate", check=2)
    assert _err(proc)["error"] == "usage"


def test_budget_is_resource_limit(hard):
    proc = run_cli("gb", "--ideal", hard, "--budget", 1, check=3)
    assert _err(proc)["error"] == "resource-limit"
    run_cli("gb", "--ideal", hard, check=0)


@pytest.mark.parametrize("before", [True, False])
def test_format_either_side(before, hard):
    args = ("gb", "--ideal", hard)
    args = ("--format", "json", *args) if before else (*args, "--format", "json")
    data = json.loads(run_cli(*args, check=0).stdout)
    assert isinstance(data, dict)


def test_scan_linear_csv(inputs):
    proc = run_cli("scan", "--system", inputs / "linear.sys", "--radii", "0.1,0.2", check=0)
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    assert [float(r["r0"]) for r in rows] == [0.1, 0.2]
    for r in rows:
        assert math.isclose(float(r["T"]), 2 * math.pi, abs_tol=1e-8)
        assert abs(float(r["r1"]) - float(r["r0"])) < 1e-8
    assert "isochronous center" in proc.stderr


def test_scan_expect_mismatch(inputs):
    run_cli("scan", "--system", inputs / "hamiltonian.sys", "--radii", "0.1,0.2", "--expect", "center", check=0)
    run_cli("scan", "--system", inputs / "hamiltonian.sys", "--radii", "0.1,0.2", "--expect", "isochronous", check=1)


def test_scan_bad_radii(inputs):
    run_cli("scan", "--system", inputs / "linear.sys", "--radii", "0.2,0.1", check=2)


def test_quantities_json(inputs):
    data = cli_json("quantities", "--system", inputs / "hamiltonian.sys", "--count", 2)
    assert [d["k"] for d in data] == [1, 2]
    assert set(data[0]) >= {"I_re", "I_im", "J_re", "J_im"}


def test_quantities_linear_vanish(inputs):
    data = cli_json("quantities", "--system", inputs / "linear.sys", "--count", 2)
    assert all(d[key] == "0" for d in data for key in ("I_re", "I_im", "J_re", "J_im"))


def test_focus_text(inputs):
    out = run_cli("focus", "--system", inputs / "e2.sys", "--count", 1, check=0).stdout
    assert "k=1" in out
