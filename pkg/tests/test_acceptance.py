"""One test per main result; each shells out to ``isochron reproduce``
and prints a single ``criterion N: PASS/FAIL`` line."""

import json
import time

import pytest

from conftest import CRITERIA, run_cli

LIMITS = {1: 60, 2: 600, 9: 1800, 10: 6 * 30}


def _run(n):
    t = time.perf_counter()
    proc = run_cli("--format", "json", "reproduce", n)
    elapsed = time.perf_counter() - t
    assert proc.returncode in (0, 1), proc.stderr
    data = json.loads(proc.stdout)
    return proc.returncode, data, elapsed


def _criterion(n, extra=lambda d: True):
    ok = False
    try:
        code, data, elapsed = _run(n)
        d = data["details"]
        ok = code == 0 and data["pass"] and elapsed < LIMITS.get(n, 600) and extra(d)
        assert ok, json.dumps(data, indent=1)[:4000]
    finally:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
        CRITERIA.append(line)
        print("\n" + line)


def test_first_pair():
    _criterion(1, lambda d: d["computed_in_reference"] and d["reference_in_computed"])


def test_second_pair():
    def extra(d):
        r = d["ratios"]
        return d["computed_in_reference"] and d["reference_in_computed"] and r["Re I2"] == "-5/16 * reference[0]" and r["Im I2"] == "-5/16 * reference[1]"

    _criterion(2, extra)


def test_vanishing():
    _criterion(3, lambda d: set(d["vanishing_k1_to_k4"]) == {"1", "2", "3", "4", "5", "L"} and all(len(v) == 4 for v in d["vanishing_k1_to_k4"].values()))


def test_darboux():
    def extra(d):
        exact = d["4 at a20=3, b20=1, r11=1"]
        return (
            all(d[c]["symbolic"] and d[c]["exact"] for c in "235")
            and all(d[c]["samples"] >= 20 and d[c]["passed"] == d[c]["samples"] and d[c]["max_residual"] < 1e-9 for c in "14")
            and exact["exact"]
            and all(s == {"zside": "1", "wside": "-1"} for s in exact["sums"])
        )

    _criterion(4, extra)


def test_series():
    _criterion(5, lambda d: len(d) == 6 and all(v["passed"] == v["samples"] == 5 and v["max_residual"] < 1e-9 for v in d.values()))


def test_focus_e2():
    def extra(d):
        from fractions import Fraction

        return Fraction(d["lambda1"]) != 0 and Fraction(d["lambda2"]) != 0

    _criterion(6, extra)


def test_equilibria():
    _criterion(7, lambda d: d["G1"] and d["G3"] and d["G4"] and d["D_A = -3*a20^2/b20^2"] and d["product negative"] == d["line samples with d0 > 0"] == 20)


def test_lifting():
    _criterion(8, lambda d: d["8001 mod 32003"] == "1/4" and d["G1 equals condition 1"] and d["G2 vanishes on case 5"])


def test_radical_membership():
    _criterion(9, lambda d: len(d["members"]) == 12 and all(d["members"].values()) and not any(d["controls (expected false)"].values()))


def test_dynamics():
    def extra(d):
        centers = all(d[c]["max |T-2pi|"] < 1e-6 and d[c]["max |r1-r0|"] < 1e-7 and d[c]["seconds"] < 30 for c in ("L", "2", "3", "4"))
        focus = d["e, k3 = 1/10"]
        ham = d["x' = -y, y' = x + x^2"]
        return centers and focus["r1 > r0"] and focus["max |T-2pi|"] < 1e-6 and ham["period spread"] > 1e-4

    _criterion(10, extra)


def test_coexistence():
    def extra(d):
        scans = d["condition 3 scans"]
        return all(d["shifted system quantities vanish (k <= 3)"]) and scans and all(s["center_count"] == 2 for s in scans) and all(c == 1 for c in d["condition 2 center counts"])

    _criterion(11, extra)


@pytest.mark.parametrize("key", ["first-pair", "coexistence"])
def test_checks_accept_names(key):
    run_cli("reproduce", key, check=0)
