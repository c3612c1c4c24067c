import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from isochron.atlas import canonical_form, polar_to_cartesian
from isochron.dynamics import (
    INCONCLUSIVE,
    ISOCHRONOUS,
    NON_ISOCHRONOUS,
    STABLE_FOCUS,
    UNSTABLE_FOCUS,
    FiniteTimeEscape,
    NoReturnError,
    NotRealError,
    NumericSystem,
    classify,
    integrate,
    linear_system,
    period_scan,
    return_time_and_map,
    verdict_is_stable,
)
from isochron.normal_form import PlanarSystem

TWO_PI = 2 * math.pi


def polar_return(k, r0):
    """Oracle: integrate dr/dtheta = r'/theta' of form (e) over one turn."""
    k1, k2, k3, k4, k5 = k

    def rhs(t, r):
        rr = r[0]
        dr = rr**2 * (k1 * math.cos(t) + k2 * math.sin(t)) + rr**3 * (k3 + k4 * math.cos(2 * t) + k5 * math.sin(2 * t))
        return [dr]  # theta' = 1 for form (e)

    sol = solve_ivp(rhs, (0, TWO_PI), [r0], method="DOP853", rtol=1e-12, atol=1e-14)
    return sol.y[0, -1]


def test_linear_rotation():
    L = linear_system()
    end = integrate(L, [1.0, 0.0], math.pi / 2).end
    assert end == pytest.approx([0.0, 1.0], abs=1e-9)
    T, r1 = return_time_and_map(L, 0.3)
    assert abs(T - TWO_PI) < 1e-9 and abs(r1 - 0.3) < 1e-9


@pytest.mark.parametrize("k", [(1, 1, 0, 1, 1), (0, 0, 0.1, 0, 0), (1, -1, 0, 0.5, 0)])
def test_return_map_matches_polar_oracle(k):
    names = ("k1", "k2", "k3", "k4", "k5")
    s = polar_to_cartesian(canonical_form("e", {n: Fraction(v) for n, v in zip(names, k)}))
    N = NumericSystem.from_system(s)
    for r0 in (0.02, 0.1):
        T, r1 = return_time_and_map(N, r0)
        assert abs(T - TWO_PI) < 1e-8  # theta' = 1 in form (e)
        assert r1 == pytest.approx(polar_return(k, r0), rel=1e-8, abs=1e-12)


def test_e2_is_a_stable_focus_when_eta2_positive():
    s = polar_to_cartesian(canonical_form("e", {"k1": 1, "k2": 1, "k3": 0, "k4": 1, "k5": 1}))
    rep = period_scan(NumericSystem.from_system(s), [0.02, 0.05, 0.1])
    assert rep.verdict == STABLE_FOCUS
    assert polar_return((1, 1, 0, 1, 1), 0.05) < 0.05


def test_non_isochronous_center():
    H = NumericSystem.from_strings("-y", "x + x^2")
    rep = period_scan(H, [0.05, 0.1, 0.2])
    assert rep.verdict == NON_ISOCHRONOUS
    assert max(rep.times) - min(rep.times) > 1e-4
    # the period grows with the amplitude for this system
    assert rep.times == sorted(rep.times)


def test_classify_rules():
    r = [0.1, 0.2]
    assert classify(r, [TWO_PI, TWO_PI], r) == ISOCHRONOUS
    assert classify(r, [TWO_PI, 6.4], r) == NON_ISOCHRONOUS
    assert classify(r, [TWO_PI] * 2, [0.11, 0.22]) == UNSTABLE_FOCUS
    assert classify(r, [TWO_PI] * 2, [0.09, 0.18]) == STABLE_FOCUS
    assert classify(r, [TWO_PI] * 2, [0.09, 0.22]) == INCONCLUSIVE


@given(st.floats(0.01, 2.0), st.floats(0.1, 3.0))
@settings(max_examples=15, deadline=None)
def test_scaled_linear_center_is_isochronous(r0, c):
    # x' = -y, y' = x is invariant under scaling; any radius returns at 2 pi
    T, r1 = return_time_and_map(linear_system(), r0 * c)
    assert abs(T - TWO_PI) < 1e-8 and abs(r1 - r0 * c) < 1e-8 * max(1, r0 * c)


def test_report_formats():
    rep = period_scan(linear_system(), [0.1, 0.2])
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["r0", "T", "r1", "|T-2pi|", "|r1-r0|"]
    assert float(rows[1][1]) == pytest.approx(TWO_PI)
    data = json.loads(rep.to_json())
    assert data["verdict"] == ISOCHRONOUS and len(data["period_errors"]) == 2


def test_escape_and_no_return():
    blow = NumericSystem.from_strings("-y + x^3", "x")
    with pytest.raises(FiniteTimeEscape):
        return_time_and_map(blow, 5.0)
    stuck = NumericSystem.from_strings("-y", "x - x^2")  # equilibrium at (1, 0)
    with pytest.raises(NoReturnError):
        return_time_and_map(stuck, 1.0, t_max=20.0)


def test_input_validation():
    with pytest.raises(ValueError):
        NumericSystem(np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        period_scan(linear_system(), [0.2, 0.1])
    with pytest.raises(NotRealError):
        NumericSystem.from_system(PlanarSystem.from_strings("-y + I*x^2", "x"))
    with pytest.raises(KeyError):
        NumericSystem.from_system(PlanarSystem.from_strings("-y + a*x^2", "x", ["a"]))


def test_verdict_stability_and_workers():
    H = NumericSystem.from_strings("-y", "x + x^2")
    assert verdict_is_stable(H, [0.05, 0.1])
    a = period_scan(H, [0.05, 0.1, 0.15], workers=2)
    b = period_scan(H, [0.05, 0.1, 0.15])
    assert a.times == pytest.approx(b.times, abs=1e-12)
