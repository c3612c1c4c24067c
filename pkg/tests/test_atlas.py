import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import to_sympy
from isochron.arith import QQ, rational
from isochron.atlas import (
    CONDITION_IDS,
    FORMS,
    MAX_CENTERS,
    QuadraticSurd,
    analyse_line_case,
    canonical_form,
    cartesian_to_polar,
    coexistence_analysis,
    condition,
    condition_values,
    e3_as_condition4,
    polar_to_cartesian,
    reduce_to_canonical,
    sample_condition,
    same_polar_data,
    swap_line_params,
    sys3_2_derived,
    sys3_2_rational,
    trace_and_determinant,
    real_field,
)

rat = st.builds(rational, st.integers(-9, 9), st.integers(1, 5))
nonzero = rat.filter(bool)


@pytest.mark.parametrize("cid", CONDITION_IDS)
def test_parametrization_satisfies_generators(cid):
    assert condition(cid).generators_vanish()


def test_sampling_is_seeded():
    assert sample_condition("4", 7) == sample_condition("4", 7)
    assert sample_condition("4", 7) != sample_condition("4", 8)
    assert sample_condition("l", 0) == sample_condition("L", 0)


def test_condition_values_example():
    v = condition_values("2", {"a20": 1, "b20": 1})
    want = {"a20": 1, "a11": -2, "a02": 0, "b20": 1, "b11": 4, "r20": 1, "r11": -1, "r02": 0}
    assert {k: int(v[k].re) for k in want} == want and all(not v[k].im for k in want)


def test_unknown_condition():
    with pytest.raises(KeyError):
        condition("7")


@pytest.mark.parametrize("fid", sorted(FORMS))
def test_polar_forms_roundtrip(fid):
    f = canonical_form(fid)
    assert same_polar_data(f, cartesian_to_polar(polar_to_cartesian(f), fid))


def test_polar_to_cartesian_against_sympy():
    # dr, dtheta of form (e) recomputed from the Cartesian field
    s = polar_to_cartesian(canonical_form("e"))
    r, t = sympy.symbols("r t", positive=True)
    k = sympy.symbols("k1:6")
    syms = {"x": r * sympy.cos(t), "y": r * sympy.sin(t), **{f"k{i + 1}": k[i] for i in range(5)}}
    P, Q = to_sympy(s.P, syms), to_sympy(s.Q, syms)
    rdot = sympy.simplify((syms["x"] * P + syms["y"] * Q) / r)
    tdot = sympy.simplify((syms["x"] * Q - syms["y"] * P) / r**2)
    want_r = r**2 * (k[0] * sympy.cos(t) + k[1] * sympy.sin(t)) + r**3 * (k[2] + k[3] * sympy.cos(2 * t) + k[4] * sympy.sin(2 * t))
    assert sympy.simplify(rdot - want_r) == 0
    assert sympy.simplify(tdot - 1) == 0


def test_form_c_has_sine_in_angular_part():
    s = polar_to_cartesian(canonical_form("c", {"k1": 1, "k2": 0, "k3": 0}))
    r, t = sympy.symbols("r t", positive=True)
    P, Q = (to_sympy(p, {"x": r * sympy.cos(t), "y": r * sympy.sin(t)}) for p in (s.P, s.Q))
    tdot = sympy.simplify((r * sympy.cos(t) * Q - r * sympy.sin(t) * P) / r**2)
    assert sympy.simplify(tdot - (1 + r * sympy.sin(t))) == 0


def test_reduction_examples():
    assert reduce_to_canonical("2", {"a20": rational(4, 3), "b20": 1}).form.k == {"k1": 1}
    r = reduce_to_canonical("4", {"a20": 2, "b20": 3, "r11": 5})
    assert r.matches and r.form.k == {"k1": 3, "k2": -2, "k3": rational(-5, 2)}
    r = reduce_to_canonical("L", {"a20": 1, "b20": 0, "r20": 0, "r11": 0})
    assert r.matches and r.form.k == {"k1": 1, "k2": 0, "k3": 0}


@given(nonzero, nonzero, rat, rat)
@settings(max_examples=25, deadline=None)
def test_line_reduction_is_exact(a20, b20, r20, r11):
    assert reduce_to_canonical("L", {"a20": a20, "b20": b20, "r20": r20, "r11": r11}).matches


@given(nonzero, nonzero, rat)
@settings(max_examples=20, deadline=None)
def test_reductions_2_3_4_are_exact(a20, b20, r11):
    assert reduce_to_canonical("2", {"a20": a20, "b20": b20}).matches
    assert reduce_to_canonical("3", {"a20": a20, "b20": b20}).matches
    assert reduce_to_canonical("4", {"a20": a20, "b20": b20, "r11": r11}).matches


def test_e3_is_condition_4():
    assert e3_as_condition4()


@given(rat, rat, st.builds(rational, st.integers(1, 20), st.integers(1, 5)))
@settings(max_examples=100, deadline=None)
def test_quadratic_surd_sign(a, b, d):
    s = QuadraticSurd(a, b, d)
    exact = a * a - b * b * d
    v = float(s)
    if abs(v) > 1e-9:
        assert s.sign() == (1 if v > 0 else -1)
    if exact == 0 and a * b <= 0:
        assert s.sign() == 0


@given(rat, rat, rat, rat)
@settings(max_examples=20, deadline=None)
def test_swap_is_an_involution(a20, b20, r20, r11):
    p = {"a20": a20, "b20": b20, "r20": r20, "r11": r11}
    assert swap_line_params(swap_line_params(p)) == p


def _numeric_line_centers(p):
    """Independent oracle: solve P = Q = T = 0 away from the origin with sympy."""
    x, y = sympy.symbols("x y")
    a20, b20, r20, r11 = (sympy.Rational(str(p[k])) for k in ("a20", "b20", "r20", "r11"))
    P = -y + a20 * x**2 - 2 * b20 * x * y - a20 * y**2 + x * (r20 * x**2 + r11 * x * y - r20 * y**2)
    Q = x + b20 * x**2 + 2 * a20 * x * y - b20 * y**2 + y * (r20 * x**2 + r11 * x * y - r20 * y**2)
    T = sympy.diff(P, x) + sympy.diff(Q, y)
    D = sympy.diff(P, x) * sympy.diff(Q, y) - sympy.diff(P, y) * sympy.diff(Q, x)
    line = a20 * y + b20 * x + 1
    dets = []
    for sol in sympy.solve([line, P, Q], [x, y], dict=True):
        xv, yv = complex(sol[x]), complex(sol[y])
        if abs(xv.imag) > 1e-9 or abs(yv.imag) > 1e-9:
            continue
        if abs(complex(T.subs(sol))) < 1e-9:
            dets.append(float(sympy.re(D.subs(sol))))
    return dets


@pytest.mark.parametrize("seed", range(4))
def test_line_case_product_against_numeric_equilibria(seed):
    for k in range(50):
        p = sample_condition("L", 100 * seed + k)
        if not p["b20"]:
            continue
        out = analyse_line_case(p)
        if out.get("branch") == "d0 > 0":
            break
    dets = _numeric_line_centers(p)
    assert len(dets) == 2
    assert math.isclose(dets[0] * dets[1], float(out["product"]), rel_tol=1e-6, abs_tol=1e-9)
    assert sorted(dets) == pytest.approx(sorted([float(out["D_plus"]), float(out["D_minus"])]), rel=1e-6)


def test_case2_saddle_and_bounds():
    rep = coexistence_analysis("2", {"a20": 1, "b20": 2})
    assert rep.details["D_A"] == rational(-3, 4)
    assert rep.center_count == 1 and rep.within_bound
    assert MAX_CENTERS == {"L": 2, "2": 1, "3": 2, "4": 2}


def test_case4_with_a20_zero():
    rep = coexistence_analysis("4", {"a20": 0, "b20": 2, "r11": 3})
    assert rep.details["D_A"] == rational(3, 4) + 1


def test_sys3_2_derivation():
    for b11, b20 in ((3, 2), (rational(-1, 2), 5)):
        d = sys3_2_derived(b11, b20)
        t = sys3_2_rational().substitute({"b11": b11, "b20": b20}, params=())
        assert d.P == d.P.ring.convert(t.P) and d.Q == d.Q.ring.convert(t.Q)


def test_trace_and_determinant():
    from isochron.normal_form import PlanarSystem

    s = PlanarSystem.from_strings("-y + x^2", "x + x*y")
    P, Q = real_field(s)
    T, D = trace_and_determinant(P, Q)
    assert str(T) == "3*x" and D.evaluate({"x": 0, "y": 0}) == 1
