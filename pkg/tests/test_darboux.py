import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import to_sympy
from isochron.arith import QQI, rational
from isochron.atlas import condition
from isochron.darboux import (
    ExpansionError,
    NotAFactor,
    RecipeFileError,
    cofactor_of,
    discover_factors,
    is_darboux_factor,
    read_recipe,
    same_up_to_scalar,
    series_inverse,
    series_linearization_check,
    series_power,
    verify_recipe,
)
from isochron.normal_form import ComplexSystem, PlanarSystem, complexify
from isochron.poly import PolyRing, parse

ZW = PolyRing(("z", "w"), QQI)
LINEAR = ComplexSystem(ZW.zero, ZW.zero)


def case2():
    return complexify(condition("2").system())


def test_linear_cofactors():
    assert cofactor_of(LINEAR, "z") == ZW.one
    assert cofactor_of(LINEAR, "w") == -ZW.one
    assert cofactor_of(LINEAR, "z*w") == ZW.zero
    with pytest.raises(NotAFactor):
        cofactor_of(LINEAR, "z + w")
    assert not is_darboux_factor(LINEAR, "1 + z")


def test_cofactor_identity_with_parameters():
    cs = case2()
    f = cs.ring.convert(parse("1 + b20/2*z + b20/2*w", cs.ring))
    K = cofactor_of(cs, f)
    lhs = f.diff(0) * cs.zdot + f.diff(1) * cs.wdot
    assert lhs == K * f


def test_symbolic_recipe_and_sums():
    rep = verify_recipe(case2(), condition("2").load_recipe())
    assert rep.passed
    sums = rep.reports[0].sums
    assert sums["zside"] == 1 and sums["wside"] == -1


def test_broken_recipe_is_rejected():
    bad = read_recipe(
        "param a20 b20\n"
        "factor l1 = z\n"
        "factor l3 = 1 + b20/2*z + b20/2*w\n"
        'zside = l1 l3^"1"\n'
        "wside = l1\n"
    )
    assert not verify_recipe(case2(), bad).passed


@pytest.mark.parametrize(
    "text",
    [
        "factor l1 = z\n",  # no z-side
        "factor l1 = z\nzside = l2\nwside = l1\n",  # undefined factor
        "factor = z\n",
        "factor l1 = z\nfactor l1 = w\nzside = l1\nwside = l1\n",
        "factor l1 = z\nzside = l1\n",  # neither w-side nor integral
        "bogus = 1\n",
    ],
)
def test_recipe_format_errors(text):
    with pytest.raises(RecipeFileError):
        read_recipe(text)


def test_branches_only_over_square_roots():
    r = condition("L").load_recipe()
    assert r.branched == (False, True, True, True, True)


@given(st.integers(-3, 3), st.integers(1, 3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
@settings(max_examples=30, deadline=None)
def test_series_power_matches_sympy(n, d, cs):
    alpha = rational(n, d)
    f = parse(f"1 + ({cs[0]})*z + ({cs[1]})*w + ({cs[2]})*z*w", ZW)
    N = 5
    z, w, t = sympy.symbols("z w t")
    expr = (1 + cs[0] * z + cs[1] * w + cs[2] * z * w) ** sympy.Rational(n, d)
    # total degree truncation through the scaling z -> t z, w -> t w
    ser = sympy.series(expr.subs({z: t * z, w: t * w}), t, 0, N + 1).removeO().subs(t, 1)
    assert to_sympy(series_power(f, alpha, N)) == sympy.expand(ser)


def test_series_inverse_and_bad_constant():
    f = parse("1 + z - 2*w", ZW)
    assert ((series_inverse(f, 6) * f).truncate(6)) == ZW.one
    with pytest.raises(ExpansionError):
        series_power(parse("2 + z", ZW), rational(1, 2), 3)


def test_series_check_exact_case4():
    cs = complexify(condition("4").system())
    sc = series_linearization_check(cs, condition("4").load_recipe(), {"a20": 3, "b20": 1, "r11": 1}, N=8)
    assert sc.passed and all(r.exact and r.z_residual == 0 and r.w_residual == 0 for r in sc.reports)


def test_discover_linear_and_case2():
    lin = PlanarSystem.from_strings("-y", "x")
    found = discover_factors(lin, 1)
    ring = found[0].f.ring
    assert any(same_up_to_scalar(d.f, ring.convert(parse("z", ZW))) for d in found)
    assert any(same_up_to_scalar(d.f, ring.convert(parse("w", ZW))) for d in found)
    s = condition("2").system().substitute({"a20": 1, "b20": 1}, params=())
    found = discover_factors(s, 1)
    want = [parse("1 + 1/2*z + 1/2*w", ZW), parse("1 - I/2*(4 + I)*z + 1/2*(1 + 4*I)*w", ZW)]
    for g in want:
        assert any(same_up_to_scalar(d.f, d.f.ring.convert(g)) for d in found)
    for d in found:
        cs = complexify(s)
        assert cofactor_of(cs, cs.ring.convert(d.f)) == cs.ring.convert(d.K)
