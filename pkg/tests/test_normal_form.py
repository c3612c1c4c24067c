import pytest
from hypothesis import given, settings, strategies as st

from isochron.arith import rational
from isochron.normal_form import (
    ObstructionError,
    PlanarSystem,
    SystemFileError,
    SystemShapeError,
    complexify,
    focus_quantities,
    linearizability_quantities,
    linearization_residual,
    linearizing_series,
    read_system,
    realify,
    render_system,
)
from isochron.poly import PolyRing

# Loud's isochronous quadratic centers x' = -y + x*y, y' = x + D*x^2 + F*y^2
LOUD = [("0", "1"), ("-1/2", "2"), ("0", "1/4"), ("-1/2", "1/2")]


def loud(D, F):
    return PlanarSystem.from_strings("-y + x*y", f"x + {D}*x^2 + {F}*y^2")


def test_linear_system_has_no_obstructions():
    s = PlanarSystem.from_strings("-y", "x")
    assert all(p.vanishes() for p in linearizability_quantities(s, 4))
    assert all(not g.g for g in focus_quantities(s, 4))


@pytest.mark.parametrize("D,F", LOUD)
def test_loud_isochronous_centers(D, F):
    s = loud(D, F)
    assert all(p.vanishes() for p in linearizability_quantities(s, 4))
    series = linearizing_series(s, 9)
    rz, rw = linearization_residual(s, series)
    assert not rz and not rw


def test_non_isochronous_center():
    # a reversible center: focus quantities vanish, I1 does not
    s = PlanarSystem.from_strings("-y", "x + x^2")
    assert all(not g.g for g in focus_quantities(s, 3))
    q = linearizability_quantities(s, 1)[0]
    assert not q.vanishes()
    with pytest.raises(ObstructionError):
        linearizing_series(s, 5)
    assert not linearizability_quantities(loud("1", "1"), 1)[0].vanishes()


def test_first_focus_quantity_of_weak_focus():
    # x' = -y + k*x^3, y' = x: the first Lyapunov quantity is proportional to k
    s = PlanarSystem.from_strings("-y + k*x^3", "x", ["k"])
    g = focus_quantities(s, 1)[0]
    # averaging r' = k r^3 cos^4 gives 3/8 k r^3: a positive multiple of k
    c = g.lyapunov.evaluate({"k": rational(1)})
    assert c > 0 and g.lyapunov == g.lyapunov.ring.gen("k") * c


def test_real_split_of_real_system():
    s = PlanarSystem.from_strings("-y + a*x^2", "x + b*y^2", ["a", "b"])
    q = linearizability_quantities(s, 1)[0]
    re_i, im_i, re_j, im_j = q.real_split()
    # for a real system J_k = -conj(I_k)
    assert re_i == -re_j and im_i == im_j


coeff = st.builds(rational, st.integers(-6, 6), st.integers(1, 3))


@given(st.lists(coeff, min_size=10, max_size=10))
@settings(max_examples=25, deadline=None)
def test_complexify_realify_roundtrip(cs):
    mons = ["x^2", "x*y", "y^2", "x^3", "x^2*y"]
    dx = " + ".join(f"({c})*{m}" for c, m in zip(cs[:5], mons))
    dy = " + ".join(f"({c})*{m}" for c, m in zip(cs[5:], mons))
    s = PlanarSystem.from_strings("-y + " + dx, "x + " + dy)
    back = realify(complexify(s))
    ring = back.P.ring
    assert back.P == ring.convert(s.P) and back.Q == ring.convert(s.Q)


def test_system_file_roundtrip_and_errors():
    text = "var u v\nparam a\ndu = -v + a*u^2\ndv = u\n"
    s = read_system(text)
    assert s.variables == ("u", "v") and s.params == ("a",)
    assert read_system(render_system(s)).P == s.P
    with pytest.raises(SystemFileError):
        read_system("dx = -y\n")
    with pytest.raises(SystemFileError) as err:
        read_system("dx = -y + \ndy = x\n")
    assert err.value.line == 1
    with pytest.raises((SystemFileError, SystemShapeError)):
        read_system("dx = y\ndy = x\n")


def test_quantities_need_positive_count():
    with pytest.raises(ValueError):
        linearizability_quantities(PlanarSystem.from_strings("-y", "x"), 0)
