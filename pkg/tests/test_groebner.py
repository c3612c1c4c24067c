import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import to_sympy
from isochron.arith import GF, rational
from isochron.groebner import (
    Budget,
    Ideal,
    ReconstructionError,
    ResourceLimitError,
    buchberger,
    check_lucky_prime,
    eliminate,
    ideal_equal,
    ideal_membership,
    intersect,
    is_groebner,
    lift_basis,
    modular_image,
    normal_form,
    quotient,
    radical_membership,
    read_ideal,
)
from isochron.groebner.io import IdealFileError
from isochron.poly import PolyRing, parse

R = PolyRing(("x", "y", "z"))
X, Y, Z = sympy.symbols("x y z")
SYMS = {"x": X, "y": Y, "z": Z}


def P(text, ring=R):
    return parse(text, ring)


def monic_set(exprs, gens, order):
    out = set()
    for e in exprs:
        p = sympy.Poly(e, *gens)
        out.add(sympy.expand(e / p.coeffs(order=order)[0]))
    return out


def test_small_examples():
    assert buchberger(Ideal([P("x^2"), P("x - 1")])).is_unit()
    G = buchberger(Ideal([P("x*y"), P("x + y")]))
    assert set(map(str, G)) == {"x + y", "y^2"}
    assert ideal_equal(intersect(Ideal([P("x")]), Ideal([P("y")])), Ideal([P("x*y")]))
    assert ideal_equal(quotient(Ideal([P("x*y")]), Ideal([P("x")])), Ideal([P("y")]))
    assert radical_membership(P("x"), Ideal([P("x^2")]))
    assert not ideal_membership(P("x"), Ideal([P("x^2")]))


def test_cyclic4_matches_sympy():
    gens = ["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]
    G = buchberger(Ideal([P(g) for g in gens]))
    want = sympy.groebner([to_sympy(g, SYMS) for g in gens], X, Y, Z, order="grevlex")
    assert monic_set([to_sympy(g, SYMS) for g in G], (X, Y, Z), "grevlex") == monic_set(want.exprs, (X, Y, Z), "grevlex")


terms = st.tuples(st.integers(-5, 5), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
small_polys = st.lists(terms, min_size=1, max_size=3).map(
    lambda ts: sum((R.from_dict({(a, b, c): rational(n)}) for n, a, b, c in ts), R.zero)
)


@given(st.lists(small_polys, min_size=1, max_size=3), st.sampled_from(["lex", "degrevlex"]))
@settings(max_examples=40, deadline=None)
def test_reduced_basis_properties_and_sympy_oracle(gens, order):
    gens = [g for g in gens if g]
    if not gens:
        return
    G = buchberger(Ideal(gens), order=order)
    ring = G.ring
    assert all(G.contains(ring.convert(g)) for g in gens)
    assert is_groebner(list(G.basis)) if G.basis else True
    # reduced: monic, no term divisible by another leading monomial
    for i, g in enumerate(G):
        assert g.LC() == 1
        others = [h.leading_monomial() for j, h in enumerate(G) if j != i]
        assert not any(ring.mono_divides(L, T) for L in others for T in g.terms)
    name = {"lex": "lex", "degrevlex": "grevlex"}[order]
    want = sympy.groebner([to_sympy(g, SYMS) for g in gens], X, Y, Z, order=name)
    assert monic_set([to_sympy(g, SYMS) for g in G], (X, Y, Z), name) == monic_set(want.exprs, (X, Y, Z), name)


@given(st.lists(small_polys, min_size=1, max_size=2), small_polys, small_polys)
@settings(max_examples=30, deadline=None)
def test_membership_of_combinations(gens, a, b):
    gens = [g for g in gens if g]
    if not gens:
        return
    f = a * gens[0] + (b * gens[-1])
    assert ideal_membership(f, Ideal(gens))
    assert radical_membership(f * f, Ideal(gens))


def test_normal_form_is_unique_remainder():
    G = buchberger(Ideal([P("x^2 + y"), P("x*y - 1")]))
    f = P("x^3*y + x^2 + 5")
    r = normal_form(f, G)
    assert normal_form(r, G) == r
    assert G.contains(f - r)


def test_elimination():
    # twisted cubic: eliminate t from (t, t^2, t^3)
    ring = PolyRing(("t", "x", "y", "z"))
    I = Ideal([parse(s, ring) for s in ("x - t", "y - t^2", "z - t^3")])
    E = eliminate(I, "t")
    want = Ideal([P("y - x^2"), P("z - x^3")])
    assert ideal_equal(Ideal([R.convert(g) for g in E], R), want)


def test_quotient_by_ideal_and_saturation_step():
    I = Ideal([P("x^2*y"), P("x*y^2")])
    assert ideal_equal(quotient(I, Ideal([P("x"), P("y")])), Ideal([P("x*y")]))


def test_intersection_contains_products():
    I, J = Ideal([P("x - 1"), P("y")]), Ideal([P("x + 1"), P("z")])
    K = intersect(I, J)
    for f in I:
        for g in J:
            assert ideal_membership(f * g, K)
    assert not ideal_membership(P("x - 1"), K)


def test_budget_raises():
    gens = [P("x^2*y - z + 1"), P("y^2*z - x"), P("z^2*x - y - 2")]
    with pytest.raises(ResourceLimitError):
        buchberger(Ideal(gens), budget=Budget(max_pairs=2))
    assert len(buchberger(Ideal(gens), budget=Budget(max_pairs=100))) == 7


def test_modular_image_and_lift():
    I = Ideal([P("x - 1/4*y"), P("y^2 + 2/3*z")])
    img = modular_image(I, 32003)
    assert img.ring.domain == GF(32003)
    assert ideal_equal(lift_basis(img), I)
    assert check_lucky_prime(I, 32003)


def test_lift_fails_on_large_residue():
    ring = R.clone(domain=GF(32003))
    with pytest.raises(ReconstructionError):
        lift_basis(Ideal([parse("x + 127*y", ring)]))


def test_ideal_file_format():
    I = read_ideal("ring: x y over Fp(7)\norder: lex\nx^2 + 8*y  # comment\n\n")
    assert I.ring.domain == GF(7) and str(I.ring.order) == "lex"
    assert str(I.generators[0]) == "x^2 + y"
    with pytest.raises(IdealFileError):
        read_ideal("x + y\n")
    with pytest.raises(IdealFileError) as err:
        read_ideal("ring: x over Q\nx + q\n")
    assert err.value.line == 2
