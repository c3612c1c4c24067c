import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isochron.arith import (
    GF,
    QQI,
    GaussianRational,
    exact_sqrt,
    rational,
    rational_reconstruct,
    render_rational,
)

small = st.integers(-50, 50)
fractions = st.builds(Fraction, small, st.integers(1, 30))
gaussians = st.builds(lambda a, b: GaussianRational(rational(a), rational(b)), fractions, fractions)


def test_eight_thousand_and_one_is_a_quarter():
    assert rational_reconstruct(8001, 32003) == rational(1, 4)


def test_reconstruction_fails_without_small_fraction():
    # p = 7: bound 1, only 0, +-1 are reconstructible
    assert rational_reconstruct(3, 7) is None


@given(st.integers(-120, 120), st.integers(1, 120))
def test_reconstruction_roundtrip(n, d):
    p = 32003
    q = Fraction(n, d)
    residue = n * pow(d, -1, p) % p
    assert rational_reconstruct(residue, p) == q


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if a.norm():
        assert a * a.inverse() == QQI.convert(1)


@given(gaussians)
def test_exact_sqrt_of_square(a):
    r = exact_sqrt(a * a)
    assert r is not None and r * r == a * a
    # principal branch agrees with cmath
    want = cmath.sqrt(complex(float(a.re), float(a.im)) ** 2)
    assert abs(complex(float(r.re), float(r.im)) - want) < 1e-9


def test_exact_sqrt_rejects_irrational():
    assert exact_sqrt(rational(2)) is None
    assert exact_sqrt(QQI.convert(-4)) == GaussianRational(0, 2)


@given(st.integers(1, 10**6))
def test_prime_field_inverse(a):
    F = GF(32003)
    x = F.convert(a)
    if x.value:
        assert (x * x.inverse()).value == 1


def test_render_rational():
    assert render_rational(rational(-3, 6)) == "-1/2"
    assert render_rational(rational(4)) == "4"
