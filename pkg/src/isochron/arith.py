"""Exact coefficient domains.

Three exact fields are provided:

* ``QQ``  -- arbitrary precision rationals (backed by ``gmpy2.mpq``),
* ``QQI`` -- Gaussian rationals ``a + b*I``,
* ``GF(p)`` -- prime fields for word sized primes.

Every domain object exposes the same small protocol (``zero``, ``one``,
``convert``, ``render``, ``is_field``) so that :mod:`isochron.poly` can be
parametrised by any of them.  Elements themselves use the ordinary Python
operators.
"""

from __future__ import annotations

import math
from numbers import Rational

import gmpy2
from gmpy2 import mpq, mpz


class DivisionByZero(ZeroDivisionError):
    """Inverse of zero requested in an exact domain."""


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def rational(n, d=1) -> mpq:
    if d == 0:
        raise DivisionByZero("zero denominator")
    return mpq(n, d)


def render_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_MPQ = type(mpq(0))
_MPZ = type(mpz(0))
_ZERO = mpq(0)


def _as_mpq(x) -> mpq:
    if isinstance(x, (int, _MPQ, _MPZ)):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a rational")


class RationalField:
    name = "Q"
    is_field = True
    characteristic = 0

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __call__(self, n, d=1):
        return rational(n, d)

    def convert(self, x):
        if isinstance(x, GaussianRational):
            if x.im:
                raise TypeError(f"{x} is not real")
            return x.re
        if isinstance(x, PrimeFieldElement):
            raise TypeError("cannot map a prime field element into Q")
        return _as_mpq(x)

    def render(self, c) -> str:
        return render_rational(c)

    def imaginary_unit(self):
        raise TypeError("Q has no imaginary unit")

    def to_complex(self, c) -> complex:
        return complex(float(c), 0.0)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GaussianRational:
    """An element ``re + im*I`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is _MPQ else _as_mpq(re)
        self.im = im if type(im) is _MPQ else _as_mpq(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, PrimeFieldElement):
            return NotImplemented
        try:
            return GaussianRational(_as_mpq(x), _ZERO)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b:
                return GaussianRational(a * c, a * d)
            if not d:
                return GaussianRational(a * c, b * c)
            return GaussianRational(a * c - b * d, a * d + b * c)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    conj = conjugate

    def inverse(self):
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of 0 in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussianRational(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({render_rational(self.re)}, {render_rational(self.im)})"

    def __str__(self):
        return QQI.render(self)


class GaussianField:
    name = "Qi"
    is_field = True
    characteristic = 0

    def __init__(self):
        self.zero = GaussianRational(0, 0)
        self.one = GaussianRational(1, 0)
        self.I = GaussianRational(0, 1)

    def __call__(self, re=0, im=0):
        return GaussianRational(re, im)

    def convert(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        if isinstance(x, PrimeFieldElement):
            raise TypeError("cannot map a prime field element into Q(i)")
        return GaussianRational(_as_mpq(x), _ZERO)

    def imaginary_unit(self):
        return self.I

    def render(self, c) -> str:
        re, im = c.re, c.im
        if not im:
            return render_rational(re)
        if im == 1:
            ims = "I"
        elif im == -1:
            ims = "-I"
        else:
            ims = f"{render_rational(im)}*I"
        if not re:
            return ims
        sign = "-" if im < 0 else "+"
        if im == 1 or im == -1:
            body = "I"
        else:
            body = f"{render_rational(abs(im))}*I"
        return f"{render_rational(re)}{sign}{body}"

    def to_complex(self, c) -> complex:
        return complex(c)

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("Qi")

    def __repr__(self):
        return "QQI"


QQI = GaussianField()


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------

class PrimeFieldElement:
    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = int(value) % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, (Rational, _MPQ)):
            q = _as_mpq(other)
            return int(q.numerator) * _inverse_mod(int(q.denominator), self.modulus)
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.modulus)

    def inverse(self):
        if not self.value:
            raise DivisionByZero(f"inverse of 0 mod {self.modulus}")
        return PrimeFieldElement(_inverse_mod(self.value, self.modulus), self.modulus)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return self * PrimeFieldElement(v, self.modulus).inverse()

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(v, self.modulus) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(pow(self.value, n, self.modulus), self.modulus)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.modulus == other.modulus and self.value == other.value
        v = self._coerce(other)
        if v is None:
            return False
        return self.value == v % self.modulus

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"

    __str__ = __repr__


def _inverse_mod(a: int, p: int) -> int:
    if a % p == 0:
        raise DivisionByZero(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


class PrimeField:
    is_field = True

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if p.bit_length() > 64:
            raise ValueError("modulus must fit in 64 bits")
        self.p = p
        self.characteristic = p
        self.name = f"Fp({p})"
        self.zero = PrimeFieldElement(0, p)
        self.one = PrimeFieldElement(1, p)

    def __call__(self, value):
        return self.convert(value)

    def convert(self, x):
        if isinstance(x, PrimeFieldElement):
            if x.modulus != self.p:
                raise ValueError("moduli differ")
            return x
        if isinstance(x, GaussianRational):
            if x.im:
                raise TypeError("cannot reduce a non-real Gaussian rational")
            x = x.re
        q = _as_mpq(x)
        den = int(q.denominator)
        if den % self.p == 0:
            raise BadPrimeError(self.p, f"{self.p} divides the denominator of {render_rational(q)}")
        return PrimeFieldElement(int(q.numerator) * _inverse_mod(den, self.p), self.p)

    def render(self, c) -> str:
        return str(c.value)

    def imaginary_unit(self):
        raise TypeError(f"{self.name} has no designated imaginary unit")

    def to_complex(self, c) -> complex:
        raise TypeError("prime field elements have no complex value")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def GF(p: int) -> PrimeField:
    return PrimeField(p)


class BadPrimeError(ValueError):
    def __init__(self, p, message=""):
        super().__init__(message or f"bad prime {p}")
        self.p = p


# ---------------------------------------------------------------------------
# modular -> rational lifting
# ---------------------------------------------------------------------------

def rational_reconstruct(residue, p: int | None = None):
    """Return the unique ``n/d`` with ``|n|, d <= sqrt(p/2)`` congruent to
    ``residue`` modulo ``p``, or ``None`` when no such fraction exists.

    ``residue`` is either a :class:`PrimeFieldElement` or an integer together
    with the modulus ``p``.
    """
    if isinstance(residue, PrimeFieldElement):
        p = residue.modulus
        a = residue.value
    else:
        if p is None:
            raise TypeError("modulus required for integer residues")
        a = int(residue) % p
    bound = math.isqrt(p // 2)
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return mpq(r1, s1)


# ---------------------------------------------------------------------------
# floating complex approximations
# ---------------------------------------------------------------------------

RESIDUAL_TOL = 1e-9


def finite_complex(z) -> complex:
    """Coerce to ``complex`` and refuse NaN or infinite parts."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ArithmeticError(f"non-finite complex value {z}")
    return z


def to_complex(c) -> complex:
    if isinstance(c, complex):
        return c
    if isinstance(c, GaussianRational):
        return complex(c)
    if isinstance(c, PrimeFieldElement):
        raise TypeError("prime field elements have no complex value")
    return complex(float(c))


class ComplexApproxField:
    """Floating complex numbers as a coefficient domain (numeric checks only)."""

    name = "C"
    is_field = True
    characteristic = 0

    def __init__(self):
        self.zero = 0j
        self.one = 1 + 0j
        self.I = 1j

    def convert(self, x) -> complex:
        if isinstance(x, PrimeFieldElement):
            raise TypeError("prime field elements have no complex value")
        return finite_complex(to_complex(x) if not isinstance(x, (int, float)) else x)

    def imaginary_unit(self):
        return self.I

    def render(self, c) -> str:
        c = complex(c)
        if not c.imag:
            return repr(c.real)
        if not c.real:
            return f"{c.imag!r}*I"
        sign = "-" if c.imag < 0 else "+"
        return f"{c.real!r}{sign}{abs(c.imag)!r}*I"

    def to_complex(self, c) -> complex:
        return complex(c)

    def __eq__(self, other):
        return isinstance(other, ComplexApproxField)

    def __hash__(self):
        return hash("C")

    def __repr__(self):
        return "CC"


CC = ComplexApproxField()


def _rational_sqrt(q):
    q = _as_mpq(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = gmpy2.isqrt(n), gmpy2.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def exact_sqrt(x):
    """Principal square root of a Gaussian rational when it lies in Q(i), else ``None``.

    The principal branch has positive real part, or zero real part and
    non-negative imaginary part (the convention of :func:`cmath.sqrt`).
    """
    g = QQI.convert(x)
    a, b = g.re, g.im
    if not b:
        if a >= 0:
            r = _rational_sqrt(a)
            return None if r is None else GaussianRational(r, 0)
        r = _rational_sqrt(-a)
        return None if r is None else GaussianRational(0, r)
    m = _rational_sqrt(a * a + b * b)
    if m is None:
        return None
    re = _rational_sqrt((a + m) / 2)
    if re is None or not re:
        return None
    return GaussianRational(re, b / (2 * re))
