"""Sparse multivariate polynomials.

A monomial is stored as one packed integer: exponent ``e_i`` lives in a
33-bit field (32 value bits plus a guard bit), so multiplying monomials is
integer addition and divisibility is a single subtraction-and-mask.  The
guard bits double as overflow detection for the 32-bit exponent bound.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from ..arith import QQ, GaussianRational, PrimeFieldElement
from .orders import DEGREVLEX, MonomialOrder

EXP_BITS = 32
WIDTH = EXP_BITS + 1
EXP_MASK = (1 << EXP_BITS) - 1
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class RingMismatch(TypeError):
    pass


class ExponentOverflow(OverflowError):
    pass


def _accumulate(acc: dict, terms: dict) -> None:
    """In-place ``acc += terms`` for term dictionaries."""
    for P, c in terms.items():
        v = acc.get(P)
        if v is None:
            acc[P] = c
        else:
            v = v + c
            if v:
                acc[P] = v
            else:
                del acc[P]


class PolyRing:
    """Polynomial ring ``domain[variables]`` with a fixed monomial order.

    ``domain`` may itself be a :class:`PolyRing`, giving e.g. ``Q(i)[a20,b20][z,w]``.
    """

    is_field = False

    def __init__(self, variables, domain=QQ, order=DEGREVLEX):
        if isinstance(variables, str):
            variables = [v for v in re.split(r"[\s,]+", variables) if v]
        variables = tuple(variables)
        for v in variables:
            if not _IDENT.match(v):
                raise ValueError(f"invalid variable name {v!r}")
            if v == "I":
                raise ValueError("'I' is reserved for the imaginary unit")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        if isinstance(domain, PolyRing) and set(domain.variables) & set(variables):
            raise ValueError("coefficient ring shares variables with the outer ring")
        self.variables = variables
        self.ngens = len(variables)
        self.domain = domain
        self.order = MonomialOrder.parse(order)
        self.index = {v: i for i, v in enumerate(variables)}
        self._shifts = [WIDTH * i for i in range(self.ngens)]
        self.guard = sum(1 << (s + EXP_BITS) for s in self._shifts)
        self._weights = self.order.key_function(self.ngens)
        self._drl_weights = DEGREVLEX.key_function(self.ngens)
        self._key_cache: dict[int, int] = {}
        self._drl_cache: dict[int, int] = {}
        self.zero = Poly(self, {})
        one = domain.one
        self.one = Poly(self, {0: one})
        self.gens = tuple(Poly(self, {1 << s: one}) for s in self._shifts)
        self.name = f"{domain.name}[{','.join(variables)}]"

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.domain == other.domain
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.domain, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.domain!r}, {str(self.order)!r})"

    def clone(self, variables=None, domain=None, order=None) -> "PolyRing":
        return PolyRing(
            self.variables if variables is None else variables,
            self.domain if domain is None else domain,
            self.order if order is None else order,
        )

    # -- monomials ----------------------------------------------------------
    def pack(self, exps: Iterable[int]) -> int:
        P = 0
        exps = tuple(exps)
        if len(exps) != self.ngens:
            raise ValueError(f"expected {self.ngens} exponents, got {len(exps)}")
        for e, s in zip(exps, self._shifts):
            if e < 0:
                raise ValueError("negative exponent")
            if e > EXP_MASK:
                raise ExponentOverflow(f"exponent {e} exceeds 32 bits")
            P |= e << s
        return P

    def unpack(self, P: int) -> tuple[int, ...]:
        return tuple((P >> s) & EXP_MASK for s in self._shifts)

    def mono_degree(self, P: int) -> int:
        return sum((P >> s) & EXP_MASK for s in self._shifts)

    def mono_divides(self, P: int, Q: int) -> bool:
        G = self.guard
        return ((Q | G) - P) & G == G

    def mono_lcm(self, P: int, Q: int) -> int:
        R = 0
        for s in self._shifts:
            a = (P >> s) & EXP_MASK
            b = (Q >> s) & EXP_MASK
            R |= (a if a > b else b) << s
        return R

    def check_overflow(self, P: int) -> int:
        if P & self.guard:
            raise ExponentOverflow("exponent exceeds 32 bits")
        return P

    def sort_key(self, P: int) -> int:
        k = self._key_cache.get(P)
        if k is None:
            k = 0
            for w, s in zip(self._weights, self._shifts):
                e = (P >> s) & EXP_MASK
                if e:
                    k += w * e
            self._key_cache[P] = k
        return k

    def drl_key(self, P: int) -> int:
        k = self._drl_cache.get(P)
        if k is None:
            k = 0
            for w, s in zip(self._drl_weights, self._shifts):
                e = (P >> s) & EXP_MASK
                if e:
                    k += w * e
            self._drl_cache[P] = k
        return k

    def weights(self) -> list[int]:
        return list(self._weights)

    # -- element construction --------------------------------------------------
    def gen(self, name: str) -> "Poly":
        try:
            return self.gens[self.index[name]]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self.name}") from None

    def from_dict(self, d: Mapping) -> "Poly":
        """Build from ``{exponent tuple: coefficient}``."""
        terms = {}
        conv = self.domain.convert
        for exps, c in d.items():
            c = conv(c)
            if c:
                P = self.pack(exps)
                if P in terms:
                    c = terms[P] + c
                    if not c:
                        del terms[P]
                        continue
                terms[P] = c
        return Poly(self, terms)

    def constant(self, c) -> "Poly":
        c = self.domain.convert(c)
        return Poly(self, {0: c} if c else {})

    def convert(self, x) -> "Poly":
        """Coerce a scalar, a domain element or a polynomial of another ring
        (matched by variable names) into this ring."""
        if isinstance(x, Poly):
            if x.ring == self:
                return x
            if x.ring == self.domain:
                return Poly(self, {0: x} if x else {})
            return self._embed(x)
        if isinstance(x, str):
            from .parser import parse

            return parse(x, self)
        return self.constant(x)

    def __call__(self, x) -> "Poly":
        return self.convert(x)

    def resolve(self, name: str):
        """Return ``name`` as an element of this ring, searching coefficient rings."""
        if name in self.index:
            return self.gens[self.index[name]]
        if isinstance(self.domain, PolyRing):
            return self.constant(self.domain.resolve(name))
        raise KeyError(name)

    def knows(self, name: str) -> bool:
        if name in self.index:
            return True
        return isinstance(self.domain, PolyRing) and self.domain.knows(name)

    def imaginary_unit(self):
        return self.constant(self.domain.imaginary_unit())

    def _embed(self, p: "Poly") -> "Poly":
        src = p.ring
        used = p.variables_used()
        if src.domain == self.domain and all(v in self.index for v in used):
            # plain renumbering of exponents
            if src.variables == self.variables:
                return Poly(self, dict(p.terms))
            pos = [(self.index[v], j) for j, v in enumerate(src.variables) if v in used]
            n = self.ngens
            out = {}
            for P, c in p.terms.items():
                exps = [0] * n
                src_exps = src.unpack(P)
                for i, j in pos:
                    exps[i] = src_exps[j]
                out[self.pack(exps)] = c
            return Poly(self, out)
        images = []
        for v in src.variables:
            if v not in used:
                images.append(None)
                continue
            try:
                images.append(self.resolve(v))
            except KeyError:
                raise RingMismatch(f"variable {v!r} of {src.name} is unknown in {self.name}") from None
        acc: dict = {}
        for P, c in p.terms.items():
            term = self.convert(c) if isinstance(c, Poly) else self.constant(c)
            exps = src.unpack(P)
            for img, e in zip(images, exps):
                if e:
                    term = term * img**e
            _accumulate(acc, term.terms)
        return Poly(self, acc)

    # domain protocol (so a PolyRing can be a coefficient domain)
    def render(self, c) -> str:
        return str(c)

    def to_complex(self, c):
        raise TypeError("polynomial coefficients have no complex value")


class Poly:
    """An immutable sparse polynomial; ``terms`` maps packed monomials to
    nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- coercion -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring == self.ring:
                return other
            if isinstance(self.ring.domain, PolyRing) and other.ring == self.ring.domain:
                return self.ring.constant(other)
            raise RingMismatch(f"{other.ring.name} vs {self.ring.name}")
        try:
            return self.ring.constant(other)
        except TypeError:
            return NotImplemented

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.terms:
            return self
        if not self.terms:
            return o
        a, b = (self.terms, o.terms) if len(self.terms) >= len(o.terms) else (o.terms, self.terms)
        res = dict(a)
        for P, c in b.items():
            d = res.get(P)
            if d is None:
                res[P] = c
            else:
                d = d + c
                if d:
                    res[P] = d
                else:
                    del res[P]
        return Poly(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {P: -c for P, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        res = dict(self.terms)
        for P, c in o.terms.items():
            d = res.get(P)
            if d is None:
                res[P] = -c
            else:
                d = d - c
                if d:
                    res[P] = d
                else:
                    del res[P]
        return Poly(self.ring, res)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def scale(self, c) -> "Poly":
        c = self.ring.domain.convert(c)
        if not c:
            return self.ring.zero
        res = {}
        for P, a in self.terms.items():
            v = a * c
            if v:
                res[P] = v
        return Poly(self.ring, res)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        st, ot = self.terms, o.terms
        if not st or not ot:
            return self.ring.zero
        if len(ot) == 1 and 0 in ot:
            return self.scale(ot[0])
        if len(st) == 1 and 0 in st:
            return o.scale(st[0])
        res: dict = {}
        get = res.get
        for P, a in st.items():
            for Q, b in ot.items():
                R = P + Q
                d = get(R)
                if d is None:
                    res[R] = a * b
                else:
                    res[R] = d + a * b
        guard = self.ring.guard
        out = {}
        for R, c in res.items():
            if c:
                if R & guard:
                    raise ExponentOverflow("exponent exceeds 32 bits")
                out[R] = c
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return self.ring.one
        if len(self.terms) == 1:
            (P, c), = self.terms.items()
            return Poly(self.ring, {self.ring.pack(e * n for e in self.ring.unpack(P)): c**n})
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero constant."""
        if isinstance(other, Poly):
            if other.ring == self.ring and other.is_constant():
                other = other.constant_coeff()
            elif other.ring == self.ring:
                q, r = self.divmod([other])
                if r:
                    raise ArithmeticError("inexact polynomial division")
                return q[0]
        dom = self.ring.domain
        c = dom.convert(other)
        if not c:
            from ..arith import DivisionByZero

            raise DivisionByZero("polynomial division by zero")
        inv = dom.one / c
        return self.scale(inv)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            o = self.ring.constant(other)
        except TypeError:
            return False
        return self.terms == o.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if not self.terms:
            return 0
        if len(self.terms) == 1 and 0 in self.terms:
            return hash(self.terms[0])
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_coeff(self):
        return self.terms.get(0, self.ring.domain.zero)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """``(exponent tuple, coefficient)`` pairs in descending ring order."""
        ring = self.ring
        for P in sorted(self.terms, key=ring.sort_key, reverse=True):
            yield ring.unpack(P), self.terms[P]

    def as_dict(self) -> dict:
        unpack = self.ring.unpack
        return {unpack(P): c for P, c in self.terms.items()}

    def coeff(self, exps) -> object:
        if isinstance(exps, Mapping):
            e = [0] * self.ring.ngens
            for name, k in exps.items():
                e[self.ring.index[name]] = k
            exps = e
        return self.terms.get(self.ring.pack(exps), self.ring.domain.zero)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        md = self.ring.mono_degree
        return max(md(P) for P in self.terms)

    def degree(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index[var]
        s = self.ring._shifts[i]
        if not self.terms:
            return -1
        return max((P >> s) & EXP_MASK for P in self.terms)

    def variables_used(self) -> set[str]:
        used = 0
        for P in self.terms:
            used |= P
        return {v for v, s in zip(self.ring.variables, self.ring._shifts) if (used >> s) & EXP_MASK}

    def leading_monomial(self) -> int:
        return max(self.terms, key=self.ring.sort_key)

    def LM(self) -> tuple[int, ...]:
        return self.ring.unpack(self.leading_monomial())

    def LC(self):
        return self.terms[self.leading_monomial()]

    def LT(self) -> "Poly":
        P = self.leading_monomial()
        return Poly(self.ring, {P: self.terms[P]})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.domain.one / self.LC())

    def homogeneous_component(self, d: int) -> "Poly":
        md = self.ring.mono_degree
        return Poly(self.ring, {P: c for P, c in self.terms.items() if md(P) == d})

    def homogeneous_components(self) -> dict[int, "Poly"]:
        md = self.ring.mono_degree
        out: dict[int, dict] = {}
        for P, c in self.terms.items():
            out.setdefault(md(P), {})[P] = c
        return {d: Poly(self.ring, t) for d, t in sorted(out.items())}

    def truncate(self, max_degree: int) -> "Poly":
        md = self.ring.mono_degree
        return Poly(self.ring, {P: c for P, c in self.terms.items() if md(P) <= max_degree})

    # -- calculus and substitution --------------------------------------------
    def diff(self, var) -> "Poly":
        i = var if isinstance(var, int) else self.ring.index[var]
        s = self.ring._shifts[i]
        step = 1 << s
        res = {}
        for P, c in self.terms.items():
            e = (P >> s) & EXP_MASK
            if e:
                res[P - step] = c * e
        return Poly(self.ring, res)

    partial_derivative = diff

    def map_coeffs(self, fn, ring: PolyRing | None = None) -> "Poly":
        ring = ring or self.ring
        res = {}
        for P, c in self.terms.items():
            v = fn(c)
            if v:
                res[P] = v
        if ring is self.ring or ring.variables == self.ring.variables:
            return Poly(ring, res)
        raise RingMismatch("map_coeffs cannot change variables")

    def subs(self, mapping: Mapping, ring: PolyRing | None = None) -> "Poly":
        """Ring homomorphism sending each mapped variable to its image.

        Unmapped variables are sent to the variable of the same name in the
        target ring (or its coefficient rings).
        """
        target = ring or self.ring
        src = self.ring
        images = []
        for v in src.variables:
            if v in mapping:
                images.append(target.convert(mapping[v]))
            else:
                try:
                    images.append(target.resolve(v))
                except KeyError:
                    raise RingMismatch(f"no image for variable {v!r} in {target.name}") from None
        power_cache: list[dict[int, Poly]] = [dict() for _ in images]

        def power(i, e):
            cache = power_cache[i]
            r = cache.get(e)
            if r is None:
                r = images[i] ** e
                cache[e] = r
            return r

        acc: dict = {}
        for P, c in self.terms.items():
            term = target.convert(c) if isinstance(c, Poly) else target.constant(c)
            for i, e in enumerate(src.unpack(P)):
                if e:
                    term = term * power(i, e)
            _accumulate(acc, term.terms)
        return Poly(target, acc)

    substitute = subs

    def evaluate(self, point: Mapping):
        """Evaluate with every variable assigned; returns a plain value."""
        vals = []
        for v in self.ring.variables:
            if v not in point:
                raise KeyError(f"no value for {v!r}")
            vals.append(point[v])
        total = None
        for P, c in self.terms.items():
            term = c
            for x, e in zip(vals, self.ring.unpack(P)):
                if e:
                    term = term * x**e
            total = term if total is None else total + term
        if total is None:
            return self.ring.domain.zero
        return total

    def __call__(self, *args, **kwargs):
        if args:
            kwargs.update(zip(self.ring.variables, args))
        return self.evaluate(kwargs)

    # -- division -------------------------------------------------------------
    def divmod(self, divisors: list["Poly"]):
        """Multivariate division in the ring order; returns (quotients, remainder)."""
        ring = self.ring
        for g in divisors:
            if g.ring != ring:
                raise RingMismatch("divisor ring differs")
            if not g:
                raise ZeroDivisionError("division by the zero polynomial")
        leads = [(g.leading_monomial(), g.LC(), g) for g in divisors]
        quots = [dict() for _ in divisors]
        rem = {}
        p = dict(self.terms)
        key = ring.sort_key
        divides = ring.mono_divides
        one = ring.domain.one
        while p:
            P = max(p, key=key)
            c = p[P]
            for idx, (L, lc, g) in enumerate(leads):
                if divides(L, P):
                    m = P - L
                    q = c / lc if lc != one else c
                    quots[idx][m] = quots[idx].get(m, 0) + q
                    for Q, b in g.terms.items():
                        R = Q + m
                        v = p.get(R)
                        v = -(b * q) if v is None else v - b * q
                        if v:
                            p[R] = v
                        else:
                            p.pop(R, None)
                    break
            else:
                rem[P] = c
                del p[P]
        return [Poly(ring, {k: v for k, v in q.items() if v}) for q in quots], Poly(ring, rem)

    def exact_div(self, g: "Poly") -> "Poly":
        (q,), r = self.divmod([g])
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    # -- printing -------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.ring.name})"

    def to_string(self) -> str:
        return format_poly(self)


def _coeff_parts(domain, c):
    """Return (negative, text, is_one) for printing a coefficient."""
    if isinstance(domain, PolyRing):
        if c.is_constant():
            return _coeff_parts(domain.domain, c.constant_coeff())
        if len(c.terms) == 1:
            inner = format_poly(c)
            neg = inner.startswith("-")
            return neg, inner[1:] if neg else inner, False
        return False, f"({format_poly(c)})", False
    if isinstance(c, GaussianRational):
        re_, im = c.re, c.im
        if not im:
            neg = re_ < 0
            a = -re_ if neg else re_
            return neg, domain.render(GaussianRational(a, 0)), a == 1
        if not re_:
            neg = im < 0
            a = -im if neg else im
            return neg, ("I" if a == 1 else f"{domain.render(GaussianRational(a, 0))}*I"), False
        if re_ < 0:
            return True, f"({domain.render(-c)})", False
        return False, f"({domain.render(c)})", False
    if isinstance(c, PrimeFieldElement):
        return False, str(c.value), c.value == 1
    if isinstance(c, complex):
        if not c.imag:
            c = c.real
        else:
            return False, f"({domain.render(c)})", False
    neg = c < 0
    a = -c if neg else c
    return neg, domain.render(a), a == 1


def format_monomial(ring: PolyRing, P: int) -> str:
    parts = []
    for v, e in zip(ring.variables, ring.unpack(P)):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text: descending degrevlex, explicit ``*`` and ``^``."""
    ring = p.ring
    if not p.terms:
        return "0"
    out = []
    for P in sorted(p.terms, key=ring.drl_key, reverse=True):
        neg, text, is_one = _coeff_parts(ring.domain, p.terms[P])
        mono = format_monomial(ring, P)
        if not mono:
            body = text
        elif is_one:
            body = mono
        else:
            body = f"{text}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
