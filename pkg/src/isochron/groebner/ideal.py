"""Ideals, reduced Groebner bases and the usual ideal operations."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from ..arith import QQ, BadPrimeError, PrimeField, RationalField, rational_reconstruct
from ..poly import MonomialOrder, Poly, PolyRing, RingMismatch, block, format_poly
from .buchberger import (
    Budget,
    Stats,
    _monic,
    _Reducer,
    buchberger_internal,
    from_internal,
    to_internal,
)

log = logging.getLogger(__name__)


class ReconstructionError(ValueError):
    """Some coefficients of a modular basis have no small rational preimage."""

    def __init__(self, offending):
        self.offending = offending
        shown = ", ".join(f"{c} in {g}" for g, c in offending[:8])
        more = "" if len(offending) <= 8 else f" (and {len(offending) - 8} more)"
        super().__init__(f"rational reconstruction failed for {shown}{more}")


class Ideal:
    """An ideal given by a list of nonzero generators in one ring."""

    def __init__(self, generators, ring: PolyRing | None = None):
        gens = list(generators)
        if ring is None:
            if not gens:
                raise ValueError("an empty ideal needs an explicit ring")
            ring = gens[0].ring
        out = []
        for g in gens:
            g = ring.convert(g)
            if g:
                out.append(g)
        self.ring = ring
        self.generators = tuple(out)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.generators))}])"

    def with_order(self, order) -> "Ideal":
        ring = self.ring.clone(order=MonomialOrder.parse(order))
        return Ideal([ring.convert(g) for g in self.generators], ring)

    def groebner(self, order=None, budget: Budget | None = None) -> "GroebnerBasis":
        return buchberger(self, order, budget)

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(list(self.generators) + [self.ring.convert(g) for g in other], self.ring)


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple
    order: MonomialOrder
    ring: PolyRing
    reduced: bool = True

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.LM() for g in self.basis]

    def _internal(self):
        cached = self.__dict__.get("_int")
        if cached is None:
            cached = [to_internal(g) for g in self.basis]
            object.__setattr__(self, "_int", cached)
        return cached

    def normal_form(self, f) -> Poly:
        return normal_form(f, self)

    def contains(self, f) -> bool:
        return not normal_form(f, self)

    def ideal(self) -> Ideal:
        return Ideal(self.basis, self.ring)

    def to_text(self) -> str:
        return render_ideal_text(self.ring, self.basis)

    def to_json(self) -> str:
        return json.dumps({"order": str(self.order), "generators": [format_poly(g) for g in self.basis]})


def _as_ideal(I) -> Ideal:
    if isinstance(I, Ideal):
        return I
    if isinstance(I, GroebnerBasis):
        return I.ideal()
    return Ideal(I)


def buchberger(I, order=None, budget: Budget | None = None, stats: Stats | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` for ``order`` (default: the ring's order)."""
    I = _as_ideal(I)
    if order is not None and MonomialOrder.parse(order) != I.ring.order:
        I = I.with_order(order)
    ring = I.ring
    if not ring.domain.is_field:
        raise TypeError(f"Groebner bases need a field of coefficients, not {ring.domain.name}")
    if not I.generators:
        return GroebnerBasis((), ring.order, ring)
    result = buchberger_internal(ring, [to_internal(g) for g in I.generators], budget, stats)
    basis = tuple(from_internal(ring, t) for t in result)
    return GroebnerBasis(basis, ring.order, ring)


def normal_form(f, G: GroebnerBasis) -> Poly:
    ring = G.ring
    if isinstance(f, Poly) and f.ring != ring:
        if f.ring.variables != ring.variables or f.ring.domain != ring.domain:
            raise RingMismatch(f"{f.ring.name} does not match {ring.name}")
    f = ring.convert(f)
    if not G.basis:
        return f
    rem = _Reducer(ring, ring.domain.one).reduce(to_internal(f), G._internal())
    return from_internal(ring, rem)


def ideal_membership(f, I, budget: Budget | None = None) -> bool:
    G = I if isinstance(I, GroebnerBasis) else buchberger(I, budget=budget)
    return not normal_form(f, G)


def _fresh_name(ring: PolyRing, base: str) -> str:
    name = base
    n = 0
    while ring.knows(name):
        n += 1
        name = f"{base}{n}"
    return name


def radical_membership(f, I, budget: Budget | None = None) -> bool:
    """True iff ``f`` vanishes on the variety of ``I``: GB(I + <1 - w f>) = {1}.

    When a basis of ``I`` is at hand, ``f`` is first replaced by its normal
    form, which leaves the extended ideal unchanged and shrinks it a lot.
    """
    if isinstance(I, GroebnerBasis):
        base_ring = I.ring
        f = normal_form(f, I)
        if not f:
            return True
        gens = list(I.basis)
    else:
        I = _as_ideal(I)
        base_ring = I.ring
        f = base_ring.convert(f)
        if not f:
            return True
        gens = list(I.generators)
    w = _fresh_name(base_ring, "w")
    ext = PolyRing((w,) + base_ring.variables, base_ring.domain, block(1))
    wv = ext.gen(w)
    ext_gens = [ext.convert(g) for g in gens] + [ext.one - wv * ext.convert(f)]
    G = buchberger(Ideal(ext_gens, ext), budget=budget)
    return G.is_unit()


def eliminate(I, variables, budget: Budget | None = None) -> Ideal:
    """Elimination ideal ``I`` intersected with the ring without ``variables``."""
    I = _as_ideal(I)
    ring = I.ring
    if isinstance(variables, str):
        variables = [variables]
    drop = [v for v in variables]
    for v in drop:
        if v not in ring.index:
            raise KeyError(f"unknown variable {v!r}")
    keep = [v for v in ring.variables if v not in drop]
    ext = PolyRing(tuple(drop) + tuple(keep), ring.domain, block(len(drop)))
    G = buchberger(Ideal([ext.convert(g) for g in I.generators], ext), budget=budget)
    target = PolyRing(keep, ring.domain, ring.order)
    out = []
    for g in G.basis:
        if not (g.variables_used() & set(drop)):
            out.append(target.convert(g))
    return Ideal(out, target)


def intersect(*ideals, budget: Budget | None = None) -> Ideal:
    """Intersection via ``t I + (1 - t) J`` and elimination of ``t``."""
    ideals = [_as_ideal(I) for I in ideals]
    if not ideals:
        raise ValueError("nothing to intersect")
    acc = ideals[0]
    ring = acc.ring
    for J in ideals[1:]:
        if J.ring.variables != ring.variables or J.ring.domain != ring.domain:
            raise RingMismatch("ideals live in different rings")
        acc = _intersect2(acc, J, budget)
    # reduced basis in the original order for a canonical answer
    G = buchberger(Ideal([ring.convert(g) for g in acc.generators], ring), budget=budget)
    return Ideal(G.basis, ring)


def _intersect2(I: Ideal, J: Ideal, budget) -> Ideal:
    ring = I.ring
    if not I.generators or not J.generators:
        return Ideal([], ring)
    t = _fresh_name(ring, "t")
    ext = PolyRing((t,) + ring.variables, ring.domain, block(1))
    tv = ext.gen(t)
    gens = [tv * ext.convert(f) for f in I.generators]
    gens += [(ext.one - tv) * ext.convert(g) for g in J.generators]
    G = buchberger(Ideal(gens, ext), budget=budget)
    out = [ring.convert(g) for g in G.basis if g.degree(t) == 0]
    return Ideal(out, ring)


def quotient(I, J, budget: Budget | None = None) -> Ideal:
    """Ideal quotient ``I : J``."""
    I = _as_ideal(I)
    ring = I.ring
    if isinstance(J, Poly):
        fs = [J]
    else:
        fs = list(_as_ideal(J).generators)
    fs = [ring.convert(f) for f in fs if f]
    if not fs:
        return Ideal([ring.one], ring)
    parts = []
    for f in fs:
        inter = intersect(I, Ideal([f], ring), budget=budget)
        gens = []
        for g in inter.generators:
            q, r = g.divmod([f])
            if r:
                raise AssertionError(f"generator {g} of the intersection is not divisible by {f}")
            gens.append(q[0])
        parts.append(Ideal(gens, ring))
    if len(parts) == 1:
        G = buchberger(parts[0], budget=budget)
        return Ideal(G.basis, ring)
    return intersect(*parts, budget=budget)


def ideal_equal(I, J, budget: Budget | None = None) -> bool:
    """Mutual membership of the generators."""
    I, J = _as_ideal(I), _as_ideal(J)
    GI = buchberger(I, budget=budget)
    GJ = buchberger(Ideal([GI.ring.convert(g) for g in J.generators], GI.ring), budget=budget)
    return all(GI.contains(g) for g in J.generators) and all(GJ.contains(g) for g in GI.basis)


# ---------------------------------------------------------------------------
# modular computation and lifting
# ---------------------------------------------------------------------------

def modular_image(I, p: int) -> Ideal:
    """Reduce every coefficient of ``I`` modulo ``p``."""
    I = _as_ideal(I)
    ring = I.ring
    if not isinstance(ring.domain, RationalField):
        raise TypeError(f"modular images need rational coefficients, not {ring.domain.name}")
    F = PrimeField(p)
    target = ring.clone(domain=F)
    gens = []
    for g in I.generators:
        try:
            img = g.map_coeffs(F.convert, target)
        except BadPrimeError as exc:
            raise BadPrimeError(p, f"{exc} (generator {g})") from None
        if not img:
            raise BadPrimeError(p, f"generator {g} vanishes modulo {p}")
        gens.append(img)
    return Ideal(gens, target)


def lift_basis(G) -> Ideal:
    """Lift a basis over a prime field to rational coefficients."""
    if isinstance(G, GroebnerBasis):
        gens, ring = G.basis, G.ring
    else:
        G = _as_ideal(G)
        gens, ring = G.generators, G.ring
    if not isinstance(ring.domain, PrimeField):
        raise TypeError("lift_basis expects coefficients in a prime field")
    target = ring.clone(domain=QQ)
    out = []
    bad = []
    for g in gens:
        terms = {}
        for P, c in g.terms.items():
            q = rational_reconstruct(c)
            if q is None:
                bad.append((format_poly(g), c.value))
            else:
                terms[P] = q
        out.append(Poly(target, terms))
    if bad:
        raise ReconstructionError(bad)
    return Ideal(out, target)


def check_lucky_prime(I, p: int, budget: Budget | None = None) -> bool:
    """Compare leading monomials of GB(I mod p) and GB(I) mod p."""
    I = _as_ideal(I)
    G = buchberger(I, budget=budget)
    Gp = buchberger(modular_image(I, p), budget=budget)
    same = sorted(G.leading_monomials()) == sorted(Gp.leading_monomials())
    if not same:
        log.warning("prime %d looks unlucky for this ideal", p)
    return same


# ---------------------------------------------------------------------------
# ideal files
# ---------------------------------------------------------------------------

def _domain_text(domain) -> str:
    return domain.name


def render_ideal_text(ring: PolyRing, gens) -> str:
    lines = [f"ring: {' '.join(ring.variables)} over {_domain_text(ring.domain)}", f"order: {ring.order}"]
    lines += [format_poly(g) for g in gens]
    return "\n".join(lines) + "\n"
