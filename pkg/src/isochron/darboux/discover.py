"""Search for Darboux factors of small degree at a numeric parameter point.

Writing ``f = sum u_ab z^a w^b`` and ``K = sum k_ab z^a w^b`` the identity
``f_z z' + f_w w' = K f`` is bilinear in the unknowns.  One coefficient of
``f`` is pinned to 1, the remaining system is solved through a lex basis
(``f`` unknowns first, so the cofactor is found first) and the solutions are
read off by back substitution.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from ..arith import QQI, rational
from ..groebner import Budget, Ideal, buchberger
from ..normal_form.system import ComplexSystem, PlanarSystem, complexify
from ..poly import Poly, PolyRing
from .recipe import DarbouxFactor
from .verify import NotAFactor, cofactor_of, flow_derivative

log = logging.getLogger(__name__)

SNAP_DENOMINATOR = 10**6


def _monomials(deg: int, lo: int = 0):
    return [(a, d - a) for d in range(lo, deg + 1) for a in range(d, -1, -1)]


def _snap(x: float):
    return rational(Fraction(x).limit_denominator(SNAP_DENOMINATOR))


def _candidate_roots(p: Poly, var: int):
    """Gaussian-rational candidates for the roots of a univariate ``p``."""
    deg = p.degree(var)
    coeffs = [0j] * (deg + 1)
    for P, c in p.terms.items():
        e = p.ring.unpack(P)[var]
        coeffs[deg - e] += complex(c)
    out = []
    for r in np.roots(coeffs):
        cand = QQI.convert(_snap(r.real)) + QQI.I * _snap(r.imag)
        if not p.subs({p.ring.variables[var]: cand}) and cand not in out:
            out.append(cand)
    return out


def _solve(basis, ring: PolyRing):
    """All Gaussian-rational points of a lex basis reachable by back
    substitution; variables left unconstrained are set to 0."""
    n = ring.ngens
    # group by the highest-ranked variable present
    by_lead: dict[int, list] = {k: [] for k in range(n)}
    for g in basis:
        used = [ring.index[v] for v in g.variables_used()]
        by_lead[min(used)].append(g)
    solutions = [{}]
    for k in range(n - 1, -1, -1):
        name = ring.variables[k]
        nxt = []
        for partial in solutions:
            uni = []
            bad = False
            for g in by_lead[k]:
                h = g.subs(partial) if partial else g
                if not h:
                    continue
                if h.is_constant():
                    bad = True
                    break
                uni.append(h)
            if bad:
                continue
            if not uni:
                nxt.append({**partial, name: QQI.zero})
                continue
            uni.sort(key=lambda h: h.degree(k))
            for root in _candidate_roots(uni[0], k):
                if all(not h.subs({name: root}) for h in uni[1:]):
                    nxt.append({**partial, name: root})
        solutions = nxt
    return solutions


def _normalised(f: Poly) -> Poly:
    return f * f.ring.constant(QQI.one / f.LC())


def _as_numeric(sys) -> ComplexSystem:
    cs = complexify(sys) if isinstance(sys, PlanarSystem) else sys
    if isinstance(cs.domain, PolyRing):
        raise ValueError("discover_factors needs numeric parameter values")
    if cs.domain != QQI:
        cs = ComplexSystem(*(PolyRing(cs.ring.variables, QQI).convert(p) for p in (cs.X, cs.Y)))
    return cs


def discover_factors(sys, max_deg: int, budget: Budget | None = None) -> list[DarbouxFactor]:
    """Darboux factors of degree 1..``max_deg`` with Gaussian-rational
    coefficients, up to scalar multiples."""
    cs = _as_numeric(sys)
    zw = cs.ring
    sdeg = max(cs.zdot.total_degree(), cs.wdot.total_degree())
    kmonos = _monomials(sdeg - 1)
    found: list[DarbouxFactor] = []
    seen = set()
    for deg in range(1, max_deg + 1):
        fmonos = _monomials(deg)
        # normalizations: constant term 1, then each linear coefficient with
        # the earlier candidates forced to zero
        pins = [((0, 0), [])]
        pins += [(m, [(0, 0)] + [p for p in _monomials(1, 1) if p > m]) for m in _monomials(1, 1)]
        for pin, zeros in pins:
            free = [m for m in fmonos if m != pin and m not in zeros]
            names = [f"u{a}_{b}" for a, b in free] + [f"k{a}_{b}" for a, b in kmonos]
            unk = PolyRing(names, QQI, "lex")
            U = dict(zip(free, unk.gens))
            Kc = dict(zip(kmonos, unk.gens[len(free):]))
            ring = PolyRing(zw.variables, unk)
            f = ring.from_dict({**{m: unk.zero for m in fmonos}, pin: unk.one, **{m: U[m] for m in free}})
            K = ring.from_dict({m: Kc[m] for m in kmonos})
            lift = ComplexSystem(ring.convert(cs.X), ring.convert(cs.Y))
            eqs = list((flow_derivative(lift, f) - K * f).terms.values())
            G = buchberger(Ideal(eqs, unk), budget=budget)
            if G.is_unit():
                continue
            for sol in _solve(list(G), unk):
                fv = f.map_coeffs(lambda c: c.evaluate(sol), zw)
                if fv.total_degree() < 1:
                    continue
                try:
                    Kv = cofactor_of(cs, fv)
                except NotAFactor:
                    continue
                key = _normalised(fv)
                if key in seen:
                    continue
                seen.add(key)
                found.append(DarbouxFactor(fv, Kv))
    log.info("found %d factors up to degree %d", len(found), max_deg)
    return found


def same_up_to_scalar(f: Poly, g: Poly) -> bool:
    if not f or not g:
        return not f and not g
    return _normalised(f) == _normalised(f.ring.convert(g))
