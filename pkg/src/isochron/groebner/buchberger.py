"""Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller installation of the product and chain criteria.

Inside the engine a polynomial is a list of ``(key, monomial, coeff)``
triples sorted by decreasing key, where ``key`` is the linear order key of
the ring (see :mod:`isochron.poly.orders`).  Because the key is linear,
multiplying by a monomial never reorders terms.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field

from ..poly import Poly, PolyRing, RingMismatch

log = logging.getLogger(__name__)

DEFAULT_MAX_PAIRS = 2_000_000
DEFAULT_MAX_TERMS = 200_000


class ResourceLimitError(RuntimeError):
    """The configured Groebner budget was exhausted before completion."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


@dataclass
class Budget:
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_terms: int = DEFAULT_MAX_TERMS


@dataclass
class Stats:
    pairs: int = 0
    zero_reductions: int = 0
    product_skips: int = 0
    chain_skips: int = 0
    max_terms: int = 0

    def as_dict(self):
        return dict(self.__dict__)


# ---------------------------------------------------------------------------
# internal representation
# ---------------------------------------------------------------------------

def to_internal(p: Poly) -> list:
    key = p.ring.sort_key
    return sorted(((key(P), P, c) for P, c in p.terms.items()), reverse=True)


def from_internal(ring: PolyRing, terms) -> Poly:
    return Poly(ring, {P: c for _, P, c in terms})


def _monic(terms, one):
    lc = terms[0][2]
    if lc == one:
        return terms
    inv = one / lc
    return [(k, P, c * inv) for k, P, c in terms]


class _Reducer:
    """Reduction of a polynomial modulo a list of monic basis polynomials."""

    def __init__(self, ring: PolyRing, one):
        self.ring = ring
        self.guard = ring.guard
        self.one = one

    def find(self, P, basis):
        G = self.guard
        Pg = P | G
        for b in basis:
            if (Pg - b[0][1]) & G == G:
                return b
        return None

    def reduce(self, terms, basis, full=True, max_terms=None):
        """Return the (full or top) normal form of ``terms`` as an internal list."""
        if not terms:
            return []
        G = self.guard
        coef = {}
        mono = {}
        heap = []
        for k, P, c in terms:
            coef[k] = c
            mono[k] = P
            heap.append(-k)
        heapq.heapify(heap)
        rem = []
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            k = -pop(heap)
            c = coef.pop(k, None)
            if c is None:
                continue
            P = mono[k]
            Pg = P | G
            red = None
            for b in basis:
                if (Pg - b[0][1]) & G == G:
                    red = b
                    break
            if red is None:
                rem.append((k, P, c))
                if not full:
                    # top-reduced: keep the tail as is
                    while heap:
                        k2 = -pop(heap)
                        c2 = coef.pop(k2, None)
                        if c2 is not None:
                            rem.append((k2, mono[k2], c2))
                    break
                continue
            lk, lP, _ = red[0]
            mk = k - lk
            mP = P - lP
            get = coef.get
            for bk, bP, bc in red[1:]:
                nk = bk + mk
                v = get(nk)
                if v is None:
                    coef[nk] = -(c * bc)
                    mono[nk] = bP + mP
                    push(heap, -nk)
                else:
                    v = v - c * bc
                    if v:
                        coef[nk] = v
                    else:
                        del coef[nk]
            if max_terms is not None and len(coef) > max_terms:
                raise ResourceLimitError(f"intermediate polynomial exceeded {max_terms} terms")
        return rem


def spoly(f, g, ring: PolyRing):
    """S-polynomial of two monic internal polynomials."""
    (fk, fP, _), (gk, gP, _) = f[0], g[0]
    L = ring.mono_lcm(fP, gP)
    Lk = ring.sort_key(L)
    mf_k, mf_P = Lk - fk, L - fP
    mg_k, mg_P = Lk - gk, L - gP
    a = [(k + mf_k, P + mf_P, c) for k, P, c in f[1:]]
    b = [(k + mg_k, P + mg_P, c) for k, P, c in g[1:]]
    return _sub(a, b)


def _sub(a, b):
    """a - b for internal lists (descending keys)."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ka, kb = a[i][0], b[j][0]
        if ka > kb:
            out.append(a[i])
            i += 1
        elif kb > ka:
            k, P, c = b[j]
            out.append((k, P, -c))
            j += 1
        else:
            c = a[i][2] - b[j][2]
            if c:
                out.append((ka, a[i][1], c))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend((k, P, -c) for k, P, c in b[j:])
    return out


# ---------------------------------------------------------------------------
# the algorithm
# ---------------------------------------------------------------------------

def buchberger_internal(ring: PolyRing, polys: list, budget: Budget | None = None, stats: Stats | None = None):
    """Compute a reduced Groebner basis; ``polys`` are internal lists.

    Returns a list of monic internal polynomials sorted by increasing leading
    monomial.
    """
    budget = budget or Budget()
    stats = stats if stats is not None else Stats()
    one = ring.domain.one
    red = _Reducer(ring, one)
    lcm = ring.mono_lcm
    skey = ring.sort_key
    G = ring.guard

    def divides(P, Q):
        return ((Q | G) - P) & G == G

    basis: list = []          # all polynomials ever added (index = id)
    active: list[int] = []    # indices of the current minimal basis
    pair_heap: list = []
    live_pairs: dict = {}     # (i, j) -> lcm

    def active_polys():
        return [basis[i] for i in active]

    def update(h_idx):
        h = basis[h_idx]
        hP = h[0][1]
        # candidate pairs (g, h)
        cand = []
        for g_idx in active:
            gP = basis[g_idx][0][1]
            cand.append((g_idx, lcm(gP, hP), gP))
        # chain criterion among the new pairs
        keep = []
        for n, (g_idx, L, gP) in enumerate(cand):
            coprime = L == gP + hP
            if coprime:
                keep.append((g_idx, L, True))
                continue
            dominated = False
            for m, (g2, L2, _) in enumerate(cand):
                if m != n and divides(L2, L) and (L2 != L or m < n):
                    dominated = True
                    break
            if dominated:
                stats.chain_skips += 1
            else:
                keep.append((g_idx, L, False))
        # product criterion
        new_pairs = []
        for g_idx, L, coprime in keep:
            if coprime:
                stats.product_skips += 1
            else:
                new_pairs.append((g_idx, L))
        # chain criterion on the old pairs
        for (i, j), L in list(live_pairs.items()):
            if divides(hP, L):
                Li = lcm(basis[i][0][1], hP)
                Lj = lcm(basis[j][0][1], hP)
                if Li != L and Lj != L:
                    del live_pairs[(i, j)]
                    stats.chain_skips += 1
        for g_idx, L in new_pairs:
            live_pairs[(g_idx, h_idx)] = L
            heapq.heappush(pair_heap, (skey(L), g_idx, h_idx))
        # drop active elements whose leading monomial is divisible by lm(h)
        active[:] = [g for g in active if not divides(hP, basis[g][0][1])]
        active.append(h_idx)

    def add(h):
        h = _monic(h, one)
        stats.max_terms = max(stats.max_terms, len(h))
        if len(h) > budget.max_terms:
            raise ResourceLimitError(f"basis polynomial exceeded {budget.max_terms} terms", stats.as_dict())
        basis.append(h)
        update(len(basis) - 1)
        return h[0][1] == 0  # a unit was found

    for f in polys:
        f = red.reduce(f, active_polys(), max_terms=budget.max_terms)
        if f:
            if add(f):
                return [[(0, 0, one)]]

    while pair_heap:
        _, i, j = heapq.heappop(pair_heap)
        if (i, j) not in live_pairs:
            continue
        del live_pairs[(i, j)]
        stats.pairs += 1
        if stats.pairs > budget.max_pairs:
            raise ResourceLimitError(f"S-pair budget of {budget.max_pairs} exhausted", stats.as_dict())
        s = spoly(basis[i], basis[j], ring)
        h = red.reduce(s, active_polys(), max_terms=budget.max_terms)
        if not h:
            stats.zero_reductions += 1
            continue
        if add(h):
            return [[(0, 0, one)]]
        if stats.pairs % 500 == 0:
            log.debug("groebner: %d pairs, basis %d, queue %d", stats.pairs, len(active), len(live_pairs))

    return interreduce(ring, active_polys())


def interreduce(ring: PolyRing, polys: list) -> list:
    """Turn a Groebner basis into the reduced one (sorted by leading monomial)."""
    one = ring.domain.one
    red = _Reducer(ring, one)
    G = ring.guard
    polys = sorted((_monic(p, one) for p in polys if p), key=lambda p: p[0][0])
    minimal = []
    for p in polys:
        P = p[0][1]
        if not any(((P | G) - q[0][1]) & G == G for q in minimal):
            minimal.append(p)
    out = []
    for n, p in enumerate(minimal):
        others = minimal[:n] + minimal[n + 1:]
        tail = red.reduce(p[1:], others)
        out.append([p[0]] + tail)
    return out


def groebner_polys(polys: list[Poly], budget: Budget | None = None, stats: Stats | None = None) -> list[Poly]:
    polys = [p for p in polys if p]
    if not polys:
        return []
    ring = polys[0].ring
    for p in polys:
        if p.ring != ring:
            raise RingMismatch("generators live in different rings")
    if not ring.domain.is_field:
        raise TypeError(f"Groebner bases need a field of coefficients, not {ring.domain.name}")
    internal = [to_internal(p) for p in polys]
    result = buchberger_internal(ring, internal, budget, stats)
    return [from_internal(ring, t) for t in result]


def normal_form_internal(ring: PolyRing, terms, basis) -> list:
    return _Reducer(ring, ring.domain.one).reduce(terms, basis)


def is_groebner(polys: list[Poly]) -> bool:
    """Check Buchberger's criterion: every S-polynomial reduces to zero."""
    if not polys:
        return True
    ring = polys[0].ring
    one = ring.domain.one
    internal = [_monic(to_internal(p), one) for p in polys if p]
    red = _Reducer(ring, one)
    for a in range(len(internal)):
        for b in range(a + 1, len(internal)):
            s = spoly(internal[a], internal[b], ring)
            if red.reduce(s, internal):
                return False
    return True
