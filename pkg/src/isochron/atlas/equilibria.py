"""Equilibria of center type away from the origin.

A center needs zero trace and positive determinant of the linear part, so
candidates are the zeros of ``<P, Q, T>`` with ``T = P_x + Q_y``; the
determinant ``D = P_x Q_y - P_y Q_x`` sorts them.  Groebner bases are taken
over Q with the coordinates and the parameters as joint variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from ..arith import QQ, QQI, rational
from ..groebner import Budget, GroebnerBasis, Ideal, buchberger, quotient, read_ideal
from ..normal_form.system import PlanarSystem, imag_part, real_part
from ..poly import Poly, PolyRing
from .canonical import change_coordinates
from .conditions import condition

ROOT_TOL = 1e-8
SNAP_DENOMINATOR = 10**6

# reference bases; G1 describes the equilibria other than the origin
REFERENCE_BASES = {"G1": "G1.ideal", "G3": "G3.ideal", "G4": "G4.ideal"}


class NotRealSystem(ValueError):
    pass


def reference_basis(name: str) -> Ideal:
    text = resources.files(__package__).joinpath("data", REFERENCE_BASES[name]).read_text(encoding="utf-8")
    return read_ideal(text)


# ---------------------------------------------------------------------------
# real field in a flat ring
# ---------------------------------------------------------------------------

def _real(c):
    if imag_part(c):
        raise NotRealSystem("the system has a non-real coefficient")
    return real_part(c)


def real_field(s, variables=None) -> tuple[Poly, Poly]:
    """``(P, Q)`` of ``s`` in ``Q[x, y, params]``.

    ``s`` is a :class:`PlanarSystem` or a pair of polynomials over ``Q(i)``
    or ``Q(i)[params]`` with real coefficients.
    """
    P, Q = (s.P, s.Q) if isinstance(s, PlanarSystem) else s
    ring = P.ring
    dom = ring.domain
    params = dom.variables if isinstance(dom, PolyRing) else ()
    flat = PolyRing(variables or (ring.variables + tuple(params)), QQ)
    out = []
    for p in (P, Q):
        acc = flat.zero
        for M, c in p.terms.items():
            mono = flat.from_dict({tuple(ring.unpack(M)) + (0,) * len(params): QQ.one})
            if isinstance(c, Poly):
                inner = flat.zero
                for N, d in c.terms.items():
                    inner = inner + flat.from_dict({(0,) * ring.ngens + tuple(dom.unpack(N)): _real(d)})
                acc = acc + mono * inner
            else:
                acc = acc + mono * flat.constant(_real(c))
        out.append(acc)
    return out[0], out[1]


def trace_and_determinant(P: Poly, Q: Poly, variables=("x", "y")) -> tuple[Poly, Poly]:
    x, y = variables
    Px, Py, Qx, Qy = P.diff(x), P.diff(y), Q.diff(x), Q.diff(y)
    return Px + Qy, Px * Qy - Py * Qx


def center_ideal(s, factor: Poly | None = None) -> Ideal:
    """``<P, Q, T>``, or ``<factor, Q, T>`` when a factor of ``P`` is given."""
    P, Q = real_field(s)
    T, _ = trace_and_determinant(P, Q)
    first = P if factor is None else P.ring.convert(factor)
    if factor is not None and P.divmod([first])[1]:
        raise ValueError("the given polynomial does not divide P")
    return Ideal([first, Q, T], P.ring)


def remove_origin(I: Ideal, budget: Budget | None = None) -> Ideal:
    """Saturation of ``I`` by ``<x, y>``."""
    ring = I.ring
    m = Ideal([ring.gen("x"), ring.gen("y")], ring)
    cur = I
    while True:
        nxt = quotient(cur, m, budget=budget)
        if _same(nxt, cur, budget):
            return nxt
        cur = nxt


def _same(I: Ideal, J: Ideal, budget) -> bool:
    G = buchberger(I, budget=budget)
    return all(G.contains(g) for g in J.generators)


# ---------------------------------------------------------------------------
# candidates at numeric parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    point: tuple
    exact: bool
    trace: object
    det: object
    verdict: str

    @property
    def is_origin(self) -> bool:
        return all(not c for c in self.point)

    def as_json(self):
        show = lambda v: str(v) if self.exact else repr(complex(v) if isinstance(v, complex) and v.imag else float(getattr(v, "real", v)))
        return {"point": [show(c) for c in self.point], "exact": self.exact, "trace": show(self.trace), "det": show(self.det), "verdict": self.verdict}


@dataclass
class CenterCandidateReport:
    T: Poly
    D: Poly
    basis: GroebnerBasis
    candidates: list = field(default_factory=list)
    positive_dimensional: bool = False

    @property
    def centers(self) -> list:
        return [c for c in self.candidates if c.verdict == "center-type"]

    def as_json(self):
        return {
            "trace": str(self.T),
            "det": str(self.D),
            "basis": [str(g) for g in self.basis],
            "positive_dimensional": self.positive_dimensional,
            "candidates": [c.as_json() for c in self.candidates],
        }


def _fval(p: Poly, point) -> complex:
    total = 0j
    for P, c in p.terms.items():
        term = complex(float(c))
        for v, e in zip(point, p.ring.unpack(P)):
            if e:
                term *= v**e
        total += term
    return total


def _snap(v: complex):
    if abs(v.imag) > ROOT_TOL * max(1.0, abs(v)):
        return None
    return rational(Fraction(v.real).limit_denominator(SNAP_DENOMINATOR))


def _roots(coeffs) -> list[complex]:
    coeffs = np.array(coeffs, dtype=complex)
    nz = np.flatnonzero(np.abs(coeffs) > 1e-14 * max(1.0, np.abs(coeffs).max()))
    if nz.size == 0:
        return []
    return list(np.roots(coeffs[nz[0]:]))


def _univariate(p: Poly, var: int, fixed=None) -> list[complex]:
    """Coefficients (highest first) of ``p`` in variable ``var`` after the
    other variable is set to ``fixed``."""
    deg = p.degree(var)
    coeffs = [0j] * (deg + 1)
    for P, c in p.terms.items():
        e = p.ring.unpack(P)
        other = e[1 - var]
        coeffs[deg - e[var]] += complex(float(c)) * (fixed**other if other else 1)
    return coeffs


def _dedupe(points, tol=1e-6):
    out = []
    for p in points:
        if all(max(abs(a - b) for a, b in zip(p, q)) > tol * max(1.0, max(abs(v) for v in q)) for q in out):
            out.append(p)
    return out


def _solve_plane(G: GroebnerBasis) -> tuple[list, bool]:
    """Points of a lex basis in ``Q[x, y]`` (x > y); returns (points, zero_dimensional)."""
    basis = list(G)
    ring = G.ring
    if G.is_unit():
        return [], True
    pure = [set(), set()]
    for g in basis:
        e = g.LM()
        if e[1] == 0:
            pure[0].add(e[0])
        if e[0] == 0:
            pure[1].add(e[1])
    if not pure[0] or not pure[1]:
        return [], False
    h = next(g for g in basis if g.degree(0) == 0)
    points = []
    for y0 in _roots(_univariate(h, 1, 0)):
        rest = [g for g in basis if g.degree(0) > 0]
        scale = lambda g: max(1.0, *(abs(float(c)) for c in g.terms.values()))
        for g in sorted(rest, key=lambda g: g.degree(0)):
            coeffs = _univariate(g, 0, y0)
            xs = _roots(coeffs)
            if xs:
                break
        else:
            continue
        for x0 in xs:
            if all(abs(_fval(g, (x0, y0))) < 1e-6 * scale(g) for g in basis):
                points.append((x0, y0))
    return _dedupe(points), True


def _exact_point(point, basis) -> tuple | None:
    snapped = tuple(_snap(v) for v in point)
    if any(v is None for v in snapped):
        return None
    if all(not g.evaluate(dict(zip(("x", "y"), snapped))) for g in basis):
        return snapped
    return None


def _verdict(det, real: bool) -> str:
    if not real:
        return "complex"
    d = det if not isinstance(det, complex) else det.real
    if d > (0 if not isinstance(d, float) else ROOT_TOL):
        return "center-type"
    if d < (0 if not isinstance(d, float) else -ROOT_TOL):
        return "saddle"
    return "degenerate"


def _numeric_field(s, point) -> tuple[Poly, Poly]:
    if point:
        s = s.substitute(point, params=()) if isinstance(s, PlanarSystem) else s
    P, Q = real_field(s)
    if len(P.ring.variables) != 2:
        raise ValueError("values for every parameter are needed to solve for candidates")
    return P, Q


def center_candidates(s, point: dict | None = None, factor: Poly | None = None, budget: Budget | None = None) -> CenterCandidateReport:
    """Trace, determinant and the basis of ``<P, Q, T>`` (or ``<factor, Q, T>``)
    over Q in ``(x, y, params)``; with numeric parameters (a system without
    parameters, or ``point`` given) the candidate points are solved."""
    P, Q = real_field(s)
    T, D = trace_and_determinant(P, Q)
    G = buchberger(center_ideal(s, factor), budget=budget)
    report = CenterCandidateReport(T, D, G)
    numeric = len(P.ring.variables) == 2
    if not numeric and point is None:
        return report
    Pn, Qn = _numeric_field(s, point) if not numeric else (P, Q)
    plane = PolyRing(("x", "y"), QQ, "lex")
    Tn, Dn = trace_and_determinant(Pn, Qn)
    if factor is not None:
        f = factor if numeric else _specialise(P.ring.convert(factor), point)
        first = plane.convert(f)
    else:
        first = plane.convert(Pn)
    Gn = buchberger(Ideal([first, plane.convert(Qn), plane.convert(Tn)], plane), budget=budget)
    pts, zero_dim = _solve_plane(Gn)
    report.positive_dimensional = not zero_dim
    for pt in pts:
        ex = _exact_point(pt, list(Gn))
        if ex is not None:
            vals = dict(zip(("x", "y"), ex))
            t, d = Tn.evaluate(vals), Dn.evaluate(vals)
            report.candidates.append(Candidate(ex, True, t, d, _verdict(d, True)))
        else:
            real = all(abs(v.imag) <= ROOT_TOL * max(1.0, abs(v)) for v in pt)
            p = tuple(complex(v.real, 0) if real else v for v in pt)
            t, d = _fval(Tn, p), _fval(Dn, p)
            report.candidates.append(Candidate(tuple(v.real if real else v for v in p), False, t.real if real else t, d.real if real else d, _verdict(d, real)))
    return report


def _specialise(f: Poly, point: dict) -> Poly:
    return f.subs({k: QQ.convert(v) for k, v in point.items()})


# ---------------------------------------------------------------------------
# coexistence of centers
# ---------------------------------------------------------------------------

MAX_CENTERS = {"L": 2, "2": 1, "3": 2, "4": 2}


@dataclass
class CoexistenceReport:
    condition: str
    params: dict
    candidates: CenterCandidateReport
    branch: str
    details: dict = field(default_factory=dict)

    @property
    def center_count(self) -> int:
        """The origin plus the center-type equilibria away from it."""
        return 1 + sum(1 for c in self.candidates.centers if not c.is_origin)

    @property
    def within_bound(self) -> bool:
        return self.center_count <= MAX_CENTERS[self.condition]

    def as_json(self):
        return {
            "condition": self.condition,
            "params": {k: str(v) for k, v in self.params.items()},
            "branch": self.branch,
            "center_count": self.center_count,
            "bound": MAX_CENTERS[self.condition],
            "within_bound": self.within_bound,
            "details": {k: str(v) if not isinstance(v, (bool, int, list, dict)) else v for k, v in self.details.items()},
            "candidates": [c.as_json() for c in self.candidates.candidates if not c.is_origin],
        }


@dataclass(frozen=True)
class QuadraticSurd:
    """``alpha + beta*sqrt(d)`` with rational entries, ``d > 0``."""

    alpha: object
    beta: object
    d: object

    def sign(self) -> int:
        a, b = self.alpha, self.beta
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __float__(self):
        return float(self.alpha) + float(self.beta) * float(self.d) ** 0.5

    def __str__(self):
        return f"{self.alpha} + ({self.beta})*sqrt({self.d})"


def line_coefficients(a20, b20, r20, r11) -> dict:
    """``a0, a1, a2`` of ``g1 = a0 + a1 y + a2 y^2`` and ``d0 = a1^2 - 4 a2 a0``."""
    a0 = a20 * b20 - r20
    a1 = a20**2 * b20 + b20**3 - 2 * a20 * r20 + b20 * r11
    a2 = -(a20**2) * r20 + a20 * b20 * r11 + b20**2 * r20
    return {"a0": a0, "a1": a1, "a2": a2, "d0": a1**2 - 4 * a2 * a0}


def _on_line(p: Poly, a20, b20) -> Poly:
    """``p(x, y)`` with ``x = -(a20 y + 1)/b20``, as a polynomial in ``y``."""
    ring = PolyRing(("y",), QQ)
    y = ring.gen("y")
    return p.subs({"x": (y * (-a20) - 1) * (QQ.one / b20), "y": y}, ring=ring)


def _reduce_mod(p: Poly, g: Poly) -> Poly:
    return p.divmod([g])[1]


def analyse_line_case(params: dict) -> dict:
    """Exact analysis of the two candidates ``C+-`` under condition L with
    ``b20 != 0``: ``g1``, the trace along ``g1`` and ``D+-`` as quadratic surds."""
    a20, b20, r20, r11 = (QQ.convert(params[k]) for k in ("a20", "b20", "r20", "r11"))
    coeffs = line_coefficients(a20, b20, r20, r11)
    out = dict(coeffs)
    spec = condition("L")
    s = spec.system().substitute({k: params[k] for k in spec.free}, params=())
    P, Q = real_field(s)
    T, D = trace_and_determinant(P, Q)
    ring = PolyRing(("y",), QQ)
    y = ring.gen("y")
    a0, a1, a2, d0 = coeffs["a0"], coeffs["a1"], coeffs["a2"], coeffs["d0"]
    g1 = ring.constant(a2) * y**2 + ring.constant(a1) * y + ring.constant(a0)
    # on the line a20 y + b20 x + 1 = 0 the second basis element is -g1/b20^2
    quadric = _on_line(_line_quadric(a20, b20, r20, r11, P.ring), a20, b20)
    out["g1_matches"] = quadric * ring.constant(-(b20**2)) == g1
    if not a2:
        out["branch"] = "a2 = 0"
        return out
    out["trace_vanishes"] = not _reduce_mod(_on_line(T, a20, b20), g1)
    rem = _reduce_mod(_on_line(D, a20, b20), g1)
    u, v = rem.coeff((0,)), rem.coeff((1,))
    alpha = u - v * a1 / (2 * a2)
    beta = v / (2 * a2)
    plus, minus = QuadraticSurd(alpha, beta, d0), QuadraticSurd(alpha, -beta, d0)
    out.update(D_plus=plus, D_minus=minus, product=alpha**2 - beta**2 * d0)
    if d0 > 0:
        out["branch"] = "d0 > 0"
        out["product_negative"] = out["product"] < 0
        out["center_type"] = [name for name, s_ in (("C+", plus), ("C-", minus)) if s_.sign() > 0]
    elif d0 == 0:
        out["branch"] = "d0 = 0"
        out["center_type"] = ["C"] if plus.sign() > 0 else []
    else:
        out["branch"] = "d0 < 0"
        out["center_type"] = []
    return out


def _line_quadric(a20, b20, r20, r11, ring: PolyRing) -> Poly:
    x, y = ring.gen("x"), ring.gen("y")
    c = ring.constant
    return c(r11) * x * y + c(r20) * x**2 - c(r20) * y**2 + c(a20) * x - c(b20) * y


def swap_line_params(params: dict) -> dict:
    """Parameters after ``(x, y) -> (y, x)`` with time reversed; the L family
    is mapped to itself."""
    return {"a20": params["b20"], "b20": params["a20"], "r20": params["r20"], "r11": -QQ.convert(params["r11"])}


def coexistence_analysis(id, params: dict, budget: Budget | None = None) -> CoexistenceReport:
    """Center-type equilibria of condition ``id`` (L, 2, 3 or 4) at real
    rational ``params`` (the free parameters of the condition)."""
    cid = str(id).upper() if str(id).lower() == "l" else str(id)
    if cid not in MAX_CENTERS:
        raise ValueError(f"coexistence is analysed for L, 2, 3 and 4, not {id!r}")
    spec = condition(cid)
    missing = set(spec.free) - set(params)
    if missing:
        raise KeyError(f"condition {cid} needs values for {sorted(missing)}")
    vals = {k: QQ.convert(params[k]) for k in spec.free}
    s = spec.system()
    cands = center_candidates(s, vals, budget=budget)
    report = CoexistenceReport(cid, vals, cands, "generic")
    if cid == "L":
        a20, b20 = vals["a20"], vals["b20"]
        if not a20 and not b20:
            report.branch = "a20 = b20 = 0"
        else:
            use = vals if b20 else swap_line_params(vals)
            report.branch = "b20 != 0" if b20 else "b20 = 0, swapped"
            details = analyse_line_case(use)
            report.details = details
            report.branch += f", {details['branch']}"
    elif cid == "2":
        a20, b20 = vals["a20"], vals["b20"]
        if a20 and b20:
            report.branch = "a20*b20 != 0"
            report.details = {"A": f"({-1 / b20}, 0)", "D_A": _det_at(s, vals, (-1 / b20, QQ.zero))}
        else:
            report.branch = "a20 = 0" if not a20 else "b20 = 0"
    elif cid == "3":
        b11 = vals["a20"] / 2
        if b11:
            report.branch = "b11 != 0"
            report.details = {"B": f"(0, {-2 / b11})", "D_B": _det_at(s, vals, (QQ.zero, -2 / b11))}
        else:
            report.branch = "b11 = 0"
    elif cid == "4":
        a20, b20, r11 = vals["a20"], vals["b20"], vals["r11"]
        if not a20 and b20:
            report.branch = "a20 = 0"
            report.details = {"A": f"({-1 / b20}, 0)", "D_A": _det_at(s, vals, (-1 / b20, QQ.zero)), "r11/b20^2 + 1": r11 / b20**2 + 1}
        else:
            report.branch = "a20 != 0" if a20 else "a20 = b20 = 0"
    return report


def _det_at(s: PlanarSystem, vals: dict, pt) -> object:
    P, Q = real_field(s.substitute(vals, params=()))
    T, D = trace_and_determinant(P, Q)
    return D.evaluate({"x": pt[0], "y": pt[1]})


# ---------------------------------------------------------------------------
# moving a second center to the origin
# ---------------------------------------------------------------------------

def shifted_field(s, point, M=((1, 0), (0, 1)), time_scale=1) -> tuple[Poly, Poly]:
    """The field of ``s`` (numeric parameters) after moving ``point`` to the
    origin and applying ``M``."""
    P, Q = (s.P, s.Q) if isinstance(s, PlanarSystem) else s
    return change_coordinates(P, Q, M, shift=point, time_scale=time_scale)


SYS3_2_RATIONAL = (
    "-y - b11*x*y + b20*x^2 - b20*y^2 + b11*b20/2*x^3 - 2*b11*b20*x*y^2 + b20^2*x^2*y",
    "x + b11/2*x^2 + 2*b20*x*y - 2*b11*y^2 + b11*b20/2*x^2*y + b20^2*x*y^2 - 2*b11*b20*y^3",
)


def sys3_2_rational() -> PlanarSystem:
    """The system at ``B`` for condition (3), in coordinates scaled so that no
    square roots appear (``(x, y) -> (x, y)/sqrt(2)`` of the irrational form)."""
    return PlanarSystem.from_strings(*SYS3_2_RATIONAL, params=("b11", "b20"))


def sys3_2_derived(b11, b20) -> PlanarSystem:
    """Condition (3) with ``a20 = 2 b11`` moved to ``B = (0, -2/b11)`` by
    ``x = V``, ``y = -2/b11 - U - (2 b20/b11) V`` with time reversed."""
    b11, b20 = QQI.convert(b11), QQI.convert(b20)
    if not b11:
        raise ValueError("B exists only for b11 != 0")
    spec = condition("3")
    s = spec.system().substitute({"a20": 2 * b11, "b20": b20}, params=())
    # inverse of U = -(2 b20/b11) x - y, V = x
    M = ((0, 1), (-1, -2 * b20 / b11))
    return PlanarSystem(*shifted_field(s, (0, -2 / b11), M, time_scale=-1))
