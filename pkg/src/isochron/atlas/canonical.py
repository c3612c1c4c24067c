"""Polar normal forms (a)-(e) of isochronous cubic systems and the linear
changes taking each linearizability condition to one of them.

A form is stored by its polar data

    r' = r^2 A(theta) + r^3 B(theta),   theta' = 1 + r C(theta),

with ``A``, ``C`` combinations of cos/sin of theta and 3*theta and ``B`` of
1, cos 2theta, sin 2theta.  The Cartesian system has ``x' = -y + p2 + p3``,
``y' = x + q2 + q3`` where, writing c = cos, s = sin on the unit circle,

    c*p2 + s*q2 = A,   c*q2 - s*p2 = C,   p3 = x*B(x, y),  q3 = y*B(x, y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from ..arith import QQ, QQI, rational
from ..normal_form.system import PlanarSystem, coefficient_ring
from ..poly import Poly, PolyRing, parse

HARMONICS_13 = ("cos1", "sin1", "cos3", "sin3")
HARMONICS_02 = ("const", "cos2", "sin2")

FORMS_FILE = "forms.txt"


def read_forms(text: str) -> dict:
    """Parse the form table: ``form <id> <k names>`` starts a block, then
    lines ``<A|B|C> <harmonic> = <expression>``."""
    forms: dict = {}
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "form":
            current = forms.setdefault(words[1], {"k": tuple(words[2:]), "A": {}, "B": {}, "C": {}})
            continue
        lhs, eq, rhs = line.partition("=")
        part, _, harmonic = lhs.strip().partition(" ")
        harmonic = harmonic.strip()
        if current is None or not eq or part not in "ABC" or harmonic not in HARMONICS_13 + HARMONICS_02:
            raise ValueError(f"cannot read form table line {n}: {raw!r}")
        current[part][harmonic] = rhs.strip()
    return forms


FORMS = read_forms(resources.files(__package__).joinpath("data", FORMS_FILE).read_text(encoding="utf-8"))


class DegenerateTransform(ZeroDivisionError):
    def __init__(self, what):
        super().__init__(f"the change of coordinates needs {what} != 0")
        self.what = what


@dataclass(frozen=True)
class CanonicalForm:
    """Polar data of a form; coefficients are numbers or polynomials in the k's."""

    id: str
    A: dict
    B: dict
    C: dict
    k: dict = field(default_factory=dict)

    def as_json(self):
        show = lambda d: {h: str(v) for h, v in d.items() if v}
        return {"form": self.id, "k": {n: str(v) for n, v in self.k.items()}, "r2": show(self.A), "r3": show(self.B), "theta_r": show(self.C)}

    def __str__(self):
        def trig(d, names):
            parts = []
            for h in names:
                v = d.get(h)
                if not v:
                    continue
                basis = {"const": "", "cos1": "cos(t)", "sin1": "sin(t)", "cos2": "cos(2t)", "sin2": "sin(2t)", "cos3": "cos(3t)", "sin3": "sin(3t)"}[h]
                parts.append(f"({v})" + (f"*{basis}" if basis else ""))
            return " + ".join(parts) or "0"

        return (
            f"dr = r^2*({trig(self.A, HARMONICS_13)}) + r^3*({trig(self.B, HARMONICS_02)})\n"
            f"dt = 1 + r*({trig(self.C, HARMONICS_13)})"
        )


def canonical_form(id: str, k: dict | None = None) -> CanonicalForm:
    """Form ``id``; symbolic in its k's when ``k`` is None, else evaluated."""
    data = FORMS[id]
    names = data["k"]
    if k is None:
        dom = coefficient_ring(names)
        conv = lambda e: parse(e, dom)
    else:
        missing = set(names) - set(k)
        if missing:
            raise KeyError(f"form ({id}) needs values for {sorted(missing)}")
        dom = coefficient_ring(names)
        vals = {n: QQI.convert(k[n]) for n in names}
        conv = lambda e: parse(e, dom).evaluate(vals)
    pick = lambda part: {h: conv(e) for h, e in data[part].items()}
    kk = {} if k is None else {n: QQI.convert(k[n]) for n in names}
    return CanonicalForm(id, pick("A"), pick("B"), pick("C"), kk)


# ---------------------------------------------------------------------------
# polar <-> Cartesian
# ---------------------------------------------------------------------------

def _coeff_domain(form: CanonicalForm):
    for part in (form.A, form.B, form.C):
        for v in part.values():
            if isinstance(v, Poly):
                return v.ring
    return QQI


def _harmonic_forms(ring: PolyRing):
    """Homogeneous forms in (x, y) equal on the unit circle to each harmonic,
    cubic for odd ones and quadratic for even ones."""
    x, y = ring.gens
    r2 = x**2 + y**2
    return {
        "cos1": x * r2,
        "sin1": y * r2,
        "cos3": x**3 - 3 * x * y**2,
        "sin3": 3 * x**2 * y - y**3,
        "const": r2,
        "cos2": x**2 - y**2,
        "sin2": 2 * x * y,
    }


def _combine(part: dict, basis: dict, ring: PolyRing) -> Poly:
    total = ring.zero
    for h, v in part.items():
        if v:
            total = total + basis[h] * ring.constant(v)
    return total


def polar_to_cartesian(form: CanonicalForm, variables=("x", "y")) -> PlanarSystem:
    ring = PolyRing(variables, _coeff_domain(form))
    x, y = ring.gens
    basis = _harmonic_forms(ring)
    A = _combine(form.A, basis, ring)
    C = _combine(form.C, basis, ring)
    B = _combine(form.B, basis, ring)
    r2 = x**2 + y**2
    p2 = (x * A - y * C).exact_div(r2)
    q2 = (y * A + x * C).exact_div(r2)
    return PlanarSystem(-y + p2 + x * B, x + q2 + y * B)


def _to_harmonics(f: Poly, degree: int) -> dict:
    """Fourier coefficients of a homogeneous form on the unit circle.

    Uses ``cos = (e + 1/e)/2`` and ``sin = (e - 1/e)/(2 I)``; the exponent of
    ``e`` is the harmonic.
    """
    ring = f.ring
    dom = ring.domain
    I = dom.imaginary_unit()
    half = QQI.convert(rational(1, 2))
    cos_parts = ((1, half), (-1, half))
    sin_parts = ((1, -half * QQI.I), (-1, half * QQI.I))
    spectrum: dict = {}
    for P, coef in f.terms.items():
        a, b = ring.unpack(P)
        terms = {0: QQI.one}
        for parts in [cos_parts] * a + [sin_parts] * b:
            nxt: dict = {}
            for m, v in terms.items():
                for shift, w in parts:
                    nxt[m + shift] = nxt.get(m + shift, QQI.zero) + v * w
            terms = nxt
        for m, v in terms.items():
            if v:
                add = coef * dom.convert(v)
                spectrum[m] = spectrum[m] + add if m in spectrum else add
    zero = dom.zero
    out = {}
    if spectrum.get(0):
        out["const"] = spectrum[0]
    for m in range(1, degree + 1):
        pos, neg = spectrum.get(m, zero), spectrum.get(-m, zero)
        if pos + neg:
            out[f"cos{m}"] = pos + neg
        if pos - neg:
            out[f"sin{m}"] = (pos - neg) * I
    return out


class NotPolarForm(ValueError):
    pass


def cartesian_to_polar(s: PlanarSystem, id: str = "?") -> CanonicalForm:
    """Polar data of a cubic system ``x' = -y + p2 + p3``, ``y' = x + q2 + q3``
    with ``x q3 = y p3`` (no r^2 term in theta')."""
    x, y = s.ring.gens
    p, q = s.nonlinear_parts()
    p2, p3 = p.homogeneous_component(2), p.homogeneous_component(3)
    q2, q3 = q.homogeneous_component(2), q.homogeneous_component(3)
    if p.total_degree() > 3 or q.total_degree() > 3:
        raise NotPolarForm("degree above three")
    if x * q3 - y * p3:
        raise NotPolarForm("the angular equation has an r^2 term")
    A = x * p2 + y * q2
    C = x * q2 - y * p2
    B4 = x * p3 + y * q3
    return CanonicalForm(id, _to_harmonics(A, 3), _to_harmonics(B4, 4), _to_harmonics(C, 3))


def same_polar_data(f: CanonicalForm, g: CanonicalForm) -> bool:
    def norm(d):
        return {h: v for h, v in d.items() if v}

    return all(norm(getattr(f, p)) == norm(getattr(g, p)) for p in "ABC")


# ---------------------------------------------------------------------------
# linear changes of coordinates
# ---------------------------------------------------------------------------

def change_coordinates(P: Poly, Q: Poly, M, shift=(0, 0), time_scale=1):
    """Substitute ``(x, y) = shift + M (X, Y)`` into the field ``(P, Q)`` and
    multiply time by ``time_scale``; returns the new pair in the same ring
    (``X, Y`` reuse the old names)."""
    ring = P.ring
    x, y = ring.gens
    conv = lambda v: v if isinstance(v, Poly) else ring.constant(v)
    (m11, m12), (m21, m22) = [[conv(v) for v in row] for row in M]
    det = m11 * m22 - m12 * m21
    if not det:
        raise DegenerateTransform("det M")
    if not det.is_constant():
        raise TypeError("the matrix must have a constant determinant")
    xs, ys = ring.variables
    images = {xs: conv(shift[0]) + x * m11 + y * m12, ys: conv(shift[1]) + x * m21 + y * m22}
    P1, Q1 = P.subs(images), Q.subs(images)
    scale = conv(time_scale) * ring.constant(ring.domain.one / det.constant_coeff())
    return (P1 * m22 - Q1 * m12) * scale, (Q1 * m11 - P1 * m21) * scale


def apply_linear_change(s: PlanarSystem, M, time_scale=1) -> PlanarSystem:
    """Substitute ``(x, y) = M (X, Y)`` and multiply time by ``time_scale``."""
    return PlanarSystem(*change_coordinates(s.P, s.Q, M, time_scale=time_scale))


@dataclass(frozen=True)
class CanonicalReduction:
    condition: str
    matrix: tuple
    time_scale: object
    form: CanonicalForm
    system: PlanarSystem
    transformed: PlanarSystem

    @property
    def matches(self) -> bool:
        target = polar_to_cartesian(self.form)
        ring = self.transformed.ring
        return ring.convert(target.P) == self.transformed.P and ring.convert(target.Q) == self.transformed.Q

    def as_json(self):
        return {
            "condition": self.condition,
            "form": self.form.id,
            "k": {n: str(v) for n, v in self.form.k.items()},
            "matrix": [[str(v) for v in row] for row in self.matrix],
            "time_scale": str(self.time_scale),
            "matches": self.matches,
            "transformed": {"dx": str(self.transformed.P), "dy": str(self.transformed.Q)},
        }


def _q(v):
    return QQI.convert(v)


def reduce_to_canonical(id, params: dict) -> CanonicalReduction:
    """Take the system of condition ``id`` (L, 2, 3 or 4) at ``params`` to
    form (c), (a), (b) or (d)."""
    from .conditions import condition

    cid = str(id).upper() if str(id).lower() == "l" else str(id)
    spec = condition(cid)
    point = {n: _q(params[n]) for n in spec.free}
    s = spec.system().substitute(point, params=())
    one = QQI.one
    if cid == "L":
        a20, b20, r20, r11 = (point[n] for n in ("a20", "b20", "r20", "r11"))
        n = a20**2 + b20**2
        if not n:
            raise DegenerateTransform("a20^2 + b20^2")
        M = ((-a20 / n, b20 / n), (b20 / n, a20 / n))
        ts = -one
        k = {
            "k1": one,
            # sign of a20^2*r20 fixed by expanding the transformed system
            "k2": (a20 * b20 * r11 - a20**2 * r20 + b20**2 * r20) / n**2,
            "k3": (a20**2 * r11 - b20**2 * r11 + 4 * a20 * b20 * r20) / (2 * n**2),
        }
        fid = "c"
    elif cid == "2":
        a20, b20 = point["a20"], point["b20"]
        if not a20:
            raise DegenerateTransform("a20")
        c = _q(rational(4, 3)) / a20
        M = ((c, 0), (0, -c))
        ts = -one
        k = {"k1": _q(rational(4, 3)) * b20 / a20}
        fid = "a"
    elif cid == "3":
        a20, b20 = point["a20"], point["b20"]
        if not a20:
            raise DegenerateTransform("a20")
        c = _q(rational(16, 3)) / a20
        M = ((c, 0), (0, c))
        ts = one
        k = {"k1": _q(rational(16, 3)) * b20 / a20}
        fid = "b"
    elif cid == "4":
        M = ((0, 1), (1, 0))
        ts = -one
        k = {"k1": point["b20"], "k2": -point["a20"], "k3": -point["r11"] / 2}
        fid = "d"
    else:
        raise ValueError(f"condition {id!r} has no canonical polar form")
    M = tuple(tuple(_q(v) for v in row) for row in M)
    t = apply_linear_change(s, M, ts)
    return CanonicalReduction(cid, M, ts, canonical_form(fid, k), s, t)


# ---------------------------------------------------------------------------
# form (e) with k3 = eta2 = 0 after the rotation x1 = x + k2/k1 y
# ---------------------------------------------------------------------------

E3_DX = "-y + k1*x^2 - k1*k4/k2*x^2*y"
E3_DY = "x + k1*x*y - k1*k4/k2*x*y^2"


def e3_system(k1=None, k2=None, k4=None) -> PlanarSystem:
    """``x' = -y + k1 x^2 - (k1 k4/k2) x^2 y``, ``y' = x + k1 x y - (k1 k4/k2) x y^2``;
    symbolic in ``k1, k4`` over ``Q(i)[k1, k4]`` when ``k2`` is None (then
    ``k2`` is taken as 1), else numeric."""
    if k2 is None:
        return PlanarSystem.from_strings(E3_DX.replace("/k2", ""), E3_DY.replace("/k2", ""), ("k1", "k4"))
    vals = {"k1": QQI.convert(k1), "k2": QQI.convert(k2), "k4": QQI.convert(k4)}
    if not vals["k2"]:
        raise DegenerateTransform("k2")
    c = vals["k1"] * vals["k4"] / vals["k2"]
    ring = PolyRing(("x", "y"), QQI)
    x, y = ring.gens
    k = ring.constant(vals["k1"])
    cc = ring.constant(c)
    return PlanarSystem(-y + k * x**2 - cc * x**2 * y, x + k * x * y - cc * x * y**2)


def e3_as_condition4() -> bool:
    """(e3) is condition (4) at ``b20 = 0`` with ``a20 = k1`` and
    ``r11 = -k1 k4/k2``; checked as a polynomial identity in ``k1, k4``
    (``k2 = 1``)."""
    from .conditions import condition

    spec = condition("4")
    s4 = spec.system().substitute({"a20": "k1", "b20": "0", "r11": "-k1*k4"}, params=("k1", "k4"))
    e3 = e3_system()
    return s4.P == e3.P and s4.Q == e3.Q
