"""Planar systems with parameters and their complex form."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..arith import QQ, QQI, GaussianRational, rational
from ..poly import Poly, PolyRing, PolySyntaxError, parse

Z, W = "z", "w"


def coefficient_ring(params) -> PolyRing | object:
    """``Q(i)[params]``, or plain ``Q(i)`` when there are no parameters."""
    params = tuple(params)
    return PolyRing(params, QQI) if params else QQI


def param_names(domain) -> tuple[str, ...]:
    return domain.variables if isinstance(domain, PolyRing) else ()


def real_part(c):
    """Real part of a coefficient, taking every parameter to be real."""
    if isinstance(c, Poly):
        ring = PolyRing(c.ring.variables, QQ, c.ring.order)
        return Poly(ring, {P: v.re for P, v in c.terms.items() if v.re})
    if isinstance(c, GaussianRational):
        return c.re
    return rational(c)


def imag_part(c):
    if isinstance(c, Poly):
        ring = PolyRing(c.ring.variables, QQ, c.ring.order)
        return Poly(ring, {P: v.im for P, v in c.terms.items() if v.im})
    if isinstance(c, GaussianRational):
        return c.im
    return rational(0)


class SystemShapeError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarSystem:
    """``x' = P(x, y)``, ``y' = Q(x, y)`` with ``P = -y + ...`` and ``Q = x + ...``."""

    P: Poly
    Q: Poly

    def __post_init__(self):
        if self.P.ring != self.Q.ring:
            raise SystemShapeError("P and Q live in different rings")
        ring = self.P.ring
        if ring.ngens != 2:
            raise SystemShapeError("a planar system needs exactly two state variables")
        x, y = ring.gens
        for name, part, expect in (("P", self.P, -y), ("Q", self.Q, x)):
            low = part.truncate(1)
            if low != expect:
                raise SystemShapeError(
                    f"{name} must start with {expect} and have no other terms of degree < 2, got {low}"
                )

    # -- construction --------------------------------------------------------
    @classmethod
    def from_strings(cls, dx: str, dy: str, params=(), variables=("x", "y")) -> "PlanarSystem":
        ring = PolyRing(variables, coefficient_ring(params))
        return cls(parse(dx, ring), parse(dy, ring))

    # -- inspection ------------------------------------------------------------
    @property
    def ring(self) -> PolyRing:
        return self.P.ring

    @property
    def domain(self):
        return self.P.ring.domain

    @property
    def params(self) -> tuple[str, ...]:
        return param_names(self.domain)

    @property
    def variables(self) -> tuple[str, str]:
        return self.ring.variables

    @property
    def degree(self) -> int:
        return max(self.P.total_degree(), self.Q.total_degree())

    def nonlinear_parts(self) -> tuple[Poly, Poly]:
        x, y = self.ring.gens
        return self.P + y, self.Q - x

    def __str__(self):
        x, y = self.variables
        return f"d{x} = {self.P}\nd{y} = {self.Q}"

    # -- transformations -------------------------------------------------------
    def substitute(self, values: dict, params=None) -> "PlanarSystem":
        """Substitute parameters by numbers or by polynomials in ``params``."""
        return PlanarSystem(*substitute_params([self.P, self.Q], values, params, self.variables))

    def is_real(self) -> bool:
        """True when no coefficient involves ``I``."""
        return all(not imag_part(c) for p in (self.P, self.Q) for c in p.terms.values())


def substitute_params(polys, values: dict, params=None, variables=None):
    """Replace parameters inside the coefficients of ``polys``.

    ``values`` maps parameter names to numbers, strings or polynomials in the
    new parameter list ``params`` (default: the old parameters that are not
    substituted).
    """
    src = polys[0].ring
    dom = src.domain
    old = param_names(dom)
    unknown = set(values) - set(old)
    if unknown:
        raise KeyError(f"unknown parameters {sorted(unknown)}")
    if params is None:
        params = [p for p in old if p not in values]
    new_dom = coefficient_ring(params)
    target = PolyRing(variables or src.variables, new_dom, src.order)
    if not old:
        return [target.convert(p) for p in polys]
    images = {}
    for name in old:
        v = values.get(name, name if name in params else None)
        if v is None:
            raise KeyError(f"parameter {name!r} is neither substituted nor kept")
        images[name] = _to_domain(v, new_dom)
    if isinstance(new_dom, PolyRing):
        conv = lambda c: c.subs(images, ring=new_dom)
    else:
        conv = lambda c: c.evaluate(images)
    return [p.map_coeffs(conv, target) for p in polys]


def _to_domain(v, dom):
    if isinstance(dom, PolyRing):
        if isinstance(v, str):
            return parse(v, dom)
        return dom.convert(v)
    if isinstance(v, str):
        from ..poly import evaluate_expression

        return evaluate_expression(v, {}, number=dom.convert, imaginary=dom.I)
    return dom.convert(v)


@dataclass(frozen=True)
class ComplexSystem:
    """``z' = z + X(z, w)``, ``w' = -w - Y(z, w)``."""

    X: Poly
    Y: Poly

    @property
    def ring(self) -> PolyRing:
        return self.X.ring

    @property
    def domain(self):
        return self.X.ring.domain

    @property
    def params(self):
        return param_names(self.domain)

    @property
    def zdot(self) -> Poly:
        z, _ = self.ring.gens
        return z + self.X

    @property
    def wdot(self) -> Poly:
        _, w = self.ring.gens
        return -w - self.Y

    def substitute(self, values: dict, params=None) -> "ComplexSystem":
        return ComplexSystem(*substitute_params([self.X, self.Y], values, params))

    def __str__(self):
        return f"dz = {self.zdot}\ndw = {self.wdot}"


def complexify(s: PlanarSystem) -> ComplexSystem:
    """Pass to ``z = x + i y``, ``w = x - i y`` and rescale time by ``i``."""
    dom = s.domain
    zw = PolyRing((Z, W), dom)
    z, w = zw.gens
    i = zw.imaginary_unit()
    half = rational(1, 2)
    xs, ys = s.variables
    images = {xs: (z + w) * half, ys: (z - w) * (-i) * half}
    p, q = s.nonlinear_parts()
    p = p.subs(images, ring=zw)
    q = q.subs(images, ring=zw)
    return ComplexSystem(q - i * p, q + i * p)


def realify(c: ComplexSystem, variables=("x", "y")) -> PlanarSystem:
    """Inverse of :func:`complexify`."""
    dom = c.domain
    xy = PolyRing(variables, dom)
    x, y = xy.gens
    i = xy.imaginary_unit()
    X = c.X.subs({Z: x + i * y, W: x - i * y}, ring=xy)
    Y = c.Y.subs({Z: x + i * y, W: x - i * y}, ring=xy)
    half = rational(1, 2)
    p = i * (X - Y) * half
    q = (X + Y) * half
    return PlanarSystem(-y + p, x + q)


# ---------------------------------------------------------------------------
# system files
# ---------------------------------------------------------------------------

class SystemFileError(ValueError):
    def __init__(self, message, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.line = line


_ASSIGN = re.compile(r"d\s*([A-Za-z_]\w*)\s*(?:/\s*dt)?\s*=\s*(.*)\Z")


def read_system(text: str) -> PlanarSystem:
    """Parse ``var x y`` / ``param ...`` / ``dx = ...`` / ``dy = ...`` lines."""
    variables = None
    params: list[str] = []
    rhs: dict[str, tuple[int, str]] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "var":
            variables = rest.split()
            if len(variables) != 2:
                raise SystemFileError("'var' needs exactly two names", n)
        elif head == "param":
            params.extend(rest.replace(",", " ").split())
        else:
            m = _ASSIGN.match(line)
            if not m:
                raise SystemFileError(f"cannot read {line!r}", n)
            rhs[m.group(1)] = (n, m.group(2))
    variables = variables or ["x", "y"]
    ring = PolyRing(variables, coefficient_ring(params))
    polys = []
    for v in variables:
        if v not in rhs:
            raise SystemFileError(f"missing equation d{v} = ...")
        n, expr = rhs[v]
        try:
            polys.append(parse(expr, ring))
        except PolySyntaxError as exc:
            raise SystemFileError(str(exc), n) from None
    try:
        return PlanarSystem(*polys)
    except SystemShapeError as exc:
        raise SystemFileError(str(exc)) from None


def load_system(path) -> PlanarSystem:
    with open(path, encoding="utf-8") as fh:
        return read_system(fh.read())


def render_system(s: PlanarSystem) -> str:
    x, y = s.variables
    lines = [f"var {x} {y}"]
    if s.params:
        lines.append("param " + " ".join(s.params))
    lines += [f"d{x} = {s.P}", f"d{y} = {s.Q}"]
    return "\n".join(lines) + "\n"
