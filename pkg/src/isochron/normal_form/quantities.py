"""Linearizability and focus quantities by degree-wise normalization.

Everything happens in the complex form ``z' = z + X``, ``w' = -w - Y``.
For a series ``s`` the derivative along the flow is

    s' = (s_z z - s_w w) + (s_z X - s_w Y),

and ``s_z z - s_w w`` multiplies the monomial ``z^a w^b`` by ``a - b``.
Asking ``s' = lam * s`` gives, monomial by monomial,

    (a - b - lam) * s_ab + [s_z X - s_w Y]_ab = 0,

with ``lam = 1`` for ``z1 = z + ...``, ``lam = -1`` for ``w1 = w + ...`` and
``lam = 0`` for a first integral ``zw + ...``.  Where ``a - b = lam`` the
coefficient cannot be chosen; the bracket there is the obstruction and the
series coefficient is set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..arith import rational
from ..poly import Poly, PolyRing
from .system import ComplexSystem, PlanarSystem, complexify, imag_part, real_part

DEFAULT_TRUNCATION = 9


class ObstructionError(ArithmeticError):
    """A resonant obstruction is nonzero, so no linearizing series exists."""

    def __init__(self, k, which, value):
        super().__init__(f"obstruction {which}{k} = {value} is not zero")
        self.k = k
        self.which = which
        self.value = value


@dataclass(frozen=True)
class QuantityPair:
    k: int
    I: object
    J: object

    def real_split(self):
        """``(Re I, Im I, Re J, Im J)`` for real parameters."""
        return real_part(self.I), imag_part(self.I), real_part(self.J), imag_part(self.J)

    def generators(self):
        """The nonzero members of :meth:`real_split`."""
        return [g for g in self.real_split() if g]

    def vanishes(self) -> bool:
        return not self.I and not self.J

    def as_json(self) -> dict:
        re_i, im_i, re_j, im_j = self.real_split()
        return {"k": self.k, "I_re": str(re_i), "I_im": str(im_i), "J_re": str(re_j), "J_im": str(im_j)}


@dataclass(frozen=True)
class FocusQuantity:
    k: int
    g: object

    @property
    def lyapunov(self):
        """``i*g``: real for real systems, positive for an unstable focus
        when it is the first nonzero quantity."""
        return -imag_part(self.g)

    def as_json(self) -> dict:
        return {"k": self.k, "g": str(self.g), "g_re": str(real_part(self.g)), "g_im": str(imag_part(self.g)), "lyapunov": str(self.lyapunov)}


@dataclass(frozen=True)
class NormalizingSeries:
    """Truncated ``z1 = z + sum c_jk z^j w^k`` and ``w1 = w + sum d_jk z^j w^k``."""

    z1: Poly
    w1: Poly
    order: int
    obstructions: dict = field(default_factory=dict, compare=False)

    def _coeffs(self, series, lin):
        ring = series.ring
        out = {}
        for P, c in series.terms.items():
            e = ring.unpack(P)
            if e != lin:
                out[e] = c
        return out

    @property
    def c(self) -> dict:
        return self._coeffs(self.z1, (1, 0))

    @property
    def d(self) -> dict:
        return self._coeffs(self.w1, (0, 1))


def _homogeneous(p: Poly) -> dict[int, Poly]:
    return p.homogeneous_components()


def _scale(c, q):
    if isinstance(c, Poly):
        return c.scale(q)
    return c * q


def _normalize(cs: ComplexSystem, seed: Poly, lam: int, N: int):
    """Solve the homological equations for the series starting at ``seed``.

    Returns ``(series, obstructions)`` where ``obstructions`` maps resonant
    exponent pairs to the coefficient left over there.
    """
    ring = cs.ring
    Xh = _homogeneous(cs.X)
    Yh = _homogeneous(cs.Y)
    if any(d < 2 for d in list(Xh) + list(Yh)):
        raise ValueError("X and Y must start at degree two")
    d0 = seed.total_degree()
    comps: dict[int, Poly] = {d0: seed}
    dz: dict[int, Poly] = {d0: seed.diff(0)}
    dw: dict[int, Poly] = {d0: seed.diff(1)}
    obstructions = {}
    for d in range(d0 + 1, N + 1):
        acc: dict = {}
        for m in comps:
            j = d - m + 1
            if j in Xh:
                _add_into(acc, (dz[m] * Xh[j]).terms, 1)
            if j in Yh:
                _add_into(acc, (dw[m] * Yh[j]).terms, -1)
        new = {}
        for P, c in acc.items():
            a, b = ring.unpack(P)
            div = a - b - lam
            if div == 0:
                obstructions[(a, b)] = c
            else:
                new[P] = _scale(c, rational(-1, div))
        comp = Poly(ring, new)
        if comp:
            comps[d] = comp
            dz[d] = comp.diff(0)
            dw[d] = comp.diff(1)
    series = ring.zero
    for d in sorted(comps):
        series = series + comps[d]
    return series, obstructions


def _add_into(acc, terms, sign):
    for P, c in terms.items():
        v = acc.get(P)
        if v is None:
            acc[P] = c if sign > 0 else -c
        else:
            v = v + c if sign > 0 else v - c
            if v:
                acc[P] = v
            else:
                del acc[P]


def _as_complex(s) -> ComplexSystem:
    if isinstance(s, ComplexSystem):
        return s
    if isinstance(s, PlanarSystem):
        return complexify(s)
    raise TypeError(f"expected a planar or complex system, got {type(s).__name__}")


def _zero(ring: PolyRing):
    return ring.domain.zero


def linearizability_quantities(s, K: int, *, with_series: bool = False):
    """The first ``K`` pairs ``(I_k, J_k)``; optionally also the series."""
    if K < 1:
        raise ValueError("K must be at least 1")
    cs = _as_complex(s)
    N = 2 * K + 1
    z, w = cs.ring.gens
    zs, zobs = _normalize(cs, z, 1, N)
    ws, wobs = _normalize(cs, w, -1, N)
    zero = _zero(cs.ring)
    pairs = [
        QuantityPair(k, zobs.get((k + 1, k), zero), wobs.get((k, k + 1), zero))
        for k in range(1, K + 1)
    ]
    if with_series:
        obs = {("I", a - 1): c for (a, b), c in zobs.items()}
        obs.update({("J", a): c for (a, b), c in wobs.items()})
        return pairs, NormalizingSeries(zs, ws, N, obs)
    return pairs


def focus_quantities(s, K: int) -> list[FocusQuantity]:
    """``g_k`` = obstruction at ``(zw)^(k+1)`` for a first integral ``zw + ...``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    cs = _as_complex(s)
    z, w = cs.ring.gens
    _, obs = _normalize(cs, z * w, 0, 2 * K + 2)
    zero = _zero(cs.ring)
    return [FocusQuantity(k, obs.get((k + 1, k + 1), zero)) for k in range(1, K + 1)]


def first_integral_series(s, N: int):
    """Truncated ``Psi = zw + ...`` and the focus obstructions met on the way."""
    cs = _as_complex(s)
    z, w = cs.ring.gens
    return _normalize(cs, z * w, 0, N)


def linearizing_series(s, N: int = DEFAULT_TRUNCATION) -> NormalizingSeries:
    """Series through degree ``N``; raises :class:`ObstructionError` when any
    obstruction up to that degree is nonzero."""
    cs = _as_complex(s)
    z, w = cs.ring.gens
    zs, zobs = _normalize(cs, z, 1, N)
    ws, wobs = _normalize(cs, w, -1, N)
    failures = []
    for (a, b), c in zobs.items():
        if c:
            failures.append((b, 0, "I", c))
    for (a, b), c in wobs.items():
        if c:
            failures.append((a, 1, "J", c))
    if failures:
        k, _, which, c = min(failures, key=lambda t: (t[0], t[1]))
        raise ObstructionError(k, which, c)
    return NormalizingSeries(zs, ws, N, {})


def flow_derivative(cs: ComplexSystem, f: Poly) -> Poly:
    """``f_z z' + f_w w'``."""
    return f.diff(0) * cs.zdot + f.diff(1) * cs.wdot


def linearization_residual(s, series: NormalizingSeries, N: int | None = None):
    """``(z1' - z1, w1' + w1)`` truncated at degree ``N``."""
    cs = _as_complex(s)
    N = series.order if N is None else N
    rz = (flow_derivative(cs, series.z1) - series.z1).truncate(N)
    rw = (flow_derivative(cs, series.w1) + series.w1).truncate(N)
    return rz, rw
