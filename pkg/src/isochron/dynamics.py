"""Numerical corroboration: return times and return maps of real planar
systems near a nondegenerate monodromic origin.

Orbits start on the section ``{y = 0, x > 0}`` and are followed until they
cross it again upward.  A center returns to its starting radius; an
isochronous one does so after time ``2*pi`` for every radius.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import RK45, solve_ivp

from .arith import QQI, rational, to_complex
from .normal_form.system import PlanarSystem

TWO_PI = 2 * math.pi
RTOL = 1e-10
ATOL = 1e-12
TOL_T = 1e-6
TOL_R = 1e-7
EVENT_TOL = 1e-10
ESCAPE_RADIUS = 1e6


class IntegrationError(RuntimeError):
    pass


class FiniteTimeEscape(IntegrationError):
    def __init__(self, t, state):
        super().__init__(f"solution left the integration domain at t = {t:.6g} (state {list(state)})")
        self.t = t
        self.state = state


class NoReturnError(IntegrationError):
    def __init__(self, r0, t_max):
        super().__init__(f"no return to the section from r0 = {r0} within t = {t_max}")
        self.r0 = r0
        self.t_max = t_max


class NotRealError(ValueError):
    pass


# ---------------------------------------------------------------------------
# numeric systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericSystem:
    """``P = sum P[i, j] x^i y^j`` and likewise ``Q``, as real arrays."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        if self.P.shape != self.Q.shape or self.P.ndim != 2:
            raise ValueError("coefficient arrays must have the same square shape")
        if self.P[0, 1] != -1 or self.P[1, 0] != 0 or self.Q[1, 0] != 1 or self.Q[0, 1] != 0:
            raise ValueError("the linear part must be (-y, x)")
        if self.P[0, 0] or self.Q[0, 0]:
            raise ValueError("the origin must be an equilibrium")

    @classmethod
    def from_system(cls, s: PlanarSystem, params: dict | None = None) -> "NumericSystem":
        """Instantiate at a real parameter point; floats are taken exactly."""
        params = params or {}
        if s.params:
            values = {k: _exact(v) for k, v in params.items() if k in s.params}
            missing = set(s.params) - set(values)
            if missing:
                raise KeyError(f"no value for parameters {sorted(missing)}")
            s = s.substitute(values, params=())
        deg = s.degree
        arrays = []
        for p in (s.P, s.Q):
            a = np.zeros((deg + 1, deg + 1))
            for M, c in p.terms.items():
                i, j = p.ring.unpack(M)
                z = to_complex(c)
                if z.imag:
                    raise NotRealError("the system has a non-real coefficient at this point")
                a[i, j] = z.real
            arrays.append(a)
        return cls(*arrays)

    @classmethod
    def from_strings(cls, dx: str, dy: str, params: dict | None = None) -> "NumericSystem":
        names = tuple(params or ())
        return cls.from_system(PlanarSystem.from_strings(dx, dy, names), params)

    @property
    def degree(self) -> int:
        return self.P.shape[0] - 1

    def _terms(self):
        cache = getattr(self, "_cache", None)
        if cache is None:
            cache = [[(i, j, a[i, j]) for i, j in zip(*np.nonzero(a))] for a in (self.P, self.Q)]
            object.__setattr__(self, "_cache", cache)
        return cache

    def __call__(self, t, s):
        x, y = s
        tp, tq = self._terms()
        return [sum(c * x**i * y**j for i, j, c in tp), sum(c * x**i * y**j for i, j, c in tq)]


def _exact(v):
    if isinstance(v, float):
        return rational(Fraction(v))
    return QQI.convert(v) if isinstance(v, complex) else v


def linear_system() -> NumericSystem:
    return NumericSystem(np.array([[0.0, -1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]))


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray
    solution: object

    @property
    def end(self) -> np.ndarray:
        return self.states[:, -1]


def _escape_event(t, s):
    return ESCAPE_RADIUS - math.hypot(s[0], s[1])


_escape_event.terminal = True


def integrate(sys: NumericSystem, state, t_end: float, rtol: float = RTOL, atol: float = ATOL) -> Trajectory:
    """Dormand-Prince 5(4) with dense output."""
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    sol = solve_ivp(sys, (0.0, t_end), list(state), method="RK45", rtol=rtol, atol=atol, dense_output=True, events=_escape_event)
    if sol.status == -1:
        raise IntegrationError(sol.message)
    if sol.status == 1 or not np.all(np.isfinite(sol.y[:, -1])):
        raise FiniteTimeEscape(sol.t[-1], sol.y[:, -1])
    return Trajectory(sol.t, sol.y, sol.sol)


def _bisect(dense, t0, t1, tol=EVENT_TOL):
    """Root of ``y(t)`` in ``[t0, t1]`` with ``y(t0) < 0 <= y(t1)``."""
    while t1 - t0 > tol:
        mid = 0.5 * (t0 + t1)
        if dense(mid)[1] < 0:
            t0 = mid
        else:
            t1 = mid
    return 0.5 * (t0 + t1)


def return_time_and_map(sys: NumericSystem, r0: float, rtol: float = RTOL, atol: float = ATOL, t_max: float = 20 * TWO_PI):
    """First return of the orbit through ``(r0, 0)`` to ``{y = 0, x > 0}``
    crossed upward; returns ``(T, r1)``."""
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    solver = RK45(sys, 0.0, [r0, 0.0], t_max, rtol=rtol, atol=atol)
    prev_t, prev = 0.0, np.array([r0, 0.0])
    while solver.status == "running":
        msg = solver.step()
        if solver.status == "failed":
            raise IntegrationError(msg or "step size underflow")
        t, cur = solver.t, solver.y
        if not np.all(np.isfinite(cur)) or math.hypot(*cur) > ESCAPE_RADIUS:
            raise FiniteTimeEscape(t, cur)
        if prev[1] < 0 <= cur[1]:
            dense = solver.dense_output()
            tc = _bisect(dense, prev_t, t)
            xc = dense(tc)[0]
            if xc > 0:
                return float(tc), float(xc)
        prev_t, prev = t, cur
    raise NoReturnError(r0, t_max)


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------

ISOCHRONOUS = "isochronous center"
NON_ISOCHRONOUS = "non-isochronous center"
STABLE_FOCUS = "focus (stable)"
UNSTABLE_FOCUS = "focus (unstable)"
INCONCLUSIVE = "inconclusive"


@dataclass
class ScanReport:
    radii: list
    times: list
    returns: list
    verdict: str
    tol_T: float = TOL_T
    tol_r: float = TOL_R
    rtol: float = RTOL
    atol: float = ATOL

    @property
    def period_errors(self) -> list:
        return [abs(T - TWO_PI) for T in self.times]

    @property
    def radius_errors(self) -> list:
        return [abs(r1 - r0) for r0, r1 in zip(self.radii, self.returns)]

    def as_json(self) -> dict:
        d = asdict(self)
        d["period_errors"] = self.period_errors
        d["radius_errors"] = self.radius_errors
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_json(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r0", "T", "r1", "|T-2pi|", "|r1-r0|"])
        for row in zip(self.radii, self.times, self.returns, self.period_errors, self.radius_errors):
            w.writerow([repr(v) for v in row])
        return buf.getvalue()


def classify(radii, times, returns, tol_T: float = TOL_T, tol_r: float = TOL_R) -> str:
    drift = [r1 - r0 for r0, r1 in zip(radii, returns)]
    if max(abs(d) for d in drift) < tol_r:
        if max(abs(T - TWO_PI) for T in times) < tol_T:
            return ISOCHRONOUS
        return NON_ISOCHRONOUS
    big = [d for d in drift if abs(d) >= tol_r]
    if all(d > 0 for d in big):
        return UNSTABLE_FOCUS
    if all(d < 0 for d in big):
        return STABLE_FOCUS
    return INCONCLUSIVE


def _one(args):
    sys, r0, rtol, atol, t_max = args
    return return_time_and_map(sys, r0, rtol, atol, t_max)


def period_scan(sys: NumericSystem, radii, tol_T: float = TOL_T, tol_r: float = TOL_R, rtol: float = RTOL, atol: float = ATOL, t_max: float = 20 * TWO_PI, workers: int = 1) -> ScanReport:
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(a >= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly ascending")
    jobs = [(sys, r, rtol, atol, t_max) for r in radii]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one, jobs))
    else:
        results = [_one(j) for j in jobs]
    times = [T for T, _ in results]
    returns = [r1 for _, r1 in results]
    return ScanReport(radii, times, returns, classify(radii, times, returns, tol_T, tol_r), tol_T, tol_r, rtol, atol)


def verdict_is_stable(sys: NumericSystem, radii, factor: float = 10.0, **kw) -> bool:
    """The verdict survives tightening both integrator tolerances by ``factor``."""
    a = period_scan(sys, radii, **kw)
    tight = dict(kw, rtol=kw.get("rtol", RTOL) / factor, atol=kw.get("atol", ATOL) / factor)
    b = period_scan(sys, radii, **tight)
    return a.verdict == b.verdict
