"""Cofactors, recipe verification and series-level linearization checks."""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

import numpy as np

from ..arith import CC, QQI, RESIDUAL_TOL, exact_sqrt
from ..poly import Poly, PolyRing, RationalFunction, evaluate_expression, parse
from ..normal_form.system import ComplexSystem, param_names
from .recipe import FirstIntegralRecipe, LinearizationRecipe


class NotAFactor(ArithmeticError):
    """``f_z z' + f_w w'`` is not a polynomial multiple of ``f``."""

    def __init__(self, f, remainder=None, residual=None):
        msg = f"{f} is not a Darboux factor"
        if residual is not None:
            msg += f" (least-squares residual {residual:.3g})"
        elif remainder is not None:
            msg += f" (remainder {remainder})"
        super().__init__(msg)
        self.f = f
        self.remainder = remainder
        self.residual = residual


class ExpansionError(ArithmeticError):
    pass


class _NotExact(Exception):
    pass


# ---------------------------------------------------------------------------
# flat rings for exact division with parameter coefficients
# ---------------------------------------------------------------------------

def flat_ring(ring: PolyRing) -> PolyRing:
    dom = ring.domain
    if isinstance(dom, PolyRing):
        return PolyRing(ring.variables + dom.variables, dom.domain)
    return PolyRing(ring.variables, dom)


def flatten(p: Poly, flat: PolyRing) -> Poly:
    ring = p.ring
    k = flat.ngens - ring.ngens
    out = {}
    for P, c in p.terms.items():
        exps = ring.unpack(P)
        if isinstance(c, Poly):
            for Q, v in c.terms.items():
                out[flat.pack(exps + c.ring.unpack(Q))] = v
        else:
            out[flat.pack(exps + (0,) * k)] = c
    return Poly(flat, out)


def unflatten(p: Poly, ring: PolyRing) -> Poly:
    flat = p.ring
    n = ring.ngens
    dom = ring.domain
    acc: dict[int, dict] = {}
    for P, c in p.terms.items():
        exps = flat.unpack(P)
        outer = ring.pack(exps[:n])
        if isinstance(dom, PolyRing):
            acc.setdefault(outer, {})[dom.pack(exps[n:])] = c
        else:
            acc[outer] = c
    if isinstance(dom, PolyRing):
        return Poly(ring, {P: Poly(dom, t) for P, t in acc.items()})
    return Poly(ring, acc)


# ---------------------------------------------------------------------------
# cofactors
# ---------------------------------------------------------------------------

def flow_derivative(cs: ComplexSystem, f: Poly) -> Poly:
    return f.diff(0) * cs.zdot + f.diff(1) * cs.wdot


def cofactor_of(cs: ComplexSystem, f, tol: float = RESIDUAL_TOL) -> Poly:
    """The cofactor ``K`` with ``f_z z' + f_w w' = K f``."""
    f = cs.ring.convert(f)
    if not f:
        raise ValueError("the zero polynomial has no cofactor")
    D = flow_derivative(cs, f)
    if cs.domain == CC:
        return _numeric_cofactor(cs, f, D, tol)
    flat = flat_ring(cs.ring)
    (q,), r = flatten(D, flat).divmod([flatten(f, flat)])
    if r:
        raise NotAFactor(f, remainder=unflatten(r, cs.ring))
    return unflatten(q, cs.ring)


def _numeric_cofactor(cs, f, D, tol):
    ring = cs.ring
    deg = max(cs.zdot.total_degree(), cs.wdot.total_degree()) - 1
    monos = [ring.pack((a, d - a)) for d in range(deg + 1) for a in range(d, -1, -1)]
    rows: dict[int, int] = {}
    cols = []
    for m in monos:
        col = {}
        for P, c in f.terms.items():
            col[P + m] = complex(c)
        cols.append(col)
        for P in col:
            rows.setdefault(P, len(rows))
    for P in D.terms:
        rows.setdefault(P, len(rows))
    A = np.zeros((len(rows), len(cols)), dtype=complex)
    b = np.zeros(len(rows), dtype=complex)
    for j, col in enumerate(cols):
        for P, v in col.items():
            A[rows[P], j] = v
    for P, v in D.terms.items():
        b[rows[P]] = complex(v)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    scale = max(1.0, float(np.max(np.abs(b))) if len(b) else 1.0)
    residual = float(np.max(np.abs(A @ sol - b))) / scale if len(b) else 0.0
    if residual > tol:
        raise NotAFactor(f, residual=residual)
    K = {m: complex(v) for m, v in zip(monos, sol) if abs(v) > 1e-15}
    return Poly(ring, K)


def is_darboux_factor(cs: ComplexSystem, f) -> bool:
    try:
        cofactor_of(cs, f)
    except NotAFactor:
        return False
    return True


# ---------------------------------------------------------------------------
# recipes at a parameter point or symbolically
# ---------------------------------------------------------------------------

@dataclass
class _Instance:
    system: ComplexSystem
    factors: dict
    zside: list          # [(name, exponent)]
    wside: list | None
    integral: list | None
    wscale: object
    exact: bool
    symbolic: bool
    lets: dict = field(default_factory=dict)
    cofactor_texts: dict = field(default_factory=dict)


def _eval_coeff(c, values, dom):
    if isinstance(c, Poly):
        total = dom.zero
        for P, v in c.terms.items():
            term = dom.convert(v)
            for name, e in zip(c.ring.variables, c.ring.unpack(P)):
                if e:
                    term = term * values[name] ** e
            total = total + term
        return total
    return dom.convert(c)


def _evaluate_poly(p: Poly, values, dom, target: PolyRing) -> Poly:
    out = {}
    for P, c in p.terms.items():
        v = _eval_coeff(c, values, dom)
        if v:
            out[P] = v
    return Poly(target, out)


def _point_values(point: dict, dom):
    vals = {}
    for k, v in point.items():
        if isinstance(v, str):
            v = evaluate_expression(v, {}, number=QQI.convert, imaginary=QQI.I)
        if dom is CC:
            vals[k] = complex(v)
        else:
            if isinstance(v, (complex, float)):
                raise _NotExact
            vals[k] = QQI.convert(v)
    return vals


def _sqrt_exact(x):
    r = exact_sqrt(x)
    if r is None:
        raise _NotExact
    return r


def _instantiate(cs: ComplexSystem, recipe: LinearizationRecipe, point, signs, exact: bool) -> _Instance:
    params = param_names(cs.domain)
    lets = recipe.radical_names
    if point is None:
        if lets:
            raise ValueError("recipes with radicals need parameter values")
        return _instantiate_symbolic(cs, recipe)
    missing = [p for p in params if p not in point]
    if missing:
        raise KeyError(f"no values for parameters {missing}")
    dom = QQI if exact else CC
    vals = _point_values({p: point[p] for p in params}, dom)
    funcs = {"sqrt": _sqrt_exact if exact else cmath.sqrt}
    for (name, expr), sign in zip(recipe.lets, signs):
        v = evaluate_expression(expr, vals, functions=funcs, number=dom.convert, imaginary=dom.I)
        vals[name] = v if sign > 0 else -v
    zw = PolyRing(cs.ring.variables, dom)
    sys_ = ComplexSystem(_evaluate_poly(cs.X, vals, dom, zw), _evaluate_poly(cs.Y, vals, dom, zw))
    src = PolyRing(cs.ring.variables, PolyRing(params + lets, QQI) if params + lets else QQI)
    factors = {n: _evaluate_poly(parse(t, src), vals, dom, zw) for n, t in recipe.factors.items()}

    def ev(expr):
        return evaluate_expression(str(expr), vals, functions=funcs, number=dom.convert, imaginary=dom.I)

    zside = [(n, ev(e)) for n, e in recipe.zside]
    wside = None if recipe.wside is None else [(n, ev(e)) for n, e in recipe.wside]
    integral = None if recipe.integral is None else [(n, ev(e)) for n, e in recipe.integral]
    wscale = None if recipe.wscale is None else ev(recipe.wscale)
    inst = _Instance(sys_, factors, zside, wside, integral, wscale, exact, False, {n: vals[n] for n in lets})
    inst.cofactor_texts = {n: _evaluate_poly(parse(t, src), vals, dom, zw) for n, t in recipe.cofactors.items()}
    return inst


def _instantiate_symbolic(cs, recipe) -> _Instance:
    ring = cs.ring
    dom = cs.domain
    if isinstance(dom, PolyRing):
        ns = {v: RationalFunction(dom.gen(v)) for v in dom.variables}
        number = lambda n: RationalFunction(dom.constant(n))
        imag = RationalFunction(dom.imaginary_unit())
    else:
        ns = {}
        number = QQI.convert
        imag = QQI.I

    def ev(expr):
        return evaluate_expression(str(expr), ns, number=number, imaginary=imag)

    factors = {n: parse(t, ring) for n, t in recipe.factors.items()}
    inst = _Instance(
        cs,
        factors,
        [(n, ev(e)) for n, e in recipe.zside],
        None if recipe.wside is None else [(n, ev(e)) for n, e in recipe.wside],
        None if recipe.integral is None else [(n, ev(e)) for n, e in recipe.integral],
        None if recipe.wscale is None else ev(recipe.wscale),
        True,
        True,
    )
    inst.cofactor_texts = {n: parse(t, ring) for n, t in recipe.cofactors.items()}
    return inst


def _instances(cs, recipe, point, branches: bool):
    """Yield ``(signs, instance)`` over the square-root branches."""
    flags = recipe.branched
    nb = sum(flags) if branches else 0
    for choice in itertools.product((1, -1), repeat=nb):
        it = iter(choice)
        signs = tuple(next(it) if f and branches else 1 for f in flags)
        try:
            inst = _instantiate(cs, recipe, point, signs, exact=True)
        except _NotExact:
            inst = _instantiate(cs, recipe, point, signs, exact=False)
        yield signs, inst


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""

    def as_json(self):
        return {"check": self.name, "pass": self.passed, "residual": self.residual, "detail": self.detail}


@dataclass
class RecipeReport:
    checks: list
    branch: tuple = ()
    exact: bool = True
    sums: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def as_json(self):
        return {
            "pass": self.passed,
            "branch": list(self.branch),
            "exact": self.exact,
            "sums": {k: str(v) for k, v in self.sums.items()},
            "checks": [c.as_json() for c in self.checks],
        }


@dataclass
class VerificationReport:
    reports: list

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def as_json(self):
        return {"pass": self.passed, "branches": [r.as_json() for r in self.reports]}


def _max_abs(p: Poly) -> float:
    return max((abs(complex(c)) for c in p.terms.values()), default=0.0)


def _coeff_close(p: Poly, exact: bool, tol=RESIDUAL_TOL):
    """(is zero, residual) for a difference polynomial."""
    if exact:
        return (not p), 0.0
    r = _max_abs(p)
    return r < tol, r


def _weighted_sum(inst: _Instance, side, cofactors):
    """``sum e_j K_j`` as a polynomial; symbolic exponents give ``(num, den)``."""
    ring = inst.system.ring
    if inst.symbolic and isinstance(ring.domain, PolyRing):
        num = ring.zero
        den = ring.domain.one
        for name, e in side:
            K = cofactors[name]
            if not isinstance(e, RationalFunction):
                e = RationalFunction(ring.domain.convert(e))
            num = num * ring.constant(e.den) + K * ring.constant(e.num * den)
            den = den * e.den
        return num, den
    total = ring.zero
    for name, e in side:
        total = total + cofactors[name] * ring.constant(e)
    return total, None


def _check_sum(inst, side, cofactors, target, label):
    ring = inst.system.ring
    num, den = _weighted_sum(inst, side, cofactors)
    if den is None:
        diff = num - ring.constant(target)
        ok, res = _coeff_close(diff, inst.exact)
        shown = num
    else:
        diff = num - ring.constant(den * target)
        ok, res = (not diff), 0.0
        shown = ring.constant(target) if ok else f"({num})/({den})"
    return Check(label, ok, res, f"sum = {shown}"), shown


def _shape_check(f: Poly, lead: str, label: str, exact: bool):
    ring = f.ring
    z, w = ring.gens
    low = f.truncate(1)
    target = z if lead == "z" else w
    ok, res = _coeff_close(low - target, exact)
    return Check(label, ok, res, f"linear part {low}")


def _unit_check(f: Poly, label: str, exact: bool):
    ring = f.ring
    c0 = f.truncate(0)
    ok, res = _coeff_close(c0 - ring.one, exact)
    return Check(label, ok, res, f"constant term {c0 if c0 else 0}")


def _cofactors(inst: _Instance, names, checks):
    out = {}
    for n in names:
        f = inst.factors[n]
        given = inst.cofactor_texts.get(n)
        if given is not None:
            diff = flow_derivative(inst.system, f) - given * f
            ok, res = _coeff_close(diff, inst.exact)
            checks.append(Check(f"cofactor {n}", ok, res, f"K = {given}"))
            out[n] = given
            continue
        try:
            out[n] = cofactor_of(inst.system, f)
            checks.append(Check(f"cofactor {n}", True, 0.0, f"K = {out[n]}"))
        except NotAFactor as exc:
            checks.append(Check(f"cofactor {n}", False, exc.residual or float("inf"), str(exc)))
    return out


def _verify_instance(inst: _Instance, signs) -> RecipeReport:
    checks: list[Check] = []
    used = [n for n, _ in inst.zside]
    used += [n for n, _ in (inst.wside or [])]
    used += [n for n, _ in (inst.integral or [])]
    seen = list(dict.fromkeys(used))
    K = _cofactors(inst, seen, checks)
    sums = {}
    # (a) and (b)
    f0 = inst.zside[0][0]
    checks.append(_shape_check(inst.factors[f0], "z", f"(a) {f0} = z + ...", inst.exact))
    for n, _ in inst.zside[1:]:
        checks.append(_unit_check(inst.factors[n], f"(a) {n}(0,0) = 1", inst.exact))
    if inst.wside is not None:
        g0 = inst.wside[0][0]
        checks.append(_shape_check(inst.factors[g0], "w", f"(b) {g0} = w + ...", inst.exact))
        for n, _ in inst.wside[1:]:
            checks.append(_unit_check(inst.factors[n], f"(b) {n}(0,0) = 1", inst.exact))
    if inst.integral is not None:
        for n, _ in inst.integral:
            checks.append(_unit_check(inst.factors[n], f"integral {n}(0,0) = 1", inst.exact))
    if any(not c.passed for c in checks if c.name.startswith("cofactor")):
        return RecipeReport(checks, signs, inst.exact, sums)
    # (c)
    chk, s = _check_sum(inst, inst.zside, K, 1, "(c) z-side cofactor sum = 1")
    checks.append(chk)
    sums["zside"] = s
    if inst.wside is not None:
        chk, s = _check_sum(inst, inst.wside, K, -1, "(c) w-side cofactor sum = -1")
        checks.append(chk)
        sums["wside"] = s
    if inst.integral is not None:
        chk, s = _check_sum(inst, inst.integral, K, 0, "first integral cofactor sum = 0")
        checks.append(chk)
        sums["integral"] = s
        if inst.wside is None and not inst.symbolic:
            checks.append(_integral_normalisation(inst))
    return RecipeReport(checks, signs, inst.exact, sums)


def verify_recipe(cs: ComplexSystem, recipe: LinearizationRecipe, point: dict | None = None, branches: bool = True) -> VerificationReport:
    """Check conditions (a)-(c) for every square-root branch at ``point``
    (or symbolically when ``point`` is None and the recipe has no radicals)."""
    return VerificationReport([_verify_instance(inst, signs) for signs, inst in _instances(cs, recipe, point, branches)])


def verify_first_integral(cs: ComplexSystem, fi: FirstIntegralRecipe, point: dict | None = None, factors: dict | None = None, lets=()) -> bool:
    """True iff ``sum s_i K_i = 0`` for the factors of ``fi``.

    ``fi.factors`` are polynomials (or strings, resolved through ``factors``).
    """
    names = []
    table = {}
    for n, f in enumerate(fi.factors):
        key = f if isinstance(f, str) else f"f{n}"
        names.append(key)
        if isinstance(f, str):
            table[key] = factors[f] if factors else f
        else:
            table[key] = str(f)
    table["__z"] = "z"
    table["__w"] = "w"
    recipe = LinearizationRecipe(
        factors=table,
        zside=(("__z", "1"),),
        wside=(("__w", "1"),),
        lets=tuple(lets),
        integral=tuple(zip(names, (str(e) for e in fi.exponents))),
    )
    for _, inst in _instances(cs, recipe, point, bool(lets)):
        checks: list[Check] = []
        K = _cofactors(inst, list(dict.fromkeys(names)), checks)
        if any(not c.passed for c in checks):
            return False
        chk, _ = _check_sum(inst, inst.integral, K, 0, "integral")
        if not chk.passed:
            return False
    return True


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

def _mul(a: Poly, b: Poly, N: int) -> Poly:
    return (a * b).truncate(N)


def series_power(f: Poly, alpha, N: int) -> Poly:
    """``f^alpha`` through degree ``N`` for ``f(0,0) = 1`` (binomial series)."""
    ring = f.ring
    one = ring.one
    c0 = f.truncate(0)
    if c0 != one:
        if ring.domain == CC and c0 and abs(complex(c0.constant_coeff()) - 1) < RESIDUAL_TOL:
            f = f - c0 + one
        else:
            raise ExpansionError(f"factor {f} does not have constant term 1")
    u = f - one
    dom = ring.domain
    alpha = dom.convert(alpha)
    result = one
    term = one
    coeff = dom.one
    for n in range(1, N + 1):
        term = _mul(term, u, N)
        if not term:
            break
        coeff = coeff * (alpha - (n - 1)) / n
        if not coeff:
            break
        result = result + term * ring.constant(coeff)
    return result.truncate(N)


def series_inverse(f: Poly, N: int) -> Poly:
    return series_power(f, -1, N)


def _product(inst: _Instance, side, N: int) -> Poly:
    """``f0 * prod f_j^{e_j}`` through degree ``N``."""
    ring = inst.system.ring
    head, e0 = side[0]
    if e0 != 1 and e0 != inst.system.domain.one:
        raise ExpansionError("the leading factor must carry exponent 1")
    acc = inst.factors[head].truncate(N)
    for name, e in side[1:]:
        acc = _mul(acc, series_power(inst.factors[name], e, N), N)
    return acc


def _divide_by_z(p: Poly) -> Poly:
    ring = p.ring
    step = ring.pack((1, 0))
    numeric = ring.domain == CC
    floor = RESIDUAL_TOL * max(1.0, _max_abs(p)) if numeric else 0
    out = {}
    for P, c in p.terms.items():
        if not ring.unpack(P)[0]:
            # rounding leaves pure-w debris in floating point
            if numeric and abs(c) < floor:
                continue
            raise ExpansionError(f"{p} is not divisible by z")
        out[P - step] = c
    return Poly(ring, out)


def _w_from_integral(inst: _Instance, z1: Poly, N: int) -> Poly:
    """``w1 = wscale * (Psi - Psi(0)) / z1`` through degree ``N``."""
    ring = inst.system.ring
    psi = ring.one
    for name, e in inst.integral:
        psi = _mul(psi, series_power(inst.factors[name], e, N + 1), N + 1)
    psi = psi - psi.truncate(0)
    q = _divide_by_z(psi)
    # z1 = z * unit with unit(0,0) = 1
    unit = _divide_by_z(z1)
    w1 = _mul(q, series_inverse(unit, N), N)
    return w1 * ring.constant(inst.wscale)


def _integral_normalisation(inst: _Instance) -> Check:
    try:
        z1 = _product(inst, inst.zside, 3)
        w1 = _w_from_integral(inst, z1, 2)
    except ExpansionError as exc:
        return Check("w1 = wscale*(Psi-1)/z1 = w + ...", False, float("inf"), str(exc))
    ok, res = _coeff_close(w1.truncate(1) - inst.system.ring.gens[1], inst.exact)
    return Check("w1 = wscale*(Psi-1)/z1 = w + ...", ok, res, f"linear part {w1.truncate(1)}")


@dataclass
class SeriesReport:
    branch: tuple
    exact: bool
    z_residual: object
    w_residual: object
    order: int
    z_scale: float = 1.0
    w_scale: float = 1.0

    # residual norms are relative to the largest coefficient of the series
    # and its derivative, since high-degree coefficients grow quickly
    @property
    def z_norm(self) -> float:
        return _max_abs(self.z_residual) / self.z_scale

    @property
    def w_norm(self) -> float:
        return _max_abs(self.w_residual) / self.w_scale

    @property
    def passed(self) -> bool:
        if self.exact:
            return not self.z_residual and not self.w_residual
        return self.z_norm < RESIDUAL_TOL and self.w_norm < RESIDUAL_TOL

    def as_json(self):
        return {
            "pass": self.passed,
            "branch": list(self.branch),
            "exact": self.exact,
            "order": self.order,
            "z_residual": self.z_norm,
            "w_residual": self.w_norm,
        }


@dataclass
class SeriesCheck:
    reports: list

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def as_json(self):
        return {"pass": self.passed, "branches": [r.as_json() for r in self.reports]}


def linearizing_pair(inst: _Instance, N: int):
    z1 = _product(inst, inst.zside, N + 1)
    if inst.wside is not None:
        w1 = _product(inst, inst.wside, N)
    else:
        w1 = _w_from_integral(inst, z1, N)
    return z1.truncate(N), w1.truncate(N)


def series_linearization_check(cs: ComplexSystem, recipe: LinearizationRecipe, point: dict | None, N: int = 8, branches: bool = True) -> SeriesCheck:
    """Expand ``z1``, ``w1`` through degree ``N`` and test ``z1' = z1``, ``w1' = -w1``."""
    reports = []
    for signs, inst in _instances(cs, recipe, point if point is not None else {}, branches):
        if inst.symbolic:
            raise ValueError("series checks need numeric parameter values")
        z1, w1 = linearizing_pair(inst, N)
        dz = flow_derivative(inst.system, z1)
        dw = flow_derivative(inst.system, w1)
        rz = (dz - z1).truncate(N)
        rw = (dw + w1).truncate(N)
        if inst.exact:
            reports.append(SeriesReport(signs, True, rz, rw, N))
        else:
            zs = max(1.0, _max_abs(z1), _max_abs(dz.truncate(N)))
            ws = max(1.0, _max_abs(w1), _max_abs(dw.truncate(N)))
            reports.append(SeriesReport(signs, False, rz, rw, N, zs, ws))
    return SeriesCheck(reports)
