"""End-to-end reproduction checks, one per main result.

Each check returns an :class:`Outcome`; ``isochron reproduce N`` runs one
and exits 0 when it passes, 1 when it does not.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import QQ, rational

CHECKS = {}


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_json(self):
        return {"check": self.number, "name": self.name, "pass": self.passed, "seconds": round(self.seconds, 3), "details": self.details}

    def line(self) -> str:
        return f"{self.number} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.seconds:.1f} s)"


def check(number, name):
    def wrap(func):
        CHECKS[number] = (name, func)
        return func

    return wrap


def run(key, inputs="inputs") -> Outcome:
    """Run check ``key`` (its number or name)."""
    number = _lookup(key)
    name, func = CHECKS[number]
    t = time.perf_counter()
    passed, details = func(Path(inputs))
    return Outcome(number, name, bool(passed), details, time.perf_counter() - t)


def _lookup(key) -> int:
    if str(key).isdigit() and int(key) in CHECKS:
        return int(key)
    for number, (name, _) in CHECKS.items():
        if name == key:
            return number
    raise KeyError(f"unknown check {key!r}; choose from {', '.join(f'{n} ({v[0]})' for n, v in CHECKS.items())}")


def _mutual(A, B) -> tuple[bool, bool]:
    from .groebner import Ideal, ideal_membership

    A = Ideal(list(A.generators), A.ring)
    B = Ideal([A.ring.convert(g) for g in B.generators], A.ring)
    return (all(ideal_membership(g, B) for g in A.generators), all(ideal_membership(g, A) for g in B.generators))


def _quantity_ideal(pairs, ring):
    from .groebner import Ideal

    return Ideal([ring.convert(g) for p in pairs for g in p.generators()], ring)


# ---------------------------------------------------------------------------
# exact algebra
# ---------------------------------------------------------------------------

@check(1, "first-pair")
def first_pair(inputs):
    from .atlas import family_system
    from .groebner import load_ideal
    from .normal_form import linearizability_quantities

    reference = load_ideal(inputs / "first_pair.ideal")
    computed = _quantity_ideal(linearizability_quantities(family_system(), 1), reference.ring)
    fwd, back = _mutual(computed, reference)
    return fwd and back, {"computed_in_reference": fwd, "reference_in_computed": back, "generators": [str(g) for g in computed.generators]}


@check(2, "second-pair")
def second_pair(inputs):
    from .atlas import family_system
    from .groebner import Ideal, buchberger, load_ideal, normal_form
    from .normal_form import linearizability_quantities

    first = load_ideal(inputs / "first_pair.ideal")
    reference = load_ideal(inputs / "second_pair_reduced.ideal")
    ring = first.ring
    G = buchberger(first)
    pairs = linearizability_quantities(family_system(), 2)
    reduced = [normal_form(ring.convert(f), G) for f in pairs[1].real_split()]
    # each computed part is a rational multiple of one reference generator modulo <i1, j1>
    ratios = {}
    for label, r in zip(("Re I2", "Im I2", "Re J2", "Im J2"), reduced):
        for j, p in enumerate(reference.generators):
            c = _ratio(r, normal_form(p, G))
            if c is not None and not normal_form(r - p * c, G):
                ratios[label] = f"{c} * reference[{j}]"
    lhs = Ideal(list(first.generators) + reduced, ring)
    rhs = Ideal(list(first.generators) + list(reference.generators), ring)
    fwd, back = _mutual(lhs, rhs)
    return fwd and back, {"computed_in_reference": fwd, "reference_in_computed": back, "ratios": ratios}


def _ratio(a, b):
    if not a or not b:
        return None
    m = next(iter(b.terms))
    if m not in a.terms:
        return None
    return a.terms[m] / b.terms[m]


@check(3, "vanishing")
def vanishing(inputs):
    from .atlas import CONDITION_IDS, condition
    from .normal_form import linearizability_quantities

    out = {}
    for cid in CONDITION_IDS:
        pairs = linearizability_quantities(condition(cid).system(), 4)
        out[cid] = [p.vanishes() for p in pairs]
    return all(all(v) for v in out.values()), {"vanishing_k1_to_k4": out}


# ---------------------------------------------------------------------------
# Darboux linearizations
# ---------------------------------------------------------------------------

def _max_residual(rep) -> float:
    return max((c.residual for r in rep.reports for c in r.checks), default=0.0)


@check(4, "darboux")
def darboux(inputs):
    from .atlas import condition, sample_condition
    from .darboux import verify_recipe
    from .normal_form import complexify

    details = {}
    ok = True
    for cid in ("2", "3", "5"):
        spec = condition(cid)
        rep = verify_recipe(complexify(spec.system()), spec.load_recipe())
        details[cid] = {"symbolic": rep.passed, "exact": all(r.exact for r in rep.reports)}
        ok &= rep.passed and details[cid]["exact"]
    for cid in ("1", "4"):
        spec = condition(cid)
        cs, recipe = complexify(spec.system()), spec.load_recipe()
        reps = [verify_recipe(cs, recipe, sample_condition(cid, seed)) for seed in range(20)]
        worst = max(_max_residual(r) for r in reps)
        passed = sum(r.passed for r in reps)
        details[cid] = {"samples": len(reps), "passed": passed, "max_residual": worst}
        ok &= passed == len(reps) and worst < 1e-9
    spec = condition("4")
    rep = verify_recipe(complexify(spec.system()), spec.load_recipe(), {"a20": 3, "b20": 1, "r11": 1})
    exact = rep.passed and all(r.exact for r in rep.reports)
    details["4 at a20=3, b20=1, r11=1"] = {"pass": rep.passed, "exact": exact, "sums": [{k: str(v) for k, v in r.sums.items()} for r in rep.reports]}
    return ok and exact, details


@check(5, "series")
def series(inputs):
    from .atlas import CONDITION_IDS, condition, sample_condition
    from .darboux import series_linearization_check
    from .normal_form import complexify

    details = {}
    ok = True
    for cid in CONDITION_IDS:
        spec = condition(cid)
        cs, recipe = complexify(spec.system()), spec.load_recipe()
        reps = [series_linearization_check(cs, recipe, sample_condition(cid, seed), N=8) for seed in range(5)]
        worst = max(max(max(r.z_norm, r.w_norm) for r in rep.reports) for rep in reps)
        details[cid] = {"passed": sum(r.passed for r in reps), "samples": len(reps), "max_residual": worst}
        ok &= all(r.passed for r in reps) and worst < 1e-9
    return ok, details


# ---------------------------------------------------------------------------
# focus quantities, equilibria, lifting, radical membership
# ---------------------------------------------------------------------------

@check(6, "focus-e2")
def focus_e2(inputs):
    from .groebner import Ideal, buchberger, normal_form
    from .normal_form import focus_quantities, load_system
    from .poly import parse

    g1, g2 = focus_quantities(load_system(inputs / "e2.sys"), 2)
    l1, l2 = g1.lyapunov, g2.lyapunov
    ring = l1.ring
    k3 = ring.gen("k3")
    lam1 = _ratio(l1, k3)
    eta2 = parse("2*k1*k2*k5 + k4*(k1^2 - k2^2)", ring)
    r2 = normal_form(l2, buchberger(Ideal([l1], ring)))
    lam2 = _ratio(r2, eta2)
    ok = lam1 is not None and l1 == k3 * lam1 and lam2 is not None and r2 == eta2 * lam2
    return ok, {"g1": str(g1.g), "g2": str(g2.g), "lambda1": str(lam1), "lambda2": str(lam2), "normalization": "i*g"}


@check(7, "equilibria")
def equilibria(inputs):
    from .atlas import (
        analyse_line_case,
        center_candidates,
        center_ideal,
        condition,
        reference_basis,
        real_field,
        remove_origin,
        sample_condition,
        trace_and_determinant,
    )
    from .groebner import Ideal, ideal_equal, ideal_membership
    from .poly import PolyRing, parse

    details = {}
    s4 = condition("4").system()
    details["G4"] = ideal_equal(center_candidates(s4).basis.ideal(), reference_basis("G4"))
    G1 = reference_basis("G1")
    I = center_ideal(condition("L").system())
    details["G1"] = ideal_equal(remove_origin(Ideal([G1.ring.convert(g) for g in I], G1.ring)), G1)
    s3 = condition("3").system().substitute({"a20": "2*b11"}, params=("b11", "b20"))
    P, _ = real_field(s3)
    g3 = parse("4*b11*x^2 - b11*y^2 - 2*b20*x*y - 2*y", P.ring)
    G3 = reference_basis("G3")
    details["G3"] = ideal_equal(center_candidates(s3, factor=g3).basis.ideal(), Ideal([P.ring.convert(g) for g in G3], P.ring))

    # determinant at A = (-1/b20, 0) under condition 2, with u = 1/b20
    P2, Q2 = real_field(condition("2").system())
    _, D = trace_and_determinant(P2, Q2)
    ring = PolyRing(("u", "a20", "b20"), QQ)
    u, a20, b20 = ring.gens
    DA = D.subs({"x": -u, "y": ring.zero, "a20": a20, "b20": b20}, ring=ring)
    details["D_A = -3*a20^2/b20^2"] = ideal_membership(DA + 3 * a20**2 * u**2, Ideal([u * b20 - 1], ring))

    products, seed = [], 0
    while len(products) < 20 and seed < 2000:
        p = sample_condition("L", seed)
        seed += 1
        if not p["b20"]:
            continue
        out = analyse_line_case(p)
        if out.get("branch") == "d0 > 0":
            products.append(out["product"] < 0)
    details["line samples with d0 > 0"] = len(products)
    details["product negative"] = sum(products)
    ok = all(v is True for k, v in details.items() if k[0] in "GD") and len(products) == 20 and all(products)
    return ok, details


@check(8, "lifting")
def lifting(inputs):
    from .atlas import condition, condition_ideal
    from .groebner import Ideal, ideal_equal, ideal_membership, lift_basis, load_ideal, radical_membership
    from .arith import rational_reconstruct

    quarter = rational_reconstruct(8001, 32003)
    G1 = lift_basis(load_ideal(inputs / "G1_mod32003.ideal"))
    C1 = condition_ideal("1")
    eq1 = ideal_equal(Ideal([C1.ring.convert(g) for g in G1], C1.ring), C1)
    G2 = lift_basis(load_ideal(inputs / "G2_mod32003.ideal"))
    spec = condition("5")
    C5 = condition_ideal("5")
    J5 = Ideal([C5.ring.convert(g) for g in G2], C5.ring)
    vanish = all(not _restrict_q(spec, g) for g in J5.generators)
    c5_in_j5 = all(ideal_membership(f, J5) for f in C5.generators)
    j5_in_rad = all(radical_membership(f, C5) for f in J5.generators)
    ok = quarter == rational(1, 4) and eq1 and vanish and c5_in_j5 and j5_in_rad
    return ok, {
        "8001 mod 32003": str(quarter),
        "G1 equals condition 1": eq1,
        "G2 vanishes on case 5": vanish,
        "condition 5 inside G2": c5_in_j5,
        "G2 inside radical of condition 5": j5_in_rad,
        "G2 generators": len(J5.generators),
    }


def _restrict_q(spec, g):
    from .arith import QQI
    from .atlas import parameter_ring

    return spec.restrict(g.map_coeffs(QQI.convert, parameter_ring(QQI)))


@check(9, "radical")
def radical(inputs):
    from .atlas import condition_ideal, family_system
    from .groebner import intersect, lift_basis, load_ideal, radical_membership
    from .normal_form import linearizability_quantities
    from .poly import parse

    J5 = lift_basis(load_ideal(inputs / "G2_mod32003.ideal"))
    parts = [condition_ideal(c) for c in "1234"]
    ring = parts[0].ring
    Jt = intersect(*parts, J5.ideal() if hasattr(J5, "ideal") else J5)
    members = {}
    for p in linearizability_quantities(family_system(), 3):
        for label, f in zip(("Re I", "Im I", "Re J", "Im J"), p.real_split()):
            if f:
                members[f"{label}{p.k}"] = radical_membership(ring.convert(f), Jt)
    controls = {s: radical_membership(parse(s, ring), Jt) for s in ("a20", "r11", "a02 + a20", "r20 + r02")}
    ok = all(members.values()) and not any(controls.values())
    return ok, {"intersection_generators": len(Jt), "members": members, "controls (expected false)": controls}


# ---------------------------------------------------------------------------
# numerical corroboration
# ---------------------------------------------------------------------------

RADII = [float(r) for r in np.linspace(0.02, 0.2, 10)]


def _generic_sample(cid, start=0):
    """A small seeded sample with every free parameter nonzero, and its seed."""
    from .atlas import sample_condition

    seed = start
    while True:
        pt = sample_condition(cid, seed, height=1)
        if all(pt.values()):
            return pt, seed
        seed += 1


def _scan(s, params=None):
    from .dynamics import NumericSystem, period_scan

    t = time.perf_counter()
    rep = period_scan(NumericSystem.from_system(s, params), RADII)
    return rep, time.perf_counter() - t


@check(10, "dynamics")
def dynamics(inputs):
    from .atlas import canonical_form, condition, polar_to_cartesian
    from .dynamics import ISOCHRONOUS, NON_ISOCHRONOUS, TWO_PI
    from .normal_form import load_system

    details, ok = {}, True
    for cid in ("L", "2", "3", "4"):
        pt, _ = _generic_sample(cid)
        rep, sec = _scan(condition(cid).system(), pt)
        good = rep.verdict == ISOCHRONOUS and max(rep.period_errors) < 1e-6 and max(rep.radius_errors) < 1e-7 and sec < 30
        details[cid] = {"params": {k: str(v) for k, v in pt.items()}, "verdict": rep.verdict, "max |T-2pi|": max(rep.period_errors), "max |r1-r0|": max(rep.radius_errors), "seconds": round(sec, 2)}
        ok &= good
    e = polar_to_cartesian(canonical_form("e", {"k1": 0, "k2": 0, "k3": rational(1, 10), "k4": 0, "k5": 0}))
    rep, sec = _scan(e)
    grows = all(r1 > r0 for r0, r1 in zip(rep.radii, rep.returns))
    details["e, k3 = 1/10"] = {"verdict": rep.verdict, "max |T-2pi|": max(rep.period_errors), "r1 > r0": grows, "seconds": round(sec, 2)}
    ok &= grows and max(rep.period_errors) < 1e-6 and sec < 30
    rep, sec = _scan(load_system(inputs / "hamiltonian.sys"))
    spread = max(rep.times) - min(rep.times)
    details["x' = -y, y' = x + x^2"] = {"verdict": rep.verdict, "period spread": spread, "seconds": round(sec, 2)}
    ok &= rep.verdict == NON_ISOCHRONOUS and spread > 1e-4 and sec < 30
    return ok, details


@check(11, "coexistence")
def coexistence(inputs):
    from .atlas import coexistence_analysis, condition, sample_condition, sys3_2_rational
    from .dynamics import ISOCHRONOUS
    from .normal_form import linearizability_quantities

    details, ok = {}, True
    s32 = sys3_2_rational()
    vanish = [p.vanishes() for p in linearizability_quantities(s32, 3)]
    details["shifted system quantities vanish (k <= 3)"] = vanish
    ok &= all(vanish)
    scans, seen, seed = [], [], 0
    while len(scans) < 3:
        pt, seed = _generic_sample("3", seed)
        seed += 1
        if pt in seen:
            continue
        seen.append(pt)
        b11 = pt["a20"] / 2
        origin, _ = _scan(condition("3").system(), pt)
        at_b, _ = _scan(s32, {"b11": b11, "b20": pt["b20"]})
        count = coexistence_analysis("3", pt).center_count
        scans.append({"b11": str(b11), "b20": str(pt["b20"]), "origin": origin.verdict, "B": at_b.verdict, "center_count": count})
        ok &= origin.verdict == ISOCHRONOUS and at_b.verdict == ISOCHRONOUS and count == 2
    details["condition 3 scans"] = scans
    counts = []
    for seed in range(5):
        pt = sample_condition("2", seed)
        if pt["a20"] and pt["b20"]:
            counts.append(coexistence_analysis("2", pt).center_count)
    details["condition 2 center counts"] = counts
    ok &= bool(counts) and all(c == 1 for c in counts)
    return ok, details
