"""Linearizability conditions of the quadratic-plus-cubic family.

The family is

    x' = -y + a20 x^2 + a11 x y + a02 y^2 + x (r20 x^2 + r11 x y + r02 y^2)
    y' =  x + b20 x^2 + b11 x y - b20 y^2 + y (r20 x^2 + r11 x y + r02 y^2)

(``b02 = -b20`` after a rotation).  Each condition is stored as generators
over Q together with a polynomial parametrization of its component.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from ..arith import QQ, QQI, rational
from ..groebner import Ideal
from ..normal_form.system import PlanarSystem, coefficient_ring
from ..poly import PolyRing, parse

PARAMS = ("a20", "a11", "a02", "b20", "b11", "r20", "r11", "r02")

FAMILY_DX = "-y + a20*x^2 + a11*x*y + a02*y^2 + x*(r20*x^2 + r11*x*y + r02*y^2)"
FAMILY_DY = "x + b20*x^2 + b11*x*y - b20*y^2 + y*(r20*x^2 + r11*x*y + r02*y^2)"

CONDITION_IDS = ("1", "2", "3", "4", "5", "L")


class DegenerateSample(ValueError):
    pass


def family_system(params=PARAMS) -> PlanarSystem:
    return PlanarSystem.from_strings(FAMILY_DX, FAMILY_DY, params)


def parameter_ring(domain=QQ) -> PolyRing:
    return PolyRing(PARAMS, domain)


@dataclass(frozen=True)
class ConditionSpec:
    """Generators (over Q, in :data:`PARAMS`) and a parametrization.

    ``parametrization`` maps every parameter to an expression in ``free``;
    it may involve ``I``.  ``nonzero`` lists expressions in ``free`` that
    must not vanish at a sample (recipes divide by them).
    """

    id: str
    generators: tuple
    free: tuple
    parametrization: dict
    nonzero: tuple = ()
    recipe: str | None = None

    def ideal(self, domain=QQ) -> Ideal:
        ring = parameter_ring(domain)
        return Ideal([parse(g, ring) for g in self.generators], ring)

    def image(self) -> dict:
        """Parametrization as polynomials of ``Q(i)[free]``."""
        dom = coefficient_ring(self.free)
        return {p: parse(self.parametrization.get(p, p), dom) for p in PARAMS}

    def restrict(self, f):
        """Substitute the parametrization into a polynomial in :data:`PARAMS`
        (or into the coefficients of a polynomial over them)."""
        img = self.image()
        dom = coefficient_ring(self.free)
        if f.ring.variables == PARAMS:
            return f.subs(img, ring=dom) if isinstance(dom, PolyRing) else f.evaluate(img)
        target = PolyRing(f.ring.variables, dom)
        if isinstance(dom, PolyRing):
            return f.map_coeffs(lambda c: c.subs(img, ring=dom), target)
        return f.map_coeffs(lambda c: c.evaluate(img), target)

    def generators_vanish(self) -> bool:
        return all(not self.restrict(g) for g in self.ideal(QQI).generators)

    def system(self) -> PlanarSystem:
        """The family restricted to this component, over ``Q(i)[free]``."""
        fam = family_system()
        return fam.substitute(self.parametrization, params=self.free)

    def values_at(self, point: dict) -> dict:
        """Full parameter vector at a point of the free parameters."""
        vals = {k: QQI.convert(v) for k, v in point.items()}
        return {p: f.evaluate(vals) if hasattr(f, "evaluate") else QQI.convert(f) for p, f in self.image().items()}

    def load_recipe(self):
        if self.recipe is None:
            return None
        from ..darboux import read_recipe

        text = resources.files(__package__).joinpath("data", self.recipe).read_text(encoding="utf-8")
        return read_recipe(text, name=self.recipe)


_COND5 = (
    "9*a11^2 - 12*a11*b20 + 4*b20^2 + 4*b11^2",
    "-6*a11*b20 + 4*b20^2 + 2*a20*b11 - b11^2",
    "6*a20*a11 - 4*a20*b20 - 3*a11*b11 + 10*b20*b11",
    "4*a20^2 - 12*a11*b20 + 24*b20^2 - b11^2",
    "-4/3*b20^2 - 1/3*b11^2 + r11",
    "4/9*a20*b20 + 1/6*a11*b11 - 1/9*b20*b11 + r02",
    "1/6*a20*a11 - 1/3*a20*b20 + 1/12*a11*b11 - 1/6*b20*b11 + r20 + r02",
    "a02 + 1/3*a20 - 1/3*b11",
)

CONDITIONS: dict[str, ConditionSpec] = {
    "1": ConditionSpec(
        "1",
        ("4*a20^2 + a11^2 + 4*a11*b20 + 4*b20^2 - 4*a20*b11 + b11^2", "r20 + r02", "a02 + a20"),
        ("a20", "b20", "b11", "r20", "r11"),
        {"a11": "-2*b20 + (2*a20 - b11)*I", "a02": "-a20", "r02": "-r20"},
        # xi^2 and eta_p^2 * eta_m^2 of the recipe
        nonzero=(
            "b11^2 - 4*I*b11*b20 - 4*b20^2 - 4*r11 + 8*I*r20",
            "(-2*a20^2 + 2*a20*b11 - b11^2 - 8*I*a20*b20 + 2*I*b11*b20 + 2*b20^2 + 2*r11 + 4*I*r20)^2"
            " - (2*a20 - b11)^2*(b11^2 - 4*I*b11*b20 - 4*b20^2 - 4*r11 + 8*I*r20)",
        ),
        recipe="case1.recipe",
    ),
    "2": ConditionSpec(
        "2",
        ("a02", "r02", "a11 + 2*b20", "b11 - 4*a20", "r11 + b20^2", "r20 - a20*b20"),
        ("a20", "b20"),
        {"a02": "0", "r02": "0", "a11": "-2*b20", "b11": "4*a20", "r11": "-b20^2", "r20": "a20*b20"},
        nonzero=("a20",),
        recipe="case2.recipe",
    ),
    "3": ConditionSpec(
        "3",
        ("4*a02 + a20", "a11 + 2*b20", "2*b11 - a20", "4*r02 + a20*b20", "r11 + b20^2", "r20 - a20*b20"),
        ("a20", "b20"),
        {"a02": "-a20/4", "a11": "-2*b20", "b11": "a20/2", "r02": "-a20*b20/4", "r11": "-b20^2", "r20": "a20*b20"},
        nonzero=("a20",),
        recipe="case3.recipe",
    ),
    "4": ConditionSpec(
        "4",
        ("a02", "r02", "a11 + 2*b20", "b11 - a20", "r20 - a20*b20"),
        ("a20", "b20", "r11"),
        {"a02": "0", "r02": "0", "a11": "-2*b20", "b11": "a20", "r20": "a20*b20"},
        nonzero=("a20^2 - 4*b20^2 - 4*r11",),
        recipe="case4.recipe",
    ),
    # branch a20 = 3*a02 + 4*I*b20; the rational form divides by b20 and
    # becomes polynomial after the substitution
    "5": ConditionSpec(
        "5",
        _COND5,
        ("a02", "b20"),
        {
            "a20": "3*a02 + 4*I*b20",
            "b11": "6*a02 + 4*I*b20",
            "a11": "4*I*a02 - 2*b20",
            "r20": "a02*b20 + (3*a02 + 4*I*b20)*b20",
            "r11": "12*a02^2 + 16*I*a02*b20 - 4*b20^2",
            "r02": "-4*I*a02^2 + 4*a02*b20",
        },
        nonzero=("b20",),
        recipe="case5.recipe",
    ),
    "L": ConditionSpec(
        "L",
        ("a02 + a20", "a11 + 2*b20", "b11 - 2*a20", "r02 + r20"),
        ("a20", "b20", "r20", "r11"),
        {"a02": "-a20", "a11": "-2*b20", "b11": "2*a20", "r02": "-r20"},
        # the condition-(1) degeneracies at b11 = 2*a20
        nonzero=(
            "4*a20^2 - 8*I*a20*b20 - 4*b20^2 - 4*r11 + 8*I*r20",
            "(-2*a20^2 - 4*I*a20*b20 + 2*b20^2 + 2*r11 + 4*I*r20)^2",
        ),
        recipe="caseL.recipe",
    ),
}


def condition(id) -> ConditionSpec:
    key = str(id).upper() if str(id).lower() == "l" else str(id)
    try:
        return CONDITIONS[key]
    except KeyError:
        raise KeyError(f"unknown condition {id!r}; expected one of {', '.join(CONDITION_IDS)}") from None


def condition_ideal(id, domain=QQ) -> Ideal:
    return condition(id).ideal(domain)


def _nonzero_ok(spec: ConditionSpec, point: dict) -> bool:
    dom = coefficient_ring(spec.free)
    vals = {k: QQI.convert(v) for k, v in point.items()}
    return all(parse(e, dom).evaluate(vals) for e in spec.nonzero)


def sample_condition(id, seed: int = 0, *, height: int = 9, tries: int = 100) -> dict:
    """A random rational point of the free parameters, avoiding the
    degenerate locus of the recipe.  Returns ``{free name: mpq}``."""
    spec = condition(id)
    rng = random.Random(f"{spec.id}:{seed}")
    for _ in range(tries):
        point = {p: rational(rng.randint(-height, height), rng.randint(1, 4)) for p in spec.free}
        if _nonzero_ok(spec, point):
            return point
    raise DegenerateSample(f"no nondegenerate sample for condition {spec.id} after {tries} tries")


def condition_values(id, point: dict) -> dict:
    """Full parameter vector (Gaussian rationals) at ``point``."""
    return condition(id).values_at(point)


def complex_conjugate_branch(values: dict) -> dict:
    """The conjugate parameter vector; it satisfies the same real generators."""
    return {k: QQI.convert(v).conjugate() for k, v in values.items()}
