"""Linearization recipes: Darboux factors with exponents, read from text.

A recipe file looks like::

    param a20 b20
    let C = sqrt(a20^2 - 4*b20^2)          # radicals, numeric or exact
    factor l1 = z
    factor l3 = 1 + 1/4*(-I*a20 + 2*b20 + I*C)*z + ...
    cofactor l1 = 1 + ...                   # optional, computed if absent
    zside = l1 l3^"(a20 + 2*I*b20)/C" l4^-1/2
    wside = l2 l3^"..." l4^"..."
    integral = l3 l4^-1 l5^"-eta_m/eta_p"   # optional first integral
    wscale = "2*sqrt(2)*I/(eta_m*xi)"       # w1 = wscale*(Psi - Psi(0))/z1

``let`` names may appear in factor coefficients and exponents; they are
only available once parameter values are given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class RecipeFileError(ValueError):
    def __init__(self, message, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.line = line


@dataclass(frozen=True)
class DarbouxFactor:
    f: object
    K: object


@dataclass(frozen=True)
class FirstIntegralRecipe:
    """``H = prod f_i^{s_i}``; exponents are numbers or expression strings."""

    factors: tuple
    exponents: tuple


@dataclass(frozen=True)
class LinearizationRecipe:
    factors: dict
    zside: tuple
    wside: tuple | None = None
    cofactors: dict = field(default_factory=dict)
    lets: tuple = ()
    params: tuple = ()
    integral: tuple | None = None
    wscale: str | None = None
    name: str = ""

    def __post_init__(self):
        for side, label in ((self.zside, "zside"), (self.wside or (), "wside"), (self.integral or (), "integral")):
            for fname, _ in side:
                if fname not in self.factors:
                    raise RecipeFileError(f"{label} uses undefined factor {fname!r}")
        if not self.zside:
            raise RecipeFileError("a recipe needs a z-side")
        if self.wside is None and (self.integral is None or self.wscale is None):
            raise RecipeFileError("a recipe needs a w-side or an integral with a wscale")

    @property
    def radical_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.lets)

    @property
    def branched(self) -> tuple[bool, ...]:
        """Per let: is it a square root, so that both signs are branches."""
        return tuple(_is_sqrt(e) for _, e in self.lets)

    def first_integral(self) -> FirstIntegralRecipe | None:
        if self.integral is None:
            return None
        return FirstIntegralRecipe(tuple(n for n, _ in self.integral), tuple(e for _, e in self.integral))


def _is_sqrt(expr: str) -> bool:
    """``sqrt(...)`` spanning the whole expression."""
    expr = expr.strip()
    if not (expr.startswith("sqrt(") and expr.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(expr[4:], 4):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0:
            return i == len(expr) - 1
    return False


_ITEM = re.compile(
    r"""\s*([A-Za-z_]\w*)            # factor name
        (?:\^(?:"([^"]*)"            # quoted expression
           |(-?\d+(?:/\d+)?)         # rational literal
           |\(([^()]*)\)))?          # parenthesised expression
    """,
    re.VERBOSE,
)


def parse_side(text: str, line=None) -> tuple:
    items = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _ITEM.match(text, pos)
        if not m or m.end() == pos:
            raise RecipeFileError(f"cannot read factor list near {text[pos:]!r}", line)
        name = m.group(1)
        exp = m.group(2) or m.group(3) or m.group(4) or "1"
        items.append((name, exp.strip()))
        pos = m.end()
        while pos < len(text) and text[pos] in " \t*":
            pos += 1
    return tuple(items)


def _unquote(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] == '"':
        return s[1:-1]
    return s


def read_recipe(text: str, name: str = "") -> LinearizationRecipe:
    params: list[str] = []
    lets: list[tuple[str, str]] = []
    factors: dict[str, str] = {}
    cofactors: dict[str, str] = {}
    sides: dict[str, tuple] = {}
    wscale = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "param":
            params.extend(rest.replace(",", " ").split())
            continue
        if head in ("let", "factor", "cofactor"):
            lhs, eq, rhs = rest.partition("=")
            lhs = lhs.strip()
            if not eq or not re.fullmatch(r"[A-Za-z_]\w*", lhs):
                raise RecipeFileError(f"expected '{head} <name> = <expression>'", n)
            target = {"let": None, "factor": factors, "cofactor": cofactors}[head]
            if head == "let":
                lets.append((lhs, _unquote(rhs)))
            else:
                if lhs in target:
                    raise RecipeFileError(f"{head} {lhs!r} defined twice", n)
                target[lhs] = rhs.strip()
            continue
        key, eq, rhs = line.partition("=")
        key = key.strip()
        if not eq:
            raise RecipeFileError(f"cannot read {line!r}", n)
        if key in ("zside", "wside", "integral"):
            sides[key] = parse_side(rhs, n)
        elif key == "wscale":
            wscale = _unquote(rhs)
        else:
            raise RecipeFileError(f"unknown recipe key {key!r}", n)
    for cname in cofactors:
        if cname not in factors:
            raise RecipeFileError(f"cofactor given for undefined factor {cname!r}")
    return LinearizationRecipe(
        factors=factors,
        zside=sides.get("zside", ()),
        wside=sides.get("wside"),
        cofactors=cofactors,
        lets=tuple(lets),
        params=tuple(params),
        integral=sides.get("integral"),
        wscale=wscale,
        name=name,
    )


def load_recipe(path) -> LinearizationRecipe:
    with open(path, encoding="utf-8") as fh:
        return read_recipe(fh.read(), name=str(path))
