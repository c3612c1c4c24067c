from .orders import DEGREVLEX, LEX, MonomialOrder, block
from .parser import PolySyntaxError, UnknownVariable, evaluate_expression, parse
from .polynomial import ExponentOverflow, Poly, PolyRing, RingMismatch, format_poly
from .ratfunc import RationalFunction

__all__ = [
    "DEGREVLEX",
    "LEX",
    "MonomialOrder",
    "block",
    "PolySyntaxError",
    "UnknownVariable",
    "evaluate_expression",
    "parse",
    "ExponentOverflow",
    "Poly",
    "PolyRing",
    "RingMismatch",
    "format_poly",
    "RationalFunction",
]
