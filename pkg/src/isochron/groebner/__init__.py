from .buchberger import Budget, ResourceLimitError, Stats, is_groebner
from .ideal import (
    GroebnerBasis,
    Ideal,
    ReconstructionError,
    buchberger,
    check_lucky_prime,
    eliminate,
    ideal_equal,
    ideal_membership,
    intersect,
    lift_basis,
    modular_image,
    normal_form,
    quotient,
    radical_membership,
    render_ideal_text,
)
from .io import IdealFileError, load_ideal, parse_domain, read_ideal

__all__ = [
    "Budget",
    "ResourceLimitError",
    "Stats",
    "is_groebner",
    "GroebnerBasis",
    "Ideal",
    "ReconstructionError",
    "buchberger",
    "check_lucky_prime",
    "eliminate",
    "ideal_equal",
    "ideal_membership",
    "intersect",
    "lift_basis",
    "modular_image",
    "normal_form",
    "quotient",
    "radical_membership",
    "render_ideal_text",
    "IdealFileError",
    "load_ideal",
    "parse_domain",
    "read_ideal",
]
