from .quantities import (
    DEFAULT_TRUNCATION,
    FocusQuantity,
    NormalizingSeries,
    ObstructionError,
    QuantityPair,
    first_integral_series,
    flow_derivative,
    focus_quantities,
    linearization_residual,
    linearizability_quantities,
    linearizing_series,
)
from .system import (
    ComplexSystem,
    PlanarSystem,
    SystemFileError,
    SystemShapeError,
    coefficient_ring,
    complexify,
    imag_part,
    load_system,
    read_system,
    real_part,
    realify,
    render_system,
    substitute_params,
)

__all__ = [
    "DEFAULT_TRUNCATION",
    "FocusQuantity",
    "NormalizingSeries",
    "ObstructionError",
    "QuantityPair",
    "first_integral_series",
    "flow_derivative",
    "focus_quantities",
    "linearization_residual",
    "linearizability_quantities",
    "linearizing_series",
    "ComplexSystem",
    "PlanarSystem",
    "SystemFileError",
    "SystemShapeError",
    "coefficient_ring",
    "complexify",
    "imag_part",
    "load_system",
    "read_system",
    "real_part",
    "realify",
    "render_system",
    "substitute_params",
]
