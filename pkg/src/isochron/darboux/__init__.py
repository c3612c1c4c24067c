from .recipe import (
    DarbouxFactor,
    FirstIntegralRecipe,
    LinearizationRecipe,
    RecipeFileError,
    load_recipe,
    parse_side,
    read_recipe,
)
from .verify import (
    Check,
    ExpansionError,
    NotAFactor,
    RecipeReport,
    SeriesCheck,
    SeriesReport,
    VerificationReport,
    cofactor_of,
    flow_derivative,
    is_darboux_factor,
    series_inverse,
    series_linearization_check,
    series_power,
    verify_first_integral,
    verify_recipe,
)
from .discover import discover_factors, same_up_to_scalar
