from .conditions import (
    CONDITION_IDS,
    CONDITIONS,
    PARAMS,
    ConditionSpec,
    DegenerateSample,
    complex_conjugate_branch,
    condition,
    condition_ideal,
    condition_values,
    family_system,
    parameter_ring,
    sample_condition,
)
from .canonical import (
    FORMS,
    CanonicalForm,
    CanonicalReduction,
    DegenerateTransform,
    NotPolarForm,
    apply_linear_change,
    canonical_form,
    cartesian_to_polar,
    change_coordinates,
    e3_as_condition4,
    e3_system,
    polar_to_cartesian,
    reduce_to_canonical,
    same_polar_data,
)
from .equilibria import (
    MAX_CENTERS,
    Candidate,
    CenterCandidateReport,
    CoexistenceReport,
    NotRealSystem,
    QuadraticSurd,
    analyse_line_case,
    center_candidates,
    center_ideal,
    coexistence_analysis,
    line_coefficients,
    reference_basis,
    real_field,
    remove_origin,
    shifted_field,
    swap_line_params,
    sys3_2_derived,
    sys3_2_rational,
    trace_and_determinant,
)
