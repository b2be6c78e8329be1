"""Positivity and decomposability analysis for Choi-like maps.

The maps handled here act on square complex matrices as
Phi_A(X) = Delta_A(X) - X, where A is a nonnegative coefficient matrix
and Delta_A(X) collects weighted input diagonals.  The package provides
the analytic positivity / complete-positivity / decomposability
criteria for this family together with numerical certificate searches
(positivity violations and structured PPT indecomposability witnesses)
and a command-line front end.
"""

__version__ = "0.1.0"

from .linalg import (
    EigenResult,
    determinant,
    hermitian_eigenvalues,
    is_psd,
    outer_product,
    partial_transpose,
    product_vector,
    require_hermitian,
)
from .maps import (
    CklParams,
    CoefficientMatrix,
    FormClass,
    KyeParams,
    ScalingVector,
    apply_map,
    averaged_params,
    choi_matrix,
    classify_form,
    constant_ckl_matrix,
    cp_check,
    geometric_means,
    kye_matrix,
    scaled_ckl_matrix,
    shift_average,
    validate_coefficients,
)
from .criteria import (
    ConditionReport,
    InternalInconsistencyError,
    Verdict,
    average_necessary,
    b_only_necessary,
    boundary_proposition,
    boundary_witness_vector,
    c3_mean,
    ckl_is_indecomposable,
    ckl_is_positive,
    cyclic_form_witness,
    cyclic_form_witness_simple,
    cyclic_necessary,
    full_report,
    kye_check,
    n2_positive,
    pairwise_necessary,
    pairwise_sufficient,
    scaling_sufficient,
    scaling_sufficient_search,
    zero_pattern_witnesses,
)
from .search import (
    CounterexampleCheck,
    PptWitnessCertificate,
    SearchConfig,
    StructuredPptState,
    ViolationCertificate,
    assemble_structured_state,
    block_positivity_value,
    find_positivity_violation,
    gap_decomposition,
    indecomposability_probe,
    maximal_cross_terms,
    positivity_gap,
    structured_ppt_value,
    verify_counterexample,
)

__all__ = [
    "__version__",
    "EigenResult",
    "determinant",
    "hermitian_eigenvalues",
    "is_psd",
    "outer_product",
    "partial_transpose",
    "product_vector",
    "require_hermitian",
    "CklParams",
    "CoefficientMatrix",
    "FormClass",
    "KyeParams",
    "ScalingVector",
    "apply_map",
    "averaged_params",
    "choi_matrix",
    "classify_form",
    "constant_ckl_matrix",
    "cp_check",
    "geometric_means",
    "kye_matrix",
    "scaled_ckl_matrix",
    "shift_average",
    "validate_coefficients",
    "ConditionReport",
    "InternalInconsistencyError",
    "Verdict",
    "average_necessary",
    "b_only_necessary",
    "boundary_proposition",
    "boundary_witness_vector",
    "c3_mean",
    "ckl_is_indecomposable",
    "ckl_is_positive",
    "cyclic_form_witness",
    "cyclic_form_witness_simple",
    "cyclic_necessary",
    "full_report",
    "kye_check",
    "n2_positive",
    "pairwise_necessary",
    "pairwise_sufficient",
    "scaling_sufficient",
    "scaling_sufficient_search",
    "zero_pattern_witnesses",
    "CounterexampleCheck",
    "PptWitnessCertificate",
    "SearchConfig",
    "StructuredPptState",
    "ViolationCertificate",
    "assemble_structured_state",
    "block_positivity_value",
    "find_positivity_violation",
    "gap_decomposition",
    "indecomposability_probe",
    "maximal_cross_terms",
    "positivity_gap",
    "structured_ppt_value",
    "verify_counterexample",
]
