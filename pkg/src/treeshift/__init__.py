"""2-isometric weighted shifts on rooted directed trees: construction,
numerical verification, canonical decomposition, unitary-equivalence
decisions, and Cauchy-dual asymptotics."""

from .classify import (
    EquivalenceVerdict,
    NotEquivalentError,
    VerificationFailure,
    ZeroWeightError,
    construct_intertwiner,
    equiv_diagonal_opshifts,
    equiv_shift_sums,
    equiv_tree_shifts,
    multicyclicity_order,
)
from .dual import (
    ClassDetectionError,
    DualReport,
    IsometricInputError,
    asymptotic_closed_form,
    asymptotic_iterative,
    classify_c_classes,
    closed_form_cn,
    cn_bound,
    cn_limit,
    detect_class,
)
from .models import (
    CanonicalInvariant,
    VerificationError,
    build_weights_uwrem,
    decompose,
    model_atoms,
    opshift_to_shift_sum,
    root_norm,
    spectral_to_opshift,
    synthesize_from_invariant,
)
from .operators import (
    BrownianShift,
    DiagonalOpShift,
    NearSingularError,
    PropertyReport,
    ScalarShift,
    SpecError,
    SpectralData,
    TreeShift,
    TruncatedOperator,
    TruncationError,
    cauchy_dual,
    intertwine_residual,
    is_generation_lower_triangular,
    kernel_basis,
    moduli_product_residual,
    operator_modulus,
    power_gram_spectrum,
    property_report,
    truncate,
)
from .trees import (
    BranchingDegrees,
    TreeSkeleton,
    TreeValidationError,
    branching_degrees,
    example_2_plus_3,
    generation,
    graph_isomorphic,
    make_eta_kappa,
)
from .xi import DomainError, xi_cumulative, xi_eval, xi_next

__version__ = "0.1.0"

__all__ = [
    "BranchingDegrees",
    "BrownianShift",
    "CanonicalInvariant",
    "ClassDetectionError",
    "DiagonalOpShift",
    "DomainError",
    "DualReport",
    "EquivalenceVerdict",
    "IsometricInputError",
    "NearSingularError",
    "NotEquivalentError",
    "PropertyReport",
    "ScalarShift",
    "SpecError",
    "SpectralData",
    "TreeShift",
    "TreeSkeleton",
    "TreeValidationError",
    "TruncatedOperator",
    "TruncationError",
    "VerificationError",
    "VerificationFailure",
    "ZeroWeightError",
    "asymptotic_closed_form",
    "asymptotic_iterative",
    "branching_degrees",
    "build_weights_uwrem",
    "cauchy_dual",
    "classify_c_classes",
    "closed_form_cn",
    "cn_bound",
    "cn_limit",
    "construct_intertwiner",
    "decompose",
    "detect_class",
    "equiv_diagonal_opshifts",
    "equiv_shift_sums",
    "equiv_tree_shifts",
    "example_2_plus_3",
    "generation",
    "graph_isomorphic",
    "intertwine_residual",
    "is_generation_lower_triangular",
    "kernel_basis",
    "make_eta_kappa",
    "model_atoms",
    "moduli_product_residual",
    "multicyclicity_order",
    "operator_modulus",
    "opshift_to_shift_sum",
    "power_gram_spectrum",
    "property_report",
    "root_norm",
    "spectral_to_opshift",
    "synthesize_from_invariant",
    "truncate",
    "xi_cumulative",
    "xi_eval",
    "xi_next",
]
