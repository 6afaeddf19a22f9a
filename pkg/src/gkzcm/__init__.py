"""Exact Cohen-Macaulay tests for toric rings, their initial ideals and GKZ systems."""

from .errors import (
    DimensionError,
    EmptyVarietyError,
    GkzError,
    GradingError,
    InconclusiveError,
    MatrixValidationError,
    ParseError,
    RingMismatchError,
    UndefinedInputError,
    UnsupportedDimensionError,
    UnsupportedWeightError,
)
from .gkz import (
    CMReport,
    EulerOperators,
    classify,
    euler_operators,
    gkz_ideal,
    gr_gkz,
    gr_gkz_homogenized,
    homogenized_betti_check,
    initial_toric,
    toric_plus_euler,
)
from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    check_groebner,
    eliminate,
    ideal_contains,
    ideal_equal,
    ideal_quotient,
    initial_ideal,
    intersect,
    is_regular_sequence,
    krull_dimension,
    normal_form,
    saturate,
)
from .poly import (
    DEGREVLEX,
    MonomialOrder,
    PolyRing,
    Polynomial,
    compare_monomials,
    grading_degree,
    initial_form,
    multiply,
    parse_polynomial,
)
from .resolution import (
    BettiTable,
    GradedFreeModule,
    HomologicalSummary,
    ResolutionStep,
    betti_table,
    homological_summary,
    is_cohen_macaulay_quotient,
    minimal_free_resolution,
    syzygies,
)
from .toric import (
    IntegerMatrix,
    Umbrella,
    lattice_kernel,
    semigroup_cm_dim2,
    semigroup_membership,
    toric_ideal,
    umbrella,
    umbrella_consistency_check,
)
from .weyl import (
    AdmissibleWeight,
    WeylAlgebra,
    WeylElement,
    WeylIdeal,
    dehomogenize,
    gr_initial_ideal,
    homogenize,
    weyl_buchberger,
    weyl_multiply,
    weyl_normal_form,
)

__version__ = "0.1.0"
