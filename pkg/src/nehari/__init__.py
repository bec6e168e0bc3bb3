"""Optimal and restricted Nehari problems for rational matrix symbols.

Compute the distance of a strictly co-analytic rational symbol to the
bounded analytic functions, the unique optimal approximation under the
standard spectral conditions, and the central solutions of the problem
restricted to a ladder of shift-co-invariant subspaces, together with
verification that the restricted solutions converge geometrically at the
predicted spectral-radius rate.
"""

from .analysis import (
    SweepRecord,
    SweepReport,
    convergence_sweep,
    error_evaluator,
    optimality_certificate,
    supnorm_on_circle,
)
from .errors import (
    AmbiguousMultiplicityWarning,
    ConditionError,
    InputError,
    NehariError,
    NonUniqueMaximizerWarning,
    NumericalGuardError,
    QuadratureWarning,
    ZeroRestrictionWarning,
)
from .hankel import (
    HankelReport,
    RatePredictor,
    check_conditions,
    hankel_block,
    hankel_norm,
    rate_predictor,
)
from .realization import (
    GramianPair,
    Realization,
    check_minimal,
    eval_coanalytic,
    eval_coanalytic_grid,
    gramians,
    solve_stein,
    spectral_radius,
)
from .solver import (
    AnalyticRealization,
    CentralSolution,
    CorollaryEvaluator,
    HankelQuotient,
    aak_quotient,
    central_restricted,
    central_restricted_nm,
    corollary44_eval,
    defect_range_projection,
    full_m_inverse,
    full_nm_terms,
    lambda_matrix,
    solve_full_nehari,
)
from .subspace import (
    LadderBasis,
    RationalFunction,
    build_ladder,
    restricted_norm,
    w_on_basis,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMultiplicityWarning",
    "AnalyticRealization",
    "CentralSolution",
    "ConditionError",
    "CorollaryEvaluator",
    "GramianPair",
    "HankelQuotient",
    "HankelReport",
    "InputError",
    "LadderBasis",
    "NehariError",
    "NonUniqueMaximizerWarning",
    "NumericalGuardError",
    "QuadratureWarning",
    "RatePredictor",
    "RationalFunction",
    "Realization",
    "SweepRecord",
    "SweepReport",
    "ZeroRestrictionWarning",
    "aak_quotient",
    "build_ladder",
    "central_restricted",
    "central_restricted_nm",
    "check_conditions",
    "check_minimal",
    "convergence_sweep",
    "corollary44_eval",
    "defect_range_projection",
    "error_evaluator",
    "eval_coanalytic",
    "eval_coanalytic_grid",
    "full_m_inverse",
    "full_nm_terms",
    "gramians",
    "hankel_block",
    "hankel_norm",
    "lambda_matrix",
    "optimality_certificate",
    "rate_predictor",
    "restricted_norm",
    "solve_full_nehari",
    "solve_stein",
    "spectral_radius",
    "supnorm_on_circle",
    "w_on_basis",
]
