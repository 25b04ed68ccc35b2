"""Radial profiles of coupled Hessian systems with convection.

Construct positive radial profile pairs by successive approximation,
classify their behavior at infinity from limit facts, bound them with a
two-sided envelope, and verify everything independently.
"""

from .classify import (
    VERDICTS,
    BoundEnvelope,
    ClassificationReport,
    classify,
    classify_from_limits,
    envelope,
)
from .errors import (
    BlowUpError,
    ConfigError,
    EvaluationDomainError,
    ExpressionSyntaxError,
    HypothesisViolationError,
    KernelOverflowError,
    KhessError,
    NumericalFailureError,
    QuadratureToleranceError,
    TableRangeError,
    UnknownIdentifierError,
)
from .estimators import HessianSystemClassifier, HessianSystemSolver
from .expressions import (
    FuncSpec1D,
    FuncSpec2D,
    MonotoneReport,
    check_c1_monotone,
    parse_func_1d,
    parse_func_2d,
    to_source,
)
from .kernels import (
    KernelTables,
    SlopeOperator,
    TailLimits,
    build_tables,
    convection_exponent_table,
    growth_budget_table,
    keller_osserman_inverse,
    keller_osserman_inverse_many,
    keller_osserman_table,
    keller_osserman_value,
    slope_kernel,
    tail_limits,
)
from .problem import (
    Component,
    ProblemSpec,
    ValidatedProblem,
    ensure_validated,
    validate_problem,
)
from .quadrature import (
    GridFunction,
    LimitEstimate,
    LimitPolicy,
    RadialGrid,
    adaptive_integral,
    cumulative_integral,
    estimate_limit,
    limit_from_windows,
)
from .solver import IterationTrace, SolutionPair, iterate_once, solve_successive
from .verify import (
    ConvexityReport,
    VerificationReport,
    check_envelope,
    check_monotone_iterates,
    convexity_gap,
    convexity_report,
    hessian_forms_consistency,
    ode_residual,
    residual_maxima,
    verification_report,
)

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "BoundEnvelope",
    "ClassificationReport",
    "Component",
    "ConfigError",
    "ConvexityReport",
    "EvaluationDomainError",
    "ExpressionSyntaxError",
    "FuncSpec1D",
    "FuncSpec2D",
    "GridFunction",
    "HessianSystemClassifier",
    "HessianSystemSolver",
    "HypothesisViolationError",
    "IterationTrace",
    "KernelOverflowError",
    "KernelTables",
    "KhessError",
    "LimitEstimate",
    "LimitPolicy",
    "MonotoneReport",
    "NumericalFailureError",
    "ProblemSpec",
    "QuadratureToleranceError",
    "RadialGrid",
    "SlopeOperator",
    "SolutionPair",
    "TableRangeError",
    "TailLimits",
    "UnknownIdentifierError",
    "ValidatedProblem",
    "VERDICTS",
    "VerificationReport",
    "adaptive_integral",
    "build_tables",
    "check_c1_monotone",
    "check_envelope",
    "check_monotone_iterates",
    "classify",
    "classify_from_limits",
    "convection_exponent_table",
    "convexity_gap",
    "convexity_report",
    "cumulative_integral",
    "ensure_validated",
    "envelope",
    "estimate_limit",
    "limit_from_windows",
    "growth_budget_table",
    "hessian_forms_consistency",
    "iterate_once",
    "keller_osserman_inverse",
    "keller_osserman_inverse_many",
    "keller_osserman_table",
    "keller_osserman_value",
    "ode_residual",
    "parse_func_1d",
    "parse_func_2d",
    "residual_maxima",
    "slope_kernel",
    "solve_successive",
    "tail_limits",
    "to_source",
    "validate_problem",
    "verification_report",
]
