"""Limit-based classification and the two-sided bound envelope.

The three limit facts (two growth budgets and the growth-rate integral at
infinity) drive a decision table:

* growth rate divergent, both budgets finite: every entire solution pair
  is bounded;
* growth rate divergent, both budgets divergent: solutions are large
  (grow without bound);
* growth rate divergent, budgets split: outside the covered theory;
* everything finite with the growth-rate limit exceeding the budget sum
  by more than the numerical error budget: bounded with an explicit
  envelope;
* anything else, including any inconclusive limit: inconclusive.

The envelope itself combines the pointwise lower bounds
``a_i + f_i(a1, a2)^(1/k_i) * budget_i(r)`` with the upper bound obtained
by inverting the growth-rate integral at the budget sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernels import (
    KernelTables,
    TailLimits,
    build_tables,
    keller_osserman_inverse_many,
    tail_limits,
)
from .problem import ValidatedProblem
from .quadrature import GridFunction, LimitEstimate, LimitPolicy, RadialGrid

__all__ = [
    "VERDICTS",
    "BoundEnvelope",
    "ClassificationReport",
    "classify",
    "classify_from_limits",
    "envelope",
]

VERDICTS = (
    "Theorem1_Case1_bounded",
    "Theorem1_Case2_large",
    "Theorem2_bounded_with_envelope",
    "mixed_case_out_of_scope",
    "inconclusive",
)


@dataclass(frozen=True)
class ClassificationReport:
    """Limit facts, the verdict they support, and the margin backing it.

    ``theorem2_margin`` is the growth-rate limit minus the budget-sum
    limit whenever all three are finite (it may well be negative);
    ``error_budget`` is the summed error bounds of those limits.  The
    bounded-with-envelope verdict requires the margin to exceed the error
    budget.
    """

    ko_limit: LimitEstimate
    budget1_limit: LimitEstimate
    budget2_limit: LimitEstimate
    verdict: str
    theorem2_margin: float | None = None
    error_budget: float | None = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")


@dataclass(frozen=True, eq=False)
class BoundEnvelope:
    """Pointwise bounds: two lower profiles and one bound on the sum."""

    lower1: GridFunction
    lower2: GridFunction
    upper_sum: GridFunction


def classify_from_limits(limits: TailLimits) -> ClassificationReport:
    """Apply the decision table to precomputed limit facts."""
    ko, b1, b2 = limits.ko, limits.budget1, limits.budget2
    margin = None
    error_budget = None
    if ko.verdict == b1.verdict == b2.verdict == "finite":
        margin = ko.value - (b1.value + b2.value)
        error_budget = ko.error_bound + b1.error_bound + b2.error_bound

    if "inconclusive" in (ko.verdict, b1.verdict, b2.verdict):
        verdict = "inconclusive"
    elif ko.verdict == "divergent":
        finite_budgets = (b1.verdict == "finite") + (b2.verdict == "finite")
        if finite_budgets == 2:
            verdict = "Theorem1_Case1_bounded"
        elif finite_budgets == 0:
            verdict = "Theorem1_Case2_large"
        else:
            verdict = "mixed_case_out_of_scope"
    else:  # growth rate finite
        if margin is not None and margin > error_budget:
            verdict = "Theorem2_bounded_with_envelope"
        else:
            # covers a negative or unresolvable margin and the uncovered
            # finite-rate / divergent-budget combination
            verdict = "inconclusive"
    return ClassificationReport(
        ko_limit=ko,
        budget1_limit=b1,
        budget2_limit=b2,
        verdict=verdict,
        theorem2_margin=margin,
        error_budget=error_budget,
    )


def classify(
    problem: ValidatedProblem, policy: LimitPolicy | None = None
) -> ClassificationReport:
    """Compute the limit facts and classify the problem."""
    return classify_from_limits(tail_limits(problem, policy))


def envelope(
    problem: ValidatedProblem,
    tables: KernelTables | None = None,
    grid: RadialGrid | None = None,
) -> BoundEnvelope:
    """Two-sided envelope on the tables' grid.

    Lower bounds evaluate the nonlinearities at the center pair; the upper
    bound inverts the growth-rate integral at the budget sum, node by
    node.  A budget sum beyond the covered growth-rate range raises
    ``TableRangeError`` (with an s_max suggestion when extending can
    help).
    """
    if tables is None:
        if grid is None:
            raise ValueError("need either prebuilt tables or a grid")
        tables = build_tables(problem, grid, with_limits=False)
    grid = tables.grid
    ko_nodes, ko_values = tables.require_ko()

    root1 = float(problem.nonlinearity_root(1, problem.a1, problem.a2))
    root2 = float(problem.nonlinearity_root(2, problem.a1, problem.a2))
    lower1 = GridFunction(grid, problem.a1 + root1 * tables.budget1.values)
    lower2 = GridFunction(grid, problem.a2 + root2 * tables.budget2.values)

    budget_sum = tables.budget1.values + tables.budget2.values
    upper = keller_osserman_inverse_many(problem, ko_nodes, ko_values, budget_sum)
    return BoundEnvelope(
        lower1=lower1,
        lower2=lower2,
        upper_sum=GridFunction(grid, upper),
    )
