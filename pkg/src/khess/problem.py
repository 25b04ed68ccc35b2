"""Problem data for the radial Hessian system and its validation.

A problem couples two components.  Component ``i`` carries a Hessian order
``k_i``, a center value ``a_i``, a convection weight ``b_i(t)``, a source
weight ``p_i(t)`` and a nonlinearity ``f_i(u, v)``.  Validation checks the
structural hypotheses once and derives the normalization constants; the
numerical layers then trust the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import EvaluationDomainError, HypothesisViolationError
from .expressions import FuncSpec1D, FuncSpec2D, MonotoneReport, check_c1_monotone

__all__ = [
    "Component",
    "ProblemSpec",
    "ValidatedProblem",
    "ensure_validated",
    "validate_problem",
]

WEIGHT_SIGN_TOL = -1e-12


@dataclass(frozen=True)
class ProblemSpec:
    """Raw, unchecked problem data."""

    dim: int
    k1: int
    k2: int
    a1: float
    a2: float
    b1: FuncSpec1D
    b2: FuncSpec1D
    p1: FuncSpec1D
    p2: FuncSpec1D
    f1: FuncSpec2D
    f2: FuncSpec2D


class Component(NamedTuple):
    """Per-component view used by the kernel layer."""

    index: int
    order: int  # Hessian order k
    center: float  # value at the origin a
    convection: FuncSpec1D  # b
    source: FuncSpec1D  # p
    nonlinearity: FuncSpec2D  # f
    norm_const: float  # C(dim-1, k-1)/k == C(dim, k)/dim
    binom: int  # C(dim-1, k-1)


@dataclass(frozen=True)
class ValidatedProblem:
    """Problem data that passed the structural checks.

    ``norm_const1``/``norm_const2`` are the radial normalization constants
    ``C(dim-1, k-1)/k`` for each component, ``binom1``/``binom2`` the raw
    binomials ``C(dim-1, k-1)``.  ``ko_denominator_positive`` records
    whether the sampled growth denominator stayed positive; table builders
    that need it re-check and raise on violation.
    """

    dim: int
    k1: int
    k2: int
    a1: float
    a2: float
    b1: FuncSpec1D
    b2: FuncSpec1D
    p1: FuncSpec1D
    p2: FuncSpec1D
    f1: FuncSpec2D
    f2: FuncSpec2D
    norm_const1: float
    norm_const2: float
    binom1: int
    binom2: int
    ko_denominator_positive: bool
    monotone_report1: MonotoneReport
    monotone_report2: MonotoneReport

    @property
    def center_sum(self) -> float:
        return self.a1 + self.a2

    def component(self, index: int) -> Component:
        if index == 1:
            return Component(
                1, self.k1, self.a1, self.b1, self.p1, self.f1,
                self.norm_const1, self.binom1,
            )
        if index == 2:
            return Component(
                2, self.k2, self.a2, self.b2, self.p2, self.f2,
                self.norm_const2, self.binom2,
            )
        raise ValueError(f"component index must be 1 or 2, got {index!r}")

    def components(self) -> tuple[Component, Component]:
        return self.component(1), self.component(2)

    def nonlinearity_root(self, index: int, u, v):
        """``f_i(u, v) ** (1/k_i)`` with the component's own order."""
        comp = self.component(index)
        return np.power(comp.nonlinearity(u, v), 1.0 / comp.order)

    def ko_denominator(self, t):
        """``f1(t, t)^(1/k1) + f2(t, t)^(1/k2)``, the growth-rate denominator."""
        return self.nonlinearity_root(1, t, t) + self.nonlinearity_root(2, t, t)


def _norm_const_exact(dim: int, k: int) -> float:
    # C(dim-1, k-1)/k; equals C(dim, k)/dim, which validation re-asserts
    value = Fraction(math.comb(dim - 1, k - 1), k)
    assert value == Fraction(math.comb(dim, k), dim)
    return float(value)


def _check_weight(name: str, func: FuncSpec1D, radius: float, samples: int) -> None:
    ts = np.concatenate(
        (
            np.linspace(0.0, radius, samples),
            np.geomspace(1e-8, max(radius, 1e-8), 32),
        )
    )
    try:
        values = func(ts)
    except EvaluationDomainError as exc:
        raise HypothesisViolationError(
            f"weight {name} ({func.source!r}) failed to evaluate: {exc}"
        ) from exc
    worst = int(np.argmin(values))
    if values[worst] < WEIGHT_SIGN_TOL:
        raise HypothesisViolationError(
            f"weight {name} ({func.source!r}) is negative at t={ts[worst]!r}: "
            f"{values[worst]!r}"
        )


def _check_nonlinearity(
    name: str, func: FuncSpec2D, box: tuple[float, float], lattice: int
) -> MonotoneReport:
    try:
        report = check_c1_monotone(func, box=box, n=lattice)
    except EvaluationDomainError as exc:
        raise HypothesisViolationError(
            f"nonlinearity {name} ({func.source!r}) failed on the lattice: {exc}"
        ) from exc
    if not (report.is_nondecreasing_u and report.is_nondecreasing_v):
        v = report.worst_violation
        raise HypothesisViolationError(
            f"nonlinearity {name} ({func.source!r}) decreases along {v.axis} "
            f"near (u, v)={v.location}: step {v.decrease!r}"
        )
    return report


def validate_problem(
    spec: ProblemSpec,
    *,
    weight_radius: float = 50.0,
    weight_samples: int = 256,
    monotone_box: tuple[float, float] = (10.0, 10.0),
    monotone_lattice: int = 50,
    denominator_span: float = 100.0,
    denominator_samples: int = 128,
) -> ValidatedProblem:
    """Check the structural hypotheses and derive the constants.

    Raises ``HypothesisViolationError`` on sign or monotonicity failures.
    The growth-denominator positivity result is recorded rather than
    enforced here: a degenerate (vanishing) nonlinearity pair still solves
    fine, it just has no growth-rate machinery.
    """
    dim, k1, k2 = spec.dim, spec.k1, spec.k2
    if not (isinstance(dim, int) and dim >= 3):
        raise HypothesisViolationError(f"dimension must be an integer >= 3, got {dim!r}")
    for label, k in (("k1", k1), ("k2", k2)):
        if not (isinstance(k, int) and 1 <= k <= dim):
            raise HypothesisViolationError(
                f"{label} must be an integer in [1, {dim}], got {k!r}"
            )
    a1, a2 = float(spec.a1), float(spec.a2)
    if not (math.isfinite(a1) and math.isfinite(a2)) or a1 < 0 or a2 < 0:
        raise HypothesisViolationError(
            f"center values must be finite and nonnegative, got {a1!r}, {a2!r}"
        )
    if a1 + a2 <= 0:
        raise HypothesisViolationError("center values must not both vanish")

    for name, func in (("b1", spec.b1), ("b2", spec.b2), ("p1", spec.p1), ("p2", spec.p2)):
        _check_weight(name, func, weight_radius, weight_samples)
    report1 = _check_nonlinearity("f1", spec.f1, monotone_box, monotone_lattice)
    report2 = _check_nonlinearity("f2", spec.f2, monotone_box, monotone_lattice)

    validated = ValidatedProblem(
        dim=dim,
        k1=k1,
        k2=k2,
        a1=a1,
        a2=a2,
        b1=spec.b1,
        b2=spec.b2,
        p1=spec.p1,
        p2=spec.p2,
        f1=spec.f1,
        f2=spec.f2,
        norm_const1=_norm_const_exact(dim, k1),
        norm_const2=_norm_const_exact(dim, k2),
        binom1=math.comb(dim - 1, k1 - 1),
        binom2=math.comb(dim - 1, k2 - 1),
        ko_denominator_positive=True,
        monotone_report1=report1,
        monotone_report2=report2,
    )

    start = a1 + a2
    ts = np.unique(
        np.concatenate(
            (
                np.linspace(start, start + denominator_span, denominator_samples),
                start * np.geomspace(1.0, 1e4, 32),
            )
        )
    )
    try:
        denom = validated.ko_denominator(ts)
        positive = bool((denom > 0.0).all())
    except EvaluationDomainError:
        positive = False
    if not positive:
        validated = replace(validated, ko_denominator_positive=False)
    return validated


def ensure_validated(problem) -> ValidatedProblem:
    """Accept either raw or validated problem data."""
    if isinstance(problem, ValidatedProblem):
        return problem
    if isinstance(problem, ProblemSpec):
        return validate_problem(problem)
    raise TypeError(
        f"expected ProblemSpec or ValidatedProblem, got {type(problem).__name__}"
    )
