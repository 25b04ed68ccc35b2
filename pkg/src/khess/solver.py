"""Successive approximation for the coupled radial system.

Starting from the constant pair of center values, each sweep feeds the
current pair through the nonlinearities and integrates the slope kernels.
Loads only ever grow under this map, so iterates are nondecreasing both in
radius and from sweep to sweep; convergence is measured in the sup norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError
from .kernels import SlopeOperator
from .problem import ValidatedProblem
from .quadrature import GridFunction, RadialGrid

__all__ = [
    "IterationTrace",
    "SolutionPair",
    "iterate_once",
    "solve_successive",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 60
DEFAULT_BLOWUP_CEILING = 1e12


@dataclass(eq=False)
class IterationTrace:
    """History of one successive-approximation run."""

    iterates: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    sup_deltas: list[float] = field(default_factory=list)
    converged: bool = False
    sweeps: int = 0


@dataclass(frozen=True, eq=False)
class SolutionPair:
    """Converged (or best-effort) profile pair with slopes."""

    u1: GridFunction
    u2: GridFunction
    du1: GridFunction
    du2: GridFunction
    center: tuple[float, float]

    @property
    def grid(self) -> RadialGrid:
        return self.u1.grid

    @property
    def radius(self) -> float:
        return self.u1.grid.radius


def _operators(problem: ValidatedProblem, grid: RadialGrid):
    return SlopeOperator(problem, 1, grid), SlopeOperator(problem, 2, grid)


def iterate_once(
    problem: ValidatedProblem,
    grid: RadialGrid,
    current: tuple[np.ndarray, np.ndarray],
    operators: tuple[SlopeOperator, SlopeOperator] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """One sweep: push the current pair through both slope kernels."""
    op1, op2 = operators or _operators(problem, grid)
    u1, u2 = (np.asarray(u, dtype=float) for u in current)
    w1 = problem.f1(u1, u2)
    w2 = problem.f2(u1, u2)
    _, cum1 = op1.apply(w1)
    _, cum2 = op2.apply(w2)
    return problem.a1 + cum1, problem.a2 + cum2


def solve_successive(
    problem: ValidatedProblem,
    grid: RadialGrid,
    *,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    blowup_ceiling: float = DEFAULT_BLOWUP_CEILING,
    keep_iterates: bool = True,
) -> tuple[SolutionPair, IterationTrace]:
    """Run successive approximation from the constant center pair.

    Stops when the sup-norm step drops below ``tol``.  Exceeding
    ``blowup_ceiling`` anywhere raises ``BlowUpError`` (finite-radius
    blow-up suspected); exhausting ``max_sweeps`` returns the last pair
    with ``converged=False`` so callers can inspect the trace.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if max_sweeps < 1:
        raise ValueError("need at least one sweep")
    ops = _operators(problem, grid)
    u1 = np.full(grid.size, problem.a1)
    u2 = np.full(grid.size, problem.a2)
    trace = IterationTrace()
    if keep_iterates:
        trace.iterates.append((u1.copy(), u2.copy()))

    for sweep in range(1, max_sweeps + 1):
        new1, new2 = iterate_once(problem, grid, (u1, u2), ops)
        ceiling_hit = max(new1[-1], new2[-1])
        if ceiling_hit > blowup_ceiling:
            raise BlowUpError(
                "iterates exceeded the blow-up ceiling: finite-radius blow-up "
                f"suspected inside radius {grid.radius!r}",
                radius=float(
                    grid.nodes[
                        int(
                            np.argmax(
                                np.maximum(new1, new2) > blowup_ceiling
                            )
                        )
                    ]
                ),
                ceiling=blowup_ceiling,
            )
        delta = max(
            float(np.max(np.abs(new1 - u1))), float(np.max(np.abs(new2 - u2)))
        )
        u1, u2 = new1, new2
        trace.sup_deltas.append(delta)
        trace.sweeps = sweep
        if keep_iterates:
            trace.iterates.append((u1.copy(), u2.copy()))
        if delta < tol:
            trace.converged = True
            break

    op1, op2 = ops
    du1, _ = op1.apply(problem.f1(u1, u2))
    du2, _ = op2.apply(problem.f2(u1, u2))
    pair = SolutionPair(
        u1=GridFunction(grid, u1),
        u2=GridFunction(grid, u2),
        du1=GridFunction(grid, du1),
        du2=GridFunction(grid, du2),
        center=(problem.a1, problem.a2),
    )
    return pair, trace
