"""Estimator-style front end over the functional core.

Thin wrappers in the scikit-learn idiom: constructors only record
hyperparameters, ``fit`` does the work and stores trailing-underscore
attributes, ``get_params``/``set_params`` come from ``BaseEstimator``.
``fit`` takes a problem description instead of a sample matrix; prediction
queries the fitted radial profiles.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .classify import classify
from .problem import ensure_validated
from .quadrature import LimitPolicy, RadialGrid
from .solver import solve_successive

__all__ = ["HessianSystemSolver", "HessianSystemClassifier"]


class HessianSystemSolver(BaseEstimator):
    """Fit a radial profile pair by successive approximation.

    Parameters mirror the numerical configuration: domain ``radius``,
    node ``count``, sup-norm ``tol``, sweep cap ``max_sweeps``, the
    ``blowup_ceiling`` and the grid flavor (``"uniform"`` or
    ``"geometric"`` with the given ``growth``).
    """

    def __init__(
        self,
        radius: float = 3.0,
        count: int = 601,
        tol: float = 1e-10,
        max_sweeps: int = 60,
        blowup_ceiling: float = 1e12,
        grid_kind: str = "uniform",
        growth: float = 1.05,
    ):
        self.radius = radius
        self.count = count
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.blowup_ceiling = blowup_ceiling
        self.grid_kind = grid_kind
        self.growth = growth

    def _grid(self) -> RadialGrid:
        if self.grid_kind == "uniform":
            return RadialGrid.uniform(self.radius, self.count)
        if self.grid_kind == "geometric":
            return RadialGrid.geometric(self.radius, self.count, self.growth)
        raise ValueError(f"unknown grid kind {self.grid_kind!r}")

    def fit(self, problem, y=None):
        validated = ensure_validated(problem)
        solution, trace = solve_successive(
            validated,
            self._grid(),
            tol=self.tol,
            max_sweeps=self.max_sweeps,
            blowup_ceiling=self.blowup_ceiling,
        )
        self.problem_ = validated
        self.solution_ = solution
        self.trace_ = trace
        self.converged_ = trace.converged
        self.n_iter_ = trace.sweeps
        return self

    def predict(self, r):
        """Profile values at the query radii, one row per radius."""
        check_is_fitted(self, "solution_")
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return np.column_stack((self.solution_.u1(r), self.solution_.u2(r)))

    def predict_slope(self, r):
        """Profile slopes at the query radii, one row per radius."""
        check_is_fitted(self, "solution_")
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return np.column_stack((self.solution_.du1(r), self.solution_.du2(r)))


class HessianSystemClassifier(BaseEstimator):
    """Classify problems by their limit facts at infinity."""

    def __init__(
        self,
        r_max: float = float(2**20),
        window_count: int = 3,
        decay_threshold: float = 0.75,
    ):
        self.r_max = r_max
        self.window_count = window_count
        self.decay_threshold = decay_threshold

    def _policy(self) -> LimitPolicy:
        return LimitPolicy(
            r_max=self.r_max,
            window_count=self.window_count,
            decay_threshold=self.decay_threshold,
        )

    def fit(self, problem, y=None):
        validated = ensure_validated(problem)
        self.problem_ = validated
        self.report_ = classify(validated, self._policy())
        return self

    def predict(self, problems=None):
        """Verdicts for an iterable of problems, or the fitted verdict."""
        if problems is None:
            check_is_fitted(self, "report_")
            return np.array([self.report_.verdict])
        policy = self._policy()
        return np.array(
            [classify(ensure_validated(p), policy).verdict for p in problems]
        )
