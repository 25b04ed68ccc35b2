"""Radial grids and the integration primitives built on them.

Three layers:

* ``cumulative_integral`` turns node samples into a running antiderivative
  using cubic-exact four-point stencils on uniform grids (trapezoid on
  irregular spacing), preserving monotonicity for nonnegative data.
* ``adaptive_integral`` is classic adaptive Simpson with Richardson
  extrapolation and a hard subdivision depth cap.
* ``estimate_limit`` decides whether an improper integral of a nonnegative
  integrand converges, by comparing geometrically growing windows, and
  extrapolates the tail when the last windows decay geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationDomainError, QuadratureToleranceError

__all__ = [
    "RadialGrid",
    "GridFunction",
    "LimitEstimate",
    "LimitPolicy",
    "adaptive_integral",
    "cumulative_integral",
    "estimate_limit",
    "limit_from_windows",
]

_ADAPTIVE_DEPTH_CAP = 50
_UNIFORM_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing nodes starting at the origin."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("grid needs at least 3 nodes (2 intervals)")
        if nodes[0] != 0.0:
            raise ValueError(f"first node must be 0, got {nodes[0]!r}")
        if not np.isfinite(nodes).all():
            raise ValueError("grid nodes must be finite")
        if not (np.diff(nodes) > 0).all():
            raise ValueError("grid nodes must be strictly increasing")

    @classmethod
    def uniform(cls, radius: float, count: int) -> "RadialGrid":
        """``count`` nodes equally spaced on ``[0, radius]``."""
        if radius <= 0:
            raise ValueError("radius must be positive")
        return cls(np.linspace(0.0, float(radius), int(count)))

    @classmethod
    def geometric(cls, radius: float, count: int, growth: float = 1.05) -> "RadialGrid":
        """``count`` nodes on ``[0, radius]`` with spacing growing by ``growth``."""
        if radius <= 0:
            raise ValueError("radius must be positive")
        if growth <= 1.0:
            return cls.uniform(radius, count)
        m = int(count) - 1
        steps = growth ** np.arange(m)
        nodes = np.concatenate(([0.0], np.cumsum(steps)))
        nodes *= float(radius) / nodes[-1]
        nodes[-1] = float(radius)
        return cls(nodes)

    @property
    def radius(self) -> float:
        return float(self.nodes[-1])

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def is_uniform(self) -> bool:
        h = np.diff(self.nodes)
        return bool(np.ptp(h) <= _UNIFORM_RTOL * h.max())

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a scalar function at grid nodes."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid {self.grid.nodes.shape}"
            )

    def __call__(self, r):
        """Linear interpolation inside the grid; no extrapolation."""
        r = np.asarray(r, dtype=float)
        if (r < 0).any() or (r > self.grid.radius * (1 + 1e-12)).any():
            raise ValueError("query point outside the grid range")
        return np.interp(r, self.grid.nodes, self.values)


def _stencil_increments_uniform(values: np.ndarray, h: float) -> np.ndarray:
    """Per-interval increments exact for cubics at every node.

    Each interval integral uses the cubic through the four nearest nodes:
    interior weights (-1, 13, 13, -1)/24, boundary (9, 19, -5, 1)/24 and
    its mirror.  With only 3 nodes, the quadratic rules (5, 8, -1)/12 and
    (-1, 8, 5)/12 apply.
    """
    m = values.size - 1
    inc = np.empty(m)
    if m == 2:
        inc[0] = h * (5 * values[0] + 8 * values[1] - values[2]) / 12.0
        inc[1] = h * (-values[0] + 8 * values[1] + 5 * values[2]) / 12.0
        return inc
    inc[0] = h * (9 * values[0] + 19 * values[1] - 5 * values[2] + values[3]) / 24.0
    inc[-1] = h * (values[-4] - 5 * values[-3] + 19 * values[-2] + 9 * values[-1]) / 24.0
    if m > 2:
        a, b, c, d = values[:-3], values[1:-2], values[2:-1], values[3:]
        inc[1:-1] = h * (-a + 13 * b + 13 * c - d) / 24.0
    return inc


def cumulative_integral(samples: GridFunction) -> GridFunction:
    """Running integral of node samples, anchored at 0 on the first node.

    Nonnegative samples yield a nondecreasing result: the higher-order
    stencil increments are clamped at zero in that case, so single-node
    roughness cannot push the running sum backwards.
    """
    values = samples.values
    if not np.isfinite(values).all():
        idx = int(np.argmax(~np.isfinite(values)))
        raise EvaluationDomainError(
            f"non-finite sample at node r={samples.grid.nodes[idx]!r}",
            (float(samples.grid.nodes[idx]),),
        )
    nodes = samples.grid.nodes
    if samples.grid.is_uniform:
        h = (nodes[-1] - nodes[0]) / (nodes.size - 1)
        inc = _stencil_increments_uniform(values, h)
    else:
        inc = 0.5 * np.diff(nodes) * (values[:-1] + values[1:])
    if (values >= 0.0).all():
        np.maximum(inc, 0.0, out=inc)
    out = np.empty_like(values)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return GridFunction(samples.grid, out)


def _eval_checked(f: Callable[[float], float], x: float) -> float:
    try:
        y = float(f(x))
    except ZeroDivisionError:
        # scalar arithmetic raises where array arithmetic would yield inf
        exc = EvaluationDomainError(f"integrand divides by zero at {x!r}", (x,))
        exc.bad_value = math.inf
        raise exc from None
    if not math.isfinite(y):
        exc = EvaluationDomainError(f"integrand is not finite at {x!r}", (x,))
        exc.bad_value = y
        raise exc
    return y


def adaptive_integral(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Adaptive Simpson integral of ``f`` over ``[lo, hi]``.

    Returns ``(value, error_estimate)``.  Exceeding the recursion depth cap
    raises ``QuadratureToleranceError`` carrying the best value so far.
    """
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration endpoints must be finite")
    if hi < lo:
        raise ValueError(f"reversed interval [{lo}, {hi}]")
    if hi == lo:
        return 0.0, 0.0
    if tol <= 0:
        raise ValueError("tolerance must be positive")

    capped = False

    def recurse(a, fa, b, fb, m, fm, whole, budget, depth):
        nonlocal capped
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _eval_checked(f, lm)
        frm = _eval_checked(f, rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * budget or depth >= _ADAPTIVE_DEPTH_CAP:
            if abs(delta) > 15.0 * budget:
                capped = True
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(a, fa, m, fm, lm, flm, left, budget / 2.0, depth + 1)
        rv, re = recurse(m, fm, b, fb, rm, frm, right, budget / 2.0, depth + 1)
        return lv + rv, le + re

    mid = 0.5 * (lo + hi)
    f_lo, f_mid, f_hi = (_eval_checked(f, x) for x in (lo, mid, hi))
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    value, err = recurse(lo, f_lo, hi, f_hi, mid, f_mid, whole, tol, 0)
    if capped:
        raise QuadratureToleranceError(
            f"depth cap {_ADAPTIVE_DEPTH_CAP} hit on [{lo}, {hi}]; "
            f"best value {value!r} with error estimate {err!r}",
            best_value=value,
            error_estimate=err,
        )
    return value, err


@dataclass(frozen=True)
class LimitPolicy:
    """Tunables for improper-integral verdicts.

    ``decay_threshold`` is the window ratio below which the tail is treated
    as geometric and summable.  Inverse-square tails give ratios approaching
    1/2 from above, so the threshold sits strictly between 1/2 and 1.
    """

    r_max: float = float(2**20)
    window_count: int = 3
    decay_threshold: float = 0.75
    growth_slack: float = 1e-9
    window_tol: float = 1e-10
    window_ceiling: float = 1e15

    def __post_init__(self):
        if self.r_max <= 0 or not math.isfinite(self.r_max):
            raise ValueError("r_max must be positive and finite")
        if self.window_count < 1:
            raise ValueError("window_count must be at least 1")
        if not 0.0 < self.decay_threshold < 1.0:
            raise ValueError("decay_threshold must sit in (0, 1)")


@dataclass(frozen=True)
class LimitEstimate:
    """Verdict on an improper integral from some start radius to infinity.

    ``value`` and ``error_bound`` are set only for a ``finite`` verdict;
    ``evidence`` records the last observed window-to-window ratio and
    ``windows_used`` how many doubling windows supported the verdict.
    """

    verdict: str  # "finite" | "divergent" | "inconclusive"
    value: float | None = None
    error_bound: float | None = None
    evidence: float = math.nan
    windows_used: int = 0

    def __post_init__(self):
        if self.verdict not in ("finite", "divergent", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "finite":
            if self.value is None or not math.isfinite(self.value):
                raise ValueError("finite verdict needs a finite value")
            if self.error_bound is None or self.error_bound < 0:
                raise ValueError("finite verdict needs a nonnegative error bound")
        elif self.value is not None:
            raise ValueError(f"{self.verdict} verdict must not carry a value")


_ZERO_WINDOW = 1e-300


def limit_from_windows(
    windows: np.ndarray,
    window_errors: np.ndarray,
    policy: LimitPolicy,
    prefix: float = 0.0,
    prefix_error: float = 0.0,
) -> LimitEstimate:
    """Verdict from a sequence of doubling-window integrals.

    Only the last ``policy.window_count`` window-to-window ratios vote:
    all below ``decay_threshold`` means a summable geometric tail (the
    remainder past the last window is extrapolated from the final ratio,
    and the ratio spread feeds the error bound); all at or above one,
    minus a slack, means divergent; anything else is inconclusive.  Early
    windows get no vote; growing transients are common even for
    convergent integrals.
    """
    windows = np.asarray(windows, dtype=float)
    errors = np.asarray(window_errors, dtype=float)
    n_windows = windows.size
    if n_windows < policy.window_count + 1:
        return LimitEstimate(
            verdict="inconclusive", evidence=math.nan, windows_used=n_windows
        )
    if not np.isfinite(windows).all() or (windows > policy.window_ceiling).any():
        bad = int(np.argmax(~np.isfinite(windows) | (windows > policy.window_ceiling)))
        return LimitEstimate(verdict="divergent", evidence=math.inf, windows_used=bad)

    tail_windows = windows[-policy.window_count :]
    if (tail_windows < _ZERO_WINDOW).all():
        return LimitEstimate(
            verdict="finite",
            value=float(prefix + windows.sum()),
            error_bound=float(prefix_error + errors.sum()),
            evidence=0.0,
            windows_used=n_windows,
        )

    prev = windows[-policy.window_count - 1 :][:-1]
    nxt = windows[-policy.window_count :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(prev > 0, nxt / prev, np.inf)

    last_ratio = float(ratios[-1])
    if (ratios < policy.decay_threshold).all():
        rho_lo = float(ratios.min())
        rho_hi = float(ratios.max())
        tail_lo = float(windows[-1]) * rho_lo / (1.0 - rho_lo)
        tail_hi = float(windows[-1]) * rho_hi / (1.0 - rho_hi)
        value = (
            prefix
            + float(windows.sum())
            + float(windows[-1]) * last_ratio / (1.0 - last_ratio)
        )
        bound = (
            prefix_error
            + float(errors.sum())
            + (tail_hi - tail_lo)
            + 1e-15 * abs(value)
        )
        return LimitEstimate(
            verdict="finite",
            value=float(value),
            error_bound=float(bound),
            evidence=last_ratio,
            windows_used=n_windows,
        )
    if (ratios >= 1.0 - policy.growth_slack).all():
        return LimitEstimate(
            verdict="divergent", evidence=last_ratio, windows_used=n_windows
        )
    return LimitEstimate(
        verdict="inconclusive", evidence=last_ratio, windows_used=n_windows
    )


def estimate_limit(
    f: Callable[[float], float],
    start: float,
    policy: LimitPolicy | None = None,
) -> LimitEstimate:
    """Classify ``integral of f from start to infinity`` for nonnegative ``f``.

    Integrates over doubling windows ``[start*2^j, start*2^(j+1)]`` up to
    ``policy.r_max`` and hands the window sequence to
    ``limit_from_windows`` for the verdict.
    """
    policy = policy or LimitPolicy()
    start = float(start)
    if start <= 0 or not math.isfinite(start):
        raise ValueError("start must be positive and finite")

    edges = [start]
    while edges[-1] * 2.0 <= policy.r_max:
        edges.append(edges[-1] * 2.0)
    n_windows = len(edges) - 1
    if n_windows < policy.window_count + 1:
        return LimitEstimate(
            verdict="inconclusive", evidence=math.nan, windows_used=n_windows
        )

    windows = np.empty(n_windows)
    errors = np.empty(n_windows)
    for j in range(n_windows):
        try:
            w, e = adaptive_integral(f, edges[j], edges[j + 1], policy.window_tol)
        except QuadratureToleranceError as exc:
            w, e = exc.best_value, exc.error_estimate
        except EvaluationDomainError as exc:
            # an overflowed (infinite) nonnegative integrand means genuine
            # divergence; anything else is a real evaluation failure
            if getattr(exc, "bad_value", math.nan) == math.inf:
                return LimitEstimate(
                    verdict="divergent", evidence=math.inf, windows_used=j
                )
            raise
        if not math.isfinite(w) or w > policy.window_ceiling:
            return LimitEstimate(verdict="divergent", evidence=math.inf, windows_used=j)
        if w < 0:
            if w < -1e-9 * max(1.0, abs(windows[:j].sum() if j else 0.0)):
                raise EvaluationDomainError(
                    f"window [{edges[j]}, {edges[j + 1]}] integrated negative ({w!r}) "
                    "for a nonnegative integrand",
                    (edges[j],),
                )
            w = 0.0
        windows[j] = w
        errors[j] = e

    return limit_from_windows(windows, errors, policy)
