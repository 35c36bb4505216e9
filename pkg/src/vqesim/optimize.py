"""Derivative-free minimizers for noisy objectives.

The workhorse is a Nelder-Mead simplex search with a restarting
strategy: whenever the simplex energy spread collapses below tolerance
or the best value stagnates, the simplex is rebuilt around the
incumbent best point at the initial scale. Restarting both polishes
noiseless runs and un-sticks the simplex when shot noise has degraded
its geometry. A fixed-step finite-difference gradient descent is kept
as the comparison baseline; under shot noise its difference quotients
are dominated by noise, which is the point of the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

REASON_TOLERANCE = "tolerance"
REASON_BUDGET = "evaluation_budget"
REASON_RESTART_LIMIT = "restart_limit"

Objective = Callable[[np.ndarray], float]


class ObjectiveValueError(RuntimeError):
    """Objective returned a non-finite value; carries the offending point."""


@dataclass
class NelderMeadConfig:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_scale: float = 0.3
    tolerance: float = 1e-10
    stagnation_window: int = 300
    restart_limit: int = 5
    max_evaluations: int = 6000

    def __post_init__(self) -> None:
        if self.reflection <= 0:
            raise ValueError("reflection coefficient must be > 0")
        if self.expansion <= 1:
            raise ValueError("expansion coefficient must be > 1")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction coefficient must be in (0, 1)")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink coefficient must be in (0, 1)")
        if self.initial_scale <= 0:
            raise ValueError("initial simplex scale must be > 0")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.stagnation_window < 1:
            raise ValueError("stagnation window must be >= 1")
        if self.restart_limit < 0:
            raise ValueError("restart limit must be >= 0")
        if self.max_evaluations < 0:
            raise ValueError("evaluation budget must be >= 0")


@dataclass
class GradientDescentConfig:
    step_size: float = 0.1
    fd_step: float = 1e-3
    max_evaluations: int = 2000

    def __post_init__(self) -> None:
        if self.step_size <= 0:
            raise ValueError("step size must be > 0")
        if self.fd_step <= 0:
            raise ValueError("finite-difference step must be > 0")
        if self.max_evaluations < 0:
            raise ValueError("evaluation budget must be >= 0")


@dataclass
class OptimizerResult:
    x_best: np.ndarray
    f_best: float
    evaluations: int
    restarts: int
    converged: bool
    reason: str


class _BudgetExhausted(Exception):
    pass


class _CountingObjective:
    """Wraps the objective: budget enforcement, best-ever and stagnation tracking."""

    def __init__(self, objective: Objective, max_evaluations: int):
        self._objective = objective
        self.max_evaluations = max_evaluations
        self.evaluations = 0
        self.x_best: np.ndarray | None = None
        self.f_best = math.inf
        self.last_improvement = 0

    def __call__(self, x: np.ndarray) -> float:
        if self.evaluations >= self.max_evaluations:
            raise _BudgetExhausted
        value = float(self._objective(x))
        self.evaluations += 1
        if not math.isfinite(value):
            raise ObjectiveValueError(
                f"objective returned non-finite value {value!r} at x={np.asarray(x).tolist()}"
            )
        if value < self.f_best:
            self.f_best = value
            self.x_best = np.array(x, dtype=float)
            self.last_improvement = self.evaluations
        return value


def _finalize(f: _CountingObjective, x0: np.ndarray, restarts: int, converged: bool, reason: str) -> OptimizerResult:
    x = x0.copy() if f.x_best is None else f.x_best.copy()
    return OptimizerResult(x, f.f_best, f.evaluations, restarts, converged, reason)


def nelder_mead(
    objective: Objective,
    x0: Sequence[float],
    config: NelderMeadConfig | None = None,
    on_restart: Callable[[], None] | None = None,
) -> OptimizerResult:
    """Minimize with reflect/expand/contract/shrink steps and restarts.

    The initial simplex is x0 plus per-coordinate offsets of
    `initial_scale`. A restart rebuilds the simplex around the best
    point seen so far (the incumbent is kept as a vertex and
    re-evaluated), up to `restart_limit` times; the best point ever
    evaluated is returned regardless of where the final simplex sits.
    """
    cfg = config or NelderMeadConfig()
    x0 = np.asarray(x0, dtype=float)
    dims = x0.size
    f = _CountingObjective(objective, cfg.max_evaluations)
    restarts = 0

    def build_simplex(center: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        points = [center.copy()]
        for k in range(dims):
            vertex = center.copy()
            vertex[k] += cfg.initial_scale
            points.append(vertex)
        xs = np.array(points)
        vals = np.array([f(p) for p in xs])
        return xs, vals

    try:
        xs, vals = build_simplex(x0)
        while True:
            order = np.argsort(vals, kind="stable")
            xs, vals = xs[order], vals[order]

            trigger = None
            if vals[-1] - vals[0] < cfg.tolerance:
                trigger = "tolerance"
            elif f.evaluations - f.last_improvement > cfg.stagnation_window:
                trigger = "stagnation"
            if trigger is not None:
                if restarts >= cfg.restart_limit:
                    converged = trigger == "tolerance"
                    reason = REASON_TOLERANCE if converged else REASON_RESTART_LIMIT
                    return _finalize(f, x0, restarts, converged, reason)
                restarts += 1
                if on_restart is not None:
                    on_restart()
                incumbent = f.x_best if f.x_best is not None else xs[0]
                xs, vals = build_simplex(incumbent)
                f.last_improvement = f.evaluations
                continue

            centroid = xs[:-1].mean(axis=0)
            worst = xs[-1]
            reflected = centroid + cfg.reflection * (centroid - worst)
            f_reflected = f(reflected)
            if f_reflected < vals[0]:
                expanded = centroid + cfg.expansion * (reflected - centroid)
                f_expanded = f(expanded)
                if f_expanded < f_reflected:
                    xs[-1], vals[-1] = expanded, f_expanded
                else:
                    xs[-1], vals[-1] = reflected, f_reflected
            elif f_reflected < vals[-2]:
                xs[-1], vals[-1] = reflected, f_reflected
            else:
                if f_reflected < vals[-1]:
                    contracted = centroid + cfg.contraction * (reflected - centroid)
                    f_contracted = f(contracted)
                    accept = f_contracted <= f_reflected
                else:
                    contracted = centroid - cfg.contraction * (centroid - worst)
                    f_contracted = f(contracted)
                    accept = f_contracted < vals[-1]
                if accept:
                    xs[-1], vals[-1] = contracted, f_contracted
                else:
                    for k in range(1, dims + 1):
                        xs[k] = xs[0] + cfg.shrink * (xs[k] - xs[0])
                        vals[k] = f(xs[k])
    except _BudgetExhausted:
        return _finalize(f, x0, restarts, False, REASON_BUDGET)


def gradient_descent(
    objective: Objective,
    x0: Sequence[float],
    step_size: float = 0.1,
    max_evaluations: int = 2000,
    fd_step: float = 1e-3,
) -> OptimizerResult:
    """Fixed-step descent along a central finite-difference gradient.

    Runs until the evaluation budget is spent and returns the best
    point evaluated (probe points included). With zero budget the
    start point is returned untouched.
    """
    GradientDescentConfig(step_size, fd_step, max_evaluations)
    x0 = np.asarray(x0, dtype=float)
    f = _CountingObjective(objective, max_evaluations)
    x = x0.copy()
    try:
        f(x)
        while True:
            grad = np.zeros_like(x)
            for k in range(x.size):
                probe = x.copy()
                probe[k] += fd_step
                upper = f(probe)
                probe[k] -= 2.0 * fd_step
                lower = f(probe)
                grad[k] = (upper - lower) / (2.0 * fd_step)
            x = x - step_size * grad
            f(x)
    except _BudgetExhausted:
        return _finalize(f, x0, 0, False, REASON_BUDGET)
