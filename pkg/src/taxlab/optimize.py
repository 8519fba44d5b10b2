"""Derivative-free and gradient-based minimizers with a common interface.

All three methods (Nelder-Mead, SPSA, fixed-step gradient descent) share the
same contract: deterministic for a fixed (objective, start, config) triple,
the best point ever evaluated is returned, and the trace records the
best-so-far objective value per iteration (entry 0 is the start), so it is
non-increasing by construction. A non-finite objective value aborts with an
error naming the offending point.

SPSA gain schedules follow the standard form

    a_k = a / (k + 1 + A)**alpha        c_k = c / (k + 1)**gamma

with defaults a=0.2, c=0.1, alpha=0.602, gamma=0.101, A=0, and Rademacher
(+-1) simultaneous perturbations drawn from the seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ValidationError

KINDS = ("nelderMead", "spsa", "gradientDescent")


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "nelderMead"
    max_iterations: int = 100
    tolerance: float = 1e-8
    seed: Optional[int] = None
    learning_rate: float = 0.1     # gradientDescent step
    fd_step: float = 1e-6          # gradientDescent finite-difference step
    simplex_step: float = 0.05     # nelderMead initial vertex offset
    spsa_a: float = 0.2
    spsa_c: float = 0.1
    spsa_alpha: float = 0.602
    spsa_gamma: float = 0.101
    spsa_stability: float = 0.0    # the A constant in the a_k schedule

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError("unknown optimizer kind", kind=self.kind)
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValidationError("tolerance must be >= 0")


@dataclass(eq=False)
class OptimizeResult:
    x: np.ndarray
    fun: float
    trace: list[float] = field(default_factory=list)
    iterations: int = 0


class _Tracker:
    """Evaluates the objective, rejects non-finite values, keeps the best."""

    def __init__(self, objective: Callable[[np.ndarray], float]):
        self._objective = objective
        self.best_x: Optional[np.ndarray] = None
        self.best_value = math.inf

    def __call__(self, x: np.ndarray) -> float:
        value = float(self._objective(x))
        if not math.isfinite(value):
            raise ValidationError(
                "objective returned a non-finite value", point=[float(v) for v in x]
            )
        if value < self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=np.float64)
        return value


def finite_difference_gradient(
    objective: Callable[[np.ndarray], float],
    x: np.ndarray,
    step: float = 1e-6,
) -> np.ndarray:
    """Central differences: (f(x + h e_i) - f(x - h e_i)) / (2h) per axis."""
    if step <= 0:
        raise ValidationError("finite-difference step must be > 0", step=step)
    point = np.asarray(x, dtype=np.float64)
    gradient = np.zeros_like(point)
    for i in range(point.shape[0]):
        bump = np.zeros_like(point)
        bump[i] = step
        gradient[i] = (objective(point + bump) - objective(point - bump)) / (2.0 * step)
    return gradient


def minimize(
    objective: Callable[[np.ndarray], float],
    x0: Sequence[float],
    config: Optional[OptimizerConfig] = None,
) -> OptimizeResult:
    cfg = config or OptimizerConfig()
    start = np.asarray(x0, dtype=np.float64)
    if start.ndim != 1 or start.size == 0:
        raise ValidationError("start point must be a non-empty 1-D vector")
    if not np.all(np.isfinite(start)):
        raise ValidationError("start point must be finite")
    tracked = _Tracker(objective)
    if cfg.kind == "nelderMead":
        trace, iterations = _nelder_mead(tracked, start, cfg)
    elif cfg.kind == "spsa":
        trace, iterations = _spsa(tracked, start, cfg)
    else:
        trace, iterations = _gradient_descent(tracked, start, cfg)
    return OptimizeResult(
        x=tracked.best_x, fun=tracked.best_value, trace=trace, iterations=iterations
    )


def _nelder_mead(f: _Tracker, x0: np.ndarray, cfg: OptimizerConfig):
    # Classic coefficients: reflect 1, expand 2, contract 0.5, shrink 0.5.
    dim = x0.shape[0]
    simplex = [x0.copy()]
    for i in range(dim):
        vertex = x0.copy()
        vertex[i] += cfg.simplex_step
        simplex.append(vertex)
    values = [f(v) for v in simplex]
    trace = [f.best_value]
    iterations = 0
    for _ in range(cfg.max_iterations):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[k] for k in order]
        values = [values[k] for k in order]
        if values[-1] - values[0] < cfg.tolerance:
            break
        iterations += 1
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + (centroid - worst)
        fr = f(reflected)
        if fr < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            fe = f(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
        else:
            if fr < values[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                fc = f(contracted)
                accept = fc <= fr
            else:
                contracted = centroid + 0.5 * (worst - centroid)
                fc = f(contracted)
                accept = fc < values[-1]
            if accept:
                simplex[-1], values[-1] = contracted, fc
            else:
                best = simplex[0]
                for k in range(1, len(simplex)):
                    simplex[k] = best + 0.5 * (simplex[k] - best)
                    values[k] = f(simplex[k])
        trace.append(f.best_value)
    return trace, iterations


def _spsa(f: _Tracker, x0: np.ndarray, cfg: OptimizerConfig):
    rng = np.random.default_rng(cfg.seed)
    x = x0.copy()
    f(x)
    trace = [f.best_value]
    for k in range(cfg.max_iterations):
        ak = cfg.spsa_a / (k + 1 + cfg.spsa_stability) ** cfg.spsa_alpha
        ck = cfg.spsa_c / (k + 1) ** cfg.spsa_gamma
        delta = rng.integers(0, 2, size=x.shape[0]) * 2.0 - 1.0
        plus = f(x + ck * delta)
        minus = f(x - ck * delta)
        gradient = (plus - minus) / (2.0 * ck) * delta  # delta is its own inverse
        x = x - ak * gradient
        trace.append(f.best_value)
    f(x)
    return trace, cfg.max_iterations


def _gradient_descent(f: _Tracker, x0: np.ndarray, cfg: OptimizerConfig):
    x = x0.copy()
    previous = f(x)
    trace = [f.best_value]
    iterations = 0
    for _ in range(cfg.max_iterations):
        iterations += 1
        gradient = finite_difference_gradient(f, x, cfg.fd_step)
        x = x - cfg.learning_rate * gradient
        value = f(x)
        trace.append(f.best_value)
        if abs(previous - value) < cfg.tolerance:
            break
        previous = value
    return trace, iterations


def with_kind(cfg: OptimizerConfig, kind: str) -> OptimizerConfig:
    return replace(cfg, kind=kind)
