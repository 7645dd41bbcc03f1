"""From-scratch Nelder-Mead simplex minimizer over swarm decision variables.

The decision vector packs (x, y, z, theta) per spacecraft; theta coordinates
are wrapped modulo 2 pi before every objective evaluation so orientations
stay on [0, 2 pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cost import (SpacecraftPose, SwarmConfig, expected_information_cost,
                   information_cost)
from .geometry import TWO_PI
from .sampling import PoiSet

# Objective value substituted when a candidate position degenerates onto the
# ellipsoid center; keeps the simplex search well-posed with finite values.
DEGENERACY_PENALTY = 1e9
DEGENERACY_RADIUS_KM = 1e-6


class ObjectiveDomainError(ValueError):
    """The objective returned a non-finite value."""


@dataclass(frozen=True)
class NelderMeadOptions:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    f_tolerance: float = 1e-8
    x_tolerance: float = 1e-8
    max_iterations: int | None = None  # defaults to 200 * dimension
    initial_simplex_scale: float = 0.05
    # Absolute simplex step for angle coordinates; None keeps the relative rule.
    theta_initial_step: float | None = None

    def __post_init__(self):
        if self.reflection <= 0.0:
            raise ValueError("reflection coefficient must be positive")
        if not self.expansion > 1.0 > self.contraction > 0.0:
            raise ValueError("need expansion > 1 > contraction > 0")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink coefficient must lie in (0, 1)")


@dataclass(frozen=True)
class OptimizationProblem:
    dimension: int
    objective: Callable[[np.ndarray], float]
    theta_indices: frozenset[int] = frozenset()


@dataclass
class OptResult:
    best_point: np.ndarray
    best_value: float
    iterations: int
    converged: bool
    evaluation_count: int
    trace: list[tuple[int, float, float]] = field(default_factory=list)


def _wrap(x: np.ndarray, theta_idx: Sequence[int]) -> np.ndarray:
    if theta_idx:
        x = x.copy()
        idx = list(theta_idx)
        x[idx] = np.mod(x[idx], TWO_PI)
    return x


def nelder_mead(problem: OptimizationProblem, x0, opts: NelderMeadOptions,
                trace_sink=None) -> OptResult:
    """Minimize with the standard reflect/expand/contract/shrink simplex.

    Terminates when the objective spread over the simplex falls below
    f_tolerance, the simplex diameter falls below x_tolerance, or the
    iteration budget runs out. Deterministic given (x0, opts).
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (problem.dimension,):
        raise ValueError(f"x0 must have length {problem.dimension}")
    theta_idx = sorted(problem.theta_indices)
    max_iter = opts.max_iterations
    if max_iter is None:
        max_iter = 200 * problem.dimension

    evals = 0

    def f(x: np.ndarray) -> tuple[np.ndarray, float]:
        nonlocal evals
        x = _wrap(x, theta_idx)
        v = float(problem.objective(x))
        evals += 1
        if not np.isfinite(v):
            raise ObjectiveDomainError(f"objective non-finite at {x.tolist()}")
        return x, v

    n = problem.dimension
    simplex = np.empty((n + 1, n))
    values = np.empty(n + 1)
    simplex[0], values[0] = f(x0)
    theta_set = set(theta_idx)
    for i in range(n):
        if i in theta_set and opts.theta_initial_step is not None:
            step = opts.theta_initial_step
        else:
            step = opts.initial_simplex_scale * max(abs(x0[i]), 1.0)
        xi = x0.copy()
        xi[i] += step
        simplex[i + 1], values[i + 1] = f(xi)

    trace = []
    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]

        diameter = float(np.max(np.linalg.norm(simplex[1:] - simplex[0], axis=1)))
        spread = float(values[-1] - values[0])
        if trace_sink is not None:
            rec = (iteration, float(values[0]), diameter)
            trace.append(rec)
            trace_sink(*rec)
        if spread < opts.f_tolerance or diameter < opts.x_tolerance:
            converged = True
            break

        centroid = np.mean(simplex[:-1], axis=0)
        xr, fr = f(centroid + opts.reflection * (centroid - simplex[-1]))
        if fr < values[0]:
            xe, fe = f(centroid + opts.expansion * (xr - centroid))
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                # outside contraction
                xc, fc = f(centroid + opts.contraction * (xr - centroid))
                accept = fc <= fr
            else:
                # inside contraction
                xc, fc = f(centroid - opts.contraction * (centroid - simplex[-1]))
                accept = fc < values[-1]
            if accept:
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i], values[i] = f(
                        simplex[0] + opts.shrink * (simplex[i] - simplex[0])
                    )

    order = np.argsort(values, kind="stable")
    best = int(order[0])
    return OptResult(simplex[best].copy(), float(values[best]), iteration,
                     converged, evals, trace)


def pack_swarm(swarm: SwarmConfig) -> np.ndarray:
    """Flatten a swarm into the (x, y, z, theta) * N decision vector."""
    return np.concatenate([
        np.append(p.position, p.theta) for p in swarm.spacecraft
    ])


def unpack_swarm(x: np.ndarray, template: SwarmConfig) -> SwarmConfig:
    """Rebuild a swarm from a decision vector, keeping each pose's nu and phi."""
    poses = []
    for k, p in enumerate(template.spacecraft):
        chunk = x[4 * k:4 * k + 4]
        poses.append(SpacecraftPose(chunk[:3], chunk[3], p.nu, p.phi))
    return SwarmConfig(tuple(poses), template.ellipsoid)


def swarm_objective(pois: PoiSet, template: SwarmConfig, cost_mode="deterministic",
                    **cost_kwargs) -> Callable[[np.ndarray], float]:
    """Objective over the packed decision vector, with the degeneracy penalty."""
    center = template.ellipsoid.center

    def objective(x: np.ndarray) -> float:
        for k in range(len(template)):
            pos = x[4 * k:4 * k + 3]
            if np.linalg.norm(pos - center) < DEGENERACY_RADIUS_KM:
                return DEGENERACY_PENALTY
        swarm = unpack_swarm(x, template)
        if cost_mode == "deterministic":
            return information_cost(swarm, pois, **cost_kwargs).information_cost
        stddev, n_samples, seed = cost_mode
        return expected_information_cost(swarm, pois, stddev, n_samples, seed,
                                         **cost_kwargs)

    return objective


def optimize_swarm(pois: PoiSet, initial: SwarmConfig,
                   opts: NelderMeadOptions = NelderMeadOptions(),
                   cost_mode="deterministic", trace_sink=None,
                   **cost_kwargs):
    """Locally optimize spacecraft positions and orientations.

    cost_mode is "deterministic" or a (position_stddev, n_samples, seed)
    triple for the expected-cost objective. Returns the optimized swarm, its
    final cost breakdown, and the raw optimizer result.
    """
    n = len(initial)
    problem = OptimizationProblem(
        dimension=4 * n,
        objective=swarm_objective(pois, initial, cost_mode, **cost_kwargs),
        theta_indices=frozenset(4 * k + 3 for k in range(n)),
    )
    result = nelder_mead(problem, pack_swarm(initial), opts, trace_sink)
    best = unpack_swarm(result.best_point, initial)
    breakdown = information_cost(best, pois, **cost_kwargs)
    return best, breakdown, result
