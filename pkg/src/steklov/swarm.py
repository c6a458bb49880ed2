"""Particle-swarm search over Fourier boundary shapes.

Global-best PSO with a linear inertia schedule and feasibility repair:
candidate coefficient vectors are clipped to the per-coefficient cap and
rescaled until a0 > sum|a_j| + |b_j| holds strictly, so every evaluated
shape is a valid star-shaped boundary and the Helmholtz solver never sees
a degenerate curve. a0 is pinned to 1; the functionals are scale
invariant, so the radius gauge costs nothing.

Runs are deterministic: one seeded Generator drives initialization and all
velocity draws, and particles are updated in index order.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .functionals import (
    ExceptionalValueError,
    FunctionalError,
    FunctionalSpec,
    evaluate_functional,
)
from .geometry import GeometryError, ShapeVector, fourier_shape
from .mesh import MeshError
from .operators import AssemblyError
from .solver import SolverError

__all__ = [
    "SwarmError",
    "SwarmConfig",
    "SwarmResult",
    "objective_eval",
    "optimize_shape",
    "write_artifacts",
]

log = logging.getLogger(__name__)

COEF_CAP = 0.1
PENALTY = 1e6
A0 = 1.0


class SwarmError(RuntimeError):
    pass


@dataclass(frozen=True)
class SwarmConfig:
    objective: FunctionalSpec
    mu: float
    n_modes: int = 4
    particles: int = 40
    iterations: int = 100
    direction: str = "max"
    inertia: float = 0.9
    inertia_final: float = 0.4
    cognitive: float = 1.5
    social: float = 1.5
    seed: int = 0
    search_n: int = 256
    final_n: int = 1024

    def __post_init__(self):
        if self.particles < 8:
            raise SwarmError("need at least 8 particles")
        if self.iterations < 20:
            raise SwarmError("need at least 20 iterations")
        if self.n_modes not in (2, 4, 6, 8):
            raise SwarmError("n_modes restricted to {2, 4, 6, 8}")
        if self.direction not in ("max", "min"):
            raise SwarmError("direction is 'max' or 'min'")


@dataclass
class SwarmResult:
    best_shape: ShapeVector
    best_value: float
    history: list
    refined_value: float
    config: SwarmConfig

    def __iter__(self):
        return iter((self.best_shape, self.best_value, self.history))


def _repair(x: np.ndarray, n_modes: int) -> ShapeVector:
    """Project a raw coefficient vector onto the feasible set."""
    x = np.clip(x, -COEF_CAP, COEF_CAP)
    total = np.sum(np.abs(x))
    if total >= A0:
        x = x * (0.98 * A0 / total)
    return ShapeVector(a0=A0, a=tuple(x[:n_modes]), b=tuple(x[n_modes:]))


def _vector(sv: ShapeVector) -> np.ndarray:
    return np.concatenate([sv.a, sv.b])


def objective_eval(shape: ShapeVector, spec: FunctionalSpec, mu: float,
                   solver_params=None, direction: str = "max") -> float:
    """Functional value of one candidate, penalized on failure.

    A -inf sentinel or a solver breakdown returns +-PENALTY with the sign
    that makes the candidate maximally unattractive for `direction`; the
    incident is logged so systematic failures are visible.
    """
    bad = -PENALTY if direction == "max" else PENALTY
    try:
        curve = fourier_shape(shape)
        return evaluate_functional(spec, curve, mu, solver_params)
    except ExceptionalValueError:
        return bad
    except (SolverError, MeshError, AssemblyError, FunctionalError,
            GeometryError) as exc:
        log.warning("objective evaluation failed for %s: %s", shape, exc)
        return bad


def optimize_shape(config: SwarmConfig) -> SwarmResult:
    """Global-best PSO over the 2*n_modes Fourier coefficients.

    Returns the best feasible shape, its value at search resolution, the
    per-iteration best-so-far history (monotone non-worsening), and a
    re-evaluation of the winner at final_n nodes.
    """
    spec, mu, nm = config.objective, config.mu, config.n_modes
    sign = 1.0 if config.direction == "max" else -1.0
    params = {"N": config.search_n}
    dim = 2 * nm
    rng = np.random.default_rng(config.seed)

    x = rng.uniform(-COEF_CAP, COEF_CAP, size=(config.particles, dim))
    v = rng.uniform(-COEF_CAP / 4, COEF_CAP / 4, size=(config.particles, dim))
    shapes = [_repair(xi, nm) for xi in x]
    x = np.array([_vector(s) for s in shapes])
    vals = np.array([
        objective_eval(s, spec, mu, params, config.direction) for s in shapes])
    if np.all(sign * vals <= -PENALTY):
        raise SwarmError("every initial particle failed to evaluate; "
                         "check the configuration")

    pbest_x = x.copy()
    pbest_v = vals.copy()
    g = int(np.argmax(sign * vals))
    gbest_x, gbest_v = x[g].copy(), float(vals[g])
    history = [gbest_v]

    denom = max(config.iterations - 1, 1)
    for it in range(config.iterations):
        w = config.inertia + (config.inertia_final - config.inertia) * it / denom
        for i in range(config.particles):
            r1 = rng.uniform(size=dim)
            r2 = rng.uniform(size=dim)
            v[i] = (w * v[i]
                    + config.cognitive * r1 * (pbest_x[i] - x[i])
                    + config.social * r2 * (gbest_x - x[i]))
            shape = _repair(x[i] + v[i], nm)
            x[i] = _vector(shape)
            val = objective_eval(shape, spec, mu, params, config.direction)
            if sign * val > sign * pbest_v[i]:
                pbest_x[i], pbest_v[i] = x[i].copy(), val
            if sign * val > sign * gbest_v:
                gbest_x, gbest_v = x[i].copy(), float(val)
        history.append(gbest_v)

    best_shape = _repair(gbest_x, nm)
    refined = objective_eval(best_shape, spec, mu, {"N": config.final_n},
                             config.direction)
    return SwarmResult(best_shape=best_shape, best_value=gbest_v,
                       history=history, refined_value=float(refined),
                       config=config)


def write_artifacts(result: SwarmResult, json_path, csv_path=None) -> None:
    """JSON run record plus optional per-iteration CSV of the best value."""
    payload = {
        "config": asdict(result.config),
        "seed": result.config.seed,
        "history": [repr(float(h)) for h in result.history],
        "best_shape": result.best_shape.to_dict(),
        "best_value": repr(float(result.best_value)),
        "refined_value": repr(float(result.refined_value)),
    }
    with open(json_path, "w") as f:
        json.dump(payload, f, indent=2)
    if csv_path is not None:
        with open(csv_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["iteration", "best_value"])
            for i, h in enumerate(result.history):
                w.writerow([i, repr(float(h))])
