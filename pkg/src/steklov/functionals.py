"""Scale-invariant spectral functionals and the experiments built on them.

E_k(mu, Omega) = |Omega|^alpha |Gamma|^beta sigma_k(mu / (|Omega|^gamma
|Gamma|^delta), Omega). The exponent constraints 2*gamma + delta = 1 and
2*alpha + beta = 1 make E_k invariant under dilations of Omega; the two
named scalings are F (gamma = 1/2, normalize by area) and G (delta = 1,
normalize by perimeter), both with the plain perimeter prefactor.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from . import geometry
from .geometry import BoundaryCurve, annulus, disk, isoceles_triangle, square
from .mesh import MeshError
from .operators import AssemblyError
from .solver import SolverError, solve_biomod

__all__ = [
    "FunctionalSpec",
    "F",
    "G",
    "FunctionalError",
    "ExceptionalValueError",
    "AdmissibleWindowWarning",
    "evaluate_functional",
    "f1_upper_bound",
    "quasimode_deviation",
    "negative_count",
    "AnnulusSweepResult",
    "annulus_sweep",
]

# first Dirichlet wavenumber of the unit-area disk, j_{0,1} * sqrt(pi);
# by Faber-Krahn the F-scaled wavenumber stays sub-resonant for every
# shape while mu < this value
F_WINDOW = 4.2627038434811875

DEFAULT_SOLVER_PARAMS = {"N": 480, "p": 6}


class FunctionalError(RuntimeError):
    pass


class ExceptionalValueError(FunctionalError):
    """sigma_k is a -inf sentinel: the scaled wavenumber is exceptional."""


class AdmissibleWindowWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FunctionalSpec:
    alpha: float
    beta: float
    gamma: float
    delta: float
    k: int
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("eigenvalue index k is 1-based")
        if abs(2 * self.gamma + self.delta - 1) > 1e-12 \
                or abs(2 * self.alpha + self.beta - 1) > 1e-12:
            raise ValueError(
                "scale invariance requires 2*gamma + delta = 1 and "
                "2*alpha + beta = 1")


def F(k: int) -> FunctionalSpec:
    """F_k(mu, Omega) = |Gamma| sigma_k(mu / sqrt|Omega|, Omega)."""
    return FunctionalSpec(alpha=0.0, beta=1.0, gamma=0.5, delta=0.0, k=k,
                          name=f"F{k}")


def G(k: int) -> FunctionalSpec:
    """G_k(mu, Omega) = |Gamma| sigma_k(mu / |Gamma|, Omega)."""
    return FunctionalSpec(alpha=0.0, beta=1.0, gamma=0.0, delta=1.0, k=k,
                          name=f"G{k}")


def _solve(curve: BoundaryCurve, nu: float, solver_params) -> np.ndarray:
    params = dict(DEFAULT_SOLVER_PARAMS if solver_params is None
                  else solver_params)
    tol = params.pop("tol", 1e-14)
    imag_tol = params.pop("imag_tol", 1e-6)
    return solve_biomod(curve, params, nu, tol=tol, imag_tol=imag_tol)


def evaluate_functional(spec: FunctionalSpec, curve: BoundaryCurve,
                        mu: float, solver_params=None) -> float:
    """E_k at wavenumber mu, computed through the boundary-integral solver.

    Raises ExceptionalValueError when sigma_k lands on a -inf sentinel,
    i.e. the scaled wavenumber hits the Dirichlet spectrum of the shape.
    """
    if mu < 0:
        raise FunctionalError("need mu >= 0")
    if spec.gamma == 0.5 and spec.delta == 0.0 and not 0 < mu < F_WINDOW:
        warnings.warn(
            f"mu={mu} is outside the F-admissible window (0, {F_WINDOW:.4f}); "
            "values remain computable but the k=1 bound need not hold",
            AdmissibleWindowWarning, stacklevel=2)
    ar = geometry.area(curve)
    per = geometry.perimeter(curve)
    nu = mu / (ar**spec.gamma * per**spec.delta)
    spectrum = _solve(curve, nu, solver_params)
    if spec.k > len(spectrum.eigenvalues):
        raise FunctionalError("k exceeds the number of computed eigenvalues")
    sig = spectrum.eigenvalues[spec.k - 1]
    if not np.isfinite(sig):
        raise ExceptionalValueError(
            f"sigma_{spec.k} diverged: scaled wavenumber {nu} is exceptional "
            "for this shape")
    return float(ar**spec.alpha * per**spec.beta * sig)


def f1_upper_bound(spec: FunctionalSpec, curve: BoundaryCurve,
                   mu: float) -> float:
    """Test-function bound on E_1: -mu^2 |Omega|^(a-2g+1) |Gamma|^(b-2d-1).

    Valid while the scaled wavenumber sits below the first Dirichlet
    wavenumber of the shape; with F-scaling the exponents cancel and the
    bound is -mu^2 for every shape.
    """
    ar = geometry.area(curve)
    per = geometry.perimeter(curve)
    return float(-mu**2 * ar**(spec.alpha - 2 * spec.gamma + 1)
                 * per**(spec.beta - 2 * spec.delta - 1))


# ---------------------------------------------------------------------------
# quasimodes

def _quasimode_list(shape: str, k_max: int) -> np.ndarray:
    ks = np.arange(1, k_max + 1, dtype=float)
    if shape == "square":
        qm = np.repeat((ks - 0.5) * np.pi, 4)
    elif shape == "isoceles_triangle":
        legs = np.repeat(np.pi * ks, 2)
        hyp = (np.pi / np.sqrt(2)) * (ks - 0.5)
        qm = np.sort(np.concatenate([legs, hyp]))
    else:
        raise FunctionalError(f"no quasimode formula for shape {shape!r}")
    return qm[:k_max]


def quasimode_deviation(shape: str, mu: float, k_max: int,
                        solver_params=None) -> np.ndarray:
    """Relative gap |sigma_k - QM_k| / QM_k for k = 1..k_max.

    shape is "square" (unit side, QM_k = (k - 1/2) pi with multiplicity 4)
    or "isoceles_triangle" (legs 1, QM from pi*k twice per k interleaved
    with (pi/sqrt 2)(k - 1/2) once). The first few entries are O(1); the
    tail decays as the quasimodes take over.
    """
    curve = square(1.0) if shape == "square" else isoceles_triangle()
    qm = _quasimode_list(shape, k_max)
    spectrum = _solve(curve, mu, solver_params)
    vals = spectrum.eigenvalues[:k_max]
    if len(vals) < k_max:
        raise FunctionalError("k_max exceeds the number of computed eigenvalues")
    if not np.all(np.isfinite(vals)):
        raise FunctionalError("mu is exceptional for this shape; "
                              "quasimode comparison needs a finite spectrum")
    return np.abs(vals - qm) / qm


def negative_count(curve: BoundaryCurve, mu: float, solver_params=None) -> int:
    """Number of eigenvalues below zero, -inf sentinels included.

    The count tracks |Gamma| mu / (2 pi) as mu grows. Values within 1e-10
    of zero are treated as the nonnegative Steklov-Laplace zero mode.
    """
    spectrum = _solve(curve, mu, solver_params)
    return int(np.sum(spectrum.eigenvalues < -1e-10))


# ---------------------------------------------------------------------------
# annulus sweep

@dataclass(frozen=True)
class AnnulusSweepResult:
    eps: np.ndarray          # inner radii, rows
    mu: np.ndarray           # wavenumbers, columns
    values: np.ndarray       # F_k(mu, A_eps); NaN = solver failure, -inf = sentinel
    disk_values: np.ndarray  # F_k(mu, D) per column
    signs: np.ndarray        # sign(F_k(A_eps) - F_k(D)) per cell

    def write_csv(self, path, sign_path=None) -> None:
        header = ["eps"] + [repr(float(m)) for m in self.mu]
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(header)
            for e, row in zip(self.eps, self.values):
                w.writerow([repr(float(e))] + [repr(float(v)) for v in row])
        if sign_path is not None:
            with open(sign_path, "w", newline="") as f:
                w = csv.writer(f)
                w.writerow(header)
                for e, row in zip(self.eps, self.signs):
                    w.writerow([repr(float(e))] + [
                        "" if not np.isfinite(s) else str(int(s)) for s in row])


def annulus_sweep(eps_grid, mu_grid, k: int = 1,
                  solver_params=None) -> AnnulusSweepResult:
    """F_k over the (eps, mu) grid of annuli with outer radius 1.

    Per-cell solver failures are recorded as NaN and sentinel hits as -inf;
    neither aborts the sweep. The disk row is computed through the same
    pipeline so the sign table compares like against like.
    """
    eps_grid = np.asarray(eps_grid, dtype=float)
    mu_grid = np.asarray(mu_grid, dtype=float)
    if np.any(eps_grid <= 0) or np.any(eps_grid >= 1):
        raise FunctionalError("inner radii must lie in (0, 1)")
    spec_k = F(k)
    # a per-component node budget addresses the two annulus circles; the
    # disk comparison row reuses the outer-circle share of it
    disk_params = solver_params
    if solver_params is not None and np.ndim(solver_params.get("N", 0)) == 1:
        disk_params = dict(solver_params, N=int(solver_params["N"][0]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibleWindowWarning)
        disk_vals = np.array([
            evaluate_functional(spec_k, disk(1.0), m, disk_params)
            for m in mu_grid])
        values = np.full((len(eps_grid), len(mu_grid)), np.nan)
        for i, e in enumerate(eps_grid):
            curve = annulus(1.0, float(e))
            for j, m in enumerate(mu_grid):
                try:
                    values[i, j] = evaluate_functional(
                        spec_k, curve, float(m), solver_params)
                except ExceptionalValueError:
                    values[i, j] = -np.inf
                except (SolverError, MeshError, AssemblyError,
                        FunctionalError) as exc:
                    warnings.warn(f"annulus cell (eps={e}, mu={m}) failed: {exc}",
                                  stacklevel=2)
    signs = np.sign(values - disk_vals[None, :])
    return AnnulusSweepResult(eps=eps_grid, mu=mu_grid, values=values,
                              disk_values=disk_vals, signs=signs)
