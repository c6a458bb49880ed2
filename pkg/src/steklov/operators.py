"""Dense Nystrom assembly of the boundary-integral pencil.

The single layer S and the adjoint double layer (as K' + I/2) are assembled
with the classical periodic splitting: each kernel is written as
A_1(t,s) ln(4 sin^2((t-s)/2)) + A_2(t,s) with smooth A_1, A_2, the log factor
integrated by the circulant quadrature weights R^N and the smooth remainder
by the trapezoidal rule. Diagonal entries use the analytic limits, which
bring in gamma_E, ln|x'(t)| and the curvature. On graded corner meshes the
same splitting applies verbatim in the mesh parameter s because the grading
is folded into the jacobian.

Multi-component boundaries get the splitting on each diagonal block (one
parameter circle per component) and plain trapezoidal cross blocks, the
kernels there being smooth.

Matrix convention: jacobian weights live inside the matrices (quadrature
weighted collocation), so eigenvalue problems are posed on plain node values.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp
from scipy.linalg import svd as _svd

from .geometry import BoundaryCurve
from .mesh import Discretization, TWO_PI
from .special import EULER_GAMMA

__all__ = [
    "LayerOperators",
    "AssemblyError",
    "log_weights",
    "assemble",
    "singular_values",
    "dump_operators",
    "load_operators",
]

_MAGIC = b"SBIO"


class AssemblyError(RuntimeError):
    pass


@dataclass(frozen=True)
class LayerOperators:
    """Discrete single layer S and adjoint double layer plus half, K_half."""

    S: np.ndarray
    K_half: np.ndarray
    mu: float
    discretization: Discretization

    @property
    def N(self) -> int:
        return self.discretization.N


def log_weights(N: int) -> np.ndarray:
    """Quadrature weights R(d) for the periodic log kernel, N nodes total.

    R(d) = -(4*pi/N) * sum_{m=1}^{N/2-1} cos(m d)/m - (4*pi/N^2) cos(N d / 2),
    returned on the grid d_j = 2*pi*j/N. Valid on any uniformly spaced
    (possibly midpoint-shifted) grid since only differences enter.
    """
    if N % 2 or N < 2:
        raise ValueError("log quadrature needs an even node count")
    n = N // 2
    d = TWO_PI * np.arange(N) / N
    m = np.arange(1, n)
    R = -(4 * np.pi / N) * (np.cos(d[:, None] * m[None, :]) / m).sum(axis=1)
    R -= (4 * np.pi / N**2) * np.cos(n * d)
    return R


def assemble(curve: BoundaryCurve, disc: Discretization, mu: float) -> LayerOperators:
    """Assemble S_mu and K'_mu + I/2 on the given discretization.

    mu = 0 swaps in the modified single layer: the log kernel plus the
    rank-one term (1/(2*pi)) * integral(phi) that removes the logarithmic
    capacity null direction.
    """
    if mu < 0:
        raise ValueError("wavenumber mu must be non-negative")
    if disc.N != disc.points.shape[0]:
        raise AssemblyError("discretization inconsistent with curve")

    x = disc.points
    jac = disc.jacobians
    nrm = disc.normals
    kap = disc.curvatures
    N = disc.N

    dx = x[:, None, 0] - x[None, :, 0]
    dy = x[:, None, 1] - x[None, :, 1]
    r = np.hypot(dx, dy)
    np.fill_diagonal(r, 1.0)
    nd = nrm[:, None, 0] * dx + nrm[:, None, 1] * dy
    np.fill_diagonal(nd, 0.0)

    if mu > 0:
        M = (1j / 4) * _sp.hankel1(0, mu * r) * jac[None, :]
        Lf = -(1j * mu / 4) * _sp.hankel1(1, mu * r) * nd / r * jac[None, :]
    else:
        M = (-1.0 / TWO_PI) * np.log(r) * jac[None, :] + 0j
        Lf = (-1.0 / TWO_PI) * nd / r**2 * jac[None, :] + 0j

    S = np.empty((N, N), dtype=complex)
    K = np.empty((N, N), dtype=complex)

    for sl in disc.component_slices:
        n_c = sl.stop - sl.start
        h = TWO_PI / n_c
        s = disc.nodes[sl]
        jc = jac[sl]
        ts = s[:, None] - s[None, :]
        s2 = 4.0 * np.sin(ts / 2) ** 2
        np.fill_diagonal(s2, 1.0)
        lg = np.log(s2)
        rc = r[sl, sl]

        if mu > 0:
            M1 = -(1.0 / (4 * np.pi)) * _sp.j0(mu * rc) * jc[None, :]
            M2 = M[sl, sl] - M1 * lg
            np.fill_diagonal(M1, -(1.0 / (4 * np.pi)) * jc)
            np.fill_diagonal(
                M2,
                (1j / 4 - EULER_GAMMA / TWO_PI - np.log(mu * jc / 2) / TWO_PI) * jc,
            )
            L1 = (mu / (4 * np.pi)) * _sp.j1(mu * rc) * nd[sl, sl] / rc * jc[None, :]
            L2 = Lf[sl, sl] - L1 * lg
            np.fill_diagonal(L1, 0.0)
            np.fill_diagonal(L2, -kap[sl] * jc / (4 * np.pi))
        else:
            M1 = np.broadcast_to(-(1.0 / (4 * np.pi)) * jc[None, :], (n_c, n_c)).copy()
            M2 = M[sl, sl] - M1 * lg
            np.fill_diagonal(M2, -(np.log(jc) / TWO_PI) * jc)
            L1 = np.zeros((n_c, n_c))
            L2 = Lf[sl, sl].copy()
            np.fill_diagonal(L2, -kap[sl] * jc / (4 * np.pi))

        R = log_weights(n_c)
        idx = (np.arange(n_c)[:, None] - np.arange(n_c)[None, :]) % n_c
        S[sl, sl] = R[idx] * M1 + h * M2
        K[sl, sl] = R[idx] * L1 + h * L2

        for other in disc.component_slices:
            if other == sl:
                continue
            hb = TWO_PI / (other.stop - other.start)
            S[sl, other] = hb * M[sl, other]
            K[sl, other] = hb * Lf[sl, other]

    if mu == 0:
        # modified single layer: add (1/(2*pi)) * integral of the density
        S += (1.0 / TWO_PI) * disc.weights[None, :]

    K_half = K + 0.5 * np.eye(N)
    if not (np.all(np.isfinite(S)) and np.all(np.isfinite(K_half))):
        raise AssemblyError(
            "assembly produced non-finite entries (parametrization fault "
            "or collapsed nodes)"
        )
    return LayerOperators(S=S, K_half=K_half, mu=float(mu), discretization=disc)


def singular_values(ops: LayerOperators) -> np.ndarray:
    """Singular values of the single layer, descending.

    Computed in the boundary-L2 weighted similarity basis
    D^{1/2} S D^{-1/2}, D = diag(quadrature weights): eigenvalues of the
    pencil are untouched (exact similarity; on uniform single-component
    grids D is a multiple of the identity) while singular values measure
    L2(Gamma) magnitudes, making truncation thresholds mean the same thing
    on graded and uniform meshes.
    """
    dd = np.sqrt(ops.discretization.weights)
    Sw = (dd[:, None] * ops.S) / dd[None, :]
    return _svd(Sw, compute_uv=False)


def dump_operators(ops: LayerOperators, path) -> None:
    """Binary dump: 16-byte header (magic 'SBIO', u32 N, f64 mu, both
    little-endian) followed by S then K_half, row-major complex128 LE."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<I", ops.N))
        f.write(struct.pack("<d", ops.mu))
        f.write(np.ascontiguousarray(ops.S, dtype="<c16").tobytes())
        f.write(np.ascontiguousarray(ops.K_half, dtype="<c16").tobytes())


def load_operators(path):
    """Read a dump_operators file; returns (mu, N, S, K_half)."""
    with open(path, "rb") as f:
        head = f.read(16)
        if head[:4] != _MAGIC:
            raise ValueError("not an operator dump (bad magic)")
        (N,) = struct.unpack("<I", head[4:8])
        (mu,) = struct.unpack("<d", head[8:16])
        payload = np.frombuffer(f.read(), dtype="<c16")
    if payload.size != 2 * N * N:
        raise ValueError("operator dump payload truncated")
    S = payload[: N * N].reshape(N, N).astype(complex)
    K_half = payload[N * N:].reshape(N, N).astype(complex)
    return mu, N, S, K_half
