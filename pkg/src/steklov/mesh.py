"""Boundary discretizations.

Uniform periodic grids for smooth components and polynomially graded corner
meshes for piecewise-smooth ones. Graded meshes substitute t = w(s) per arc,
with w built from the degree-p rational map of v(s); the composite jacobian
|w'(s)| |x'(w(s))| vanishes at corners to order p, which is what restores
high-order convergence for densities with corner singularities.

Every component keeps its own parameter circle s in [0, 2pi) and its own
even node count; the singular quadrature rule of the operator module is
circulant per component.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, BoundaryCurve, GeometryError, STEKLOV

__all__ = [
    "Discretization",
    "MeshError",
    "uniform_grid",
    "graded_grid",
    "make_discretization",
    "probe_params",
]


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Discretization:
    """Node data for boundary quadrature and collocation.

    nodes holds the per-component parameter values (concatenated); jacobians
    are the composite factors |dx/ds| so that weights = (2*pi/N_c) * jacobian
    integrates ds-integrands exactly like a periodic trapezoidal rule.
    """

    curve: BoundaryCurve
    nodes: np.ndarray
    points: np.ndarray
    jacobians: np.ndarray
    normals: np.ndarray
    curvatures: np.ndarray
    segment_index: np.ndarray
    component_index: np.ndarray
    component_slices: tuple
    steklov_mask: np.ndarray
    grading_degree: object  # int p, or the string "uniform"
    N: int

    @property
    def weights(self) -> np.ndarray:
        w = np.empty(self.N)
        for sl in self.component_slices:
            n_c = sl.stop - sl.start
            w[sl] = (TWO_PI / n_c) * self.jacobians[sl]
        return w

    @property
    def mesh_spacing(self) -> float:
        """Largest quadrature panel length; used by near-boundary guards."""
        return float(self.weights.max())

    @property
    def p(self):
        return self.grading_degree


def _allocate_even(total: int, lengths, minimum: int = 8):
    """Split an even total into even parts proportional to lengths."""
    lengths = np.asarray(lengths, dtype=float)
    raw = total * lengths / lengths.sum()
    parts = np.maximum(minimum, 2 * np.round(raw / 2).astype(int))
    while parts.sum() > total:
        i = int(np.argmax(parts - raw))
        if parts[i] - 2 < minimum:
            raise MeshError("node budget too small for this many components")
        parts[i] -= 2
    while parts.sum() < total:
        parts[int(np.argmin(parts - raw))] += 2
    return [int(v) for v in parts]


def _grading_maps(p: int):
    """The degree-p substitution on [0, 2pi], normalized to [0, 1]."""

    def v(s):
        return (1.0 / p - 0.5) * ((np.pi - s) / np.pi) ** 3 \
            + (s - np.pi) / (p * np.pi) + 0.5

    def vp(s):
        return -3.0 * (1.0 / p - 0.5) * (np.pi - s) ** 2 / np.pi**3 + 1.0 / (p * np.pi)

    def w01(s):
        vs, vt = v(s), v(TWO_PI - s)
        return vs**p / (vs**p + vt**p)

    def w01p(s):
        vs, vt = v(s), v(TWO_PI - s)
        vps, vpt = vp(s), -vp(TWO_PI - s)
        den = vs**p + vt**p
        return p * vs ** (p - 1) * vt ** (p - 1) * (vps * vt - vs * vpt) / den**2

    return w01, w01p


def _postprocess(disc: Discretization) -> Discretization:
    jac = disc.jacobians
    if not np.all(np.isfinite(disc.points)) or not np.all(np.isfinite(jac)):
        raise MeshError("non-finite node data; parametrization fault")
    if np.any(jac <= 0):
        raise MeshError(
            "jacobian underflowed to zero near a corner; lower p or the node count"
        )
    for sl in disc.component_slices:
        pts = disc.points[sl]
        gap = np.hypot(*(pts - np.roll(pts, -1, axis=0)).T)
        if np.any(gap == 0.0):
            raise MeshError(
                "adjacent nodes collapsed onto a corner in double precision; "
                "lower p or the node count"
            )
    return disc


def uniform_grid(curve: BoundaryCurve, N) -> Discretization:
    """Equispaced grid t_j = 2*pi*j/N_c per smooth component.

    N is the total node count (even); for multi-component curves it may also
    be an explicit per-component sequence. Curves with corners are rejected:
    use graded_grid.
    """
    if curve.has_corners:
        raise MeshError("curve has corners; use graded_grid")
    ncomp = curve.n_components
    if np.ndim(N) == 0:
        N = int(N)
        if N < 8 or N % 2:
            raise MeshError("N must be even and at least 8")
        if ncomp == 1:
            counts = [N]
        else:
            # split proportional to component perimeter, even per component
            from .geometry import _arc_integral

            lens = [
                _arc_integral(curve.arcs[curve.component_arcs(c)[0]],
                              lambda xi, x, y, dx, dy: np.hypot(dx, dy))
                for c in range(ncomp)
            ]
            counts = _allocate_even(N, lens)
    else:
        counts = [int(v) for v in N]
        if len(counts) != ncomp or any(v < 8 or v % 2 for v in counts):
            raise MeshError("per-component counts must be even, >= 8, one per component")

    chunks = []
    slices = []
    off = 0
    for c, n_c in enumerate(counts):
        (ai,) = curve.component_arcs(c)
        arc = curve.arcs[ai]
        t = TWO_PI * np.arange(n_c) / n_c
        xi = t / TWO_PI
        x, y = arc.position(xi)
        dx, dy = arc.derivative(xi)
        sp = np.hypot(dx, dy)
        ddx, ddy = arc.second_derivative(xi)
        kap = (dx * ddy - dy * ddx) / sp**3
        chunks.append(dict(
            s=t, pts=np.column_stack([x, y]), jac=sp / TWO_PI,
            nrm=np.column_stack([dy, -dx]) / sp[:, None], kap=kap,
            seg=np.full(n_c, ai), comp=np.full(n_c, c),
            bc=np.full(n_c, arc.boundary_condition == STEKLOV),
        ))
        slices.append(slice(off, off + n_c))
        off += n_c

    return _postprocess(Discretization(
        curve=curve,
        nodes=np.concatenate([ch["s"] for ch in chunks]),
        points=np.vstack([ch["pts"] for ch in chunks]),
        jacobians=np.concatenate([ch["jac"] for ch in chunks]),
        normals=np.vstack([ch["nrm"] for ch in chunks]),
        curvatures=np.concatenate([ch["kap"] for ch in chunks]),
        segment_index=np.concatenate([ch["seg"] for ch in chunks]),
        component_index=np.concatenate([ch["comp"] for ch in chunks]),
        component_slices=tuple(slices),
        steklov_mask=np.concatenate([ch["bc"] for ch in chunks]),
        grading_degree="uniform",
        N=off,
    ))


def graded_grid(curve: BoundaryCurve, nodes_per_arc, p: int) -> Discretization:
    """Midpoint-shifted graded mesh, nodes_per_arc nodes on every arc.

    nodes_per_arc may be a single integer (equal allocation, the default
    convention) or a sequence giving each arc its own count. Nodes sit at
    s_j = 2*pi*(j + 1/2)/N_c so none lands on a corner; within a component,
    arc i occupies an s-span proportional to its node count, which keeps the
    global s-grid uniform as the circulant singular rule requires.
    """
    p = int(p)
    if p < 2:
        raise MeshError("grading degree p must be at least 2")
    if p > 8:
        raise MeshError("grading degree p > 8 is not supported (conditioning)")
    if p > 6:
        warnings.warn("grading degree p > 6 degrades conditioning", RuntimeWarning)

    n_arcs = len(curve.arcs)
    if np.ndim(nodes_per_arc) == 0:
        counts = [int(nodes_per_arc)] * n_arcs
    else:
        counts = [int(v) for v in nodes_per_arc]
        if len(counts) != n_arcs:
            raise MeshError("need one node count per arc")
    if any(m < 4 for m in counts):
        raise MeshError("each arc needs at least 4 nodes")

    w01, w01p = _grading_maps(p)
    chunks = []
    slices = []
    off = 0
    for c in range(curve.n_components):
        idx = curve.component_arcs(c)
        m = np.array([counts[i] for i in idx])
        n_c = int(m.sum())
        if n_c % 2:
            raise MeshError(
                f"component {c} gets an odd node total {n_c}; "
                "the singular rule needs an even count per component"
            )
        s = TWO_PI * (np.arange(n_c) + 0.5) / n_c
        bounds = TWO_PI * np.concatenate([[0], np.cumsum(m)]) / n_c
        which = np.searchsorted(bounds, s, side="right") - 1
        for k, ai in enumerate(idx):
            sel = which == k
            span = bounds[k + 1] - bounds[k]
            sigma = (s[sel] - bounds[k]) * TWO_PI / span
            xi = w01(sigma)
            dxi_ds = w01p(sigma) * TWO_PI / span
            arc = curve.arcs[ai]
            x, y = arc.position(xi)
            dx, dy = arc.derivative(xi)
            sp = np.hypot(dx, dy)
            ddx, ddy = arc.second_derivative(xi)
            kap = (dx * ddy - dy * ddx) / sp**3
            chunks.append(dict(
                s=s[sel], pts=np.column_stack([x, y]), jac=sp * dxi_ds,
                nrm=np.column_stack([dy, -dx]) / sp[:, None], kap=kap,
                seg=np.full(sel.sum(), ai), comp=np.full(sel.sum(), c),
                bc=np.full(sel.sum(), arc.boundary_condition == STEKLOV),
            ))
        slices.append(slice(off, off + n_c))
        off += n_c

    return _postprocess(Discretization(
        curve=curve,
        nodes=np.concatenate([ch["s"] for ch in chunks]),
        points=np.vstack([ch["pts"] for ch in chunks]),
        jacobians=np.concatenate([ch["jac"] for ch in chunks]),
        normals=np.vstack([ch["nrm"] for ch in chunks]),
        curvatures=np.concatenate([ch["kap"] for ch in chunks]),
        segment_index=np.concatenate([ch["seg"] for ch in chunks]),
        component_index=np.concatenate([ch["comp"] for ch in chunks]),
        component_slices=tuple(slices),
        steklov_mask=np.concatenate([ch["bc"] for ch in chunks]),
        grading_degree=p,
        N=off,
    ))


def make_discretization(curve: BoundaryCurve, params: dict) -> Discretization:
    """Build a grid from a small parameter mapping.

    Keys: N (total nodes) or nodes_per_arc, plus p for corner grading.
    Smooth curves get a uniform grid from N; curves with corners get the
    graded mesh, splitting a total N equally across arcs.
    """
    params = dict(params)
    p = params.pop("p", 6)
    if "nodes_per_arc" in params:
        npa = params.pop("nodes_per_arc")
        if params:
            raise MeshError(f"unused discretization parameters: {sorted(params)}")
        return graded_grid(curve, npa, p)
    N = params.pop("N")
    if params:
        raise MeshError(f"unused discretization parameters: {sorted(params)}")
    if not curve.has_corners:
        return uniform_grid(curve, N)
    n_arcs = len(curve.arcs)
    if np.ndim(N) == 0:
        if int(N) % n_arcs:
            raise MeshError(
                f"total N must divide evenly across {n_arcs} arcs "
                "(or pass nodes_per_arc explicitly)"
            )
        return graded_grid(curve, int(N) // n_arcs, p)
    return graded_grid(curve, N, p)


def probe_params(disc: Discretization) -> dict:
    """Parameters of the coarse rank-probe grid: one third the nodes.

    Counts are rounded per arc (or per component) to stay even, minimum 8.
    """
    if disc.grading_degree == "uniform":
        counts = [
            max(8, 2 * round((sl.stop - sl.start) / 6))
            for sl in disc.component_slices
        ]
        if disc.curve.n_components == 1:
            return {"N": counts[0]}
        return {"N": counts}
    m = [
        max(8, 2 * round(np.count_nonzero(disc.segment_index == i) / 6))
        for i in range(len(disc.curve.arcs))
    ]
    return {"nodes_per_arc": m, "p": disc.grading_degree}
