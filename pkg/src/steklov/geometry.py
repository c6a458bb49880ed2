"""Parametrized planar boundary curves.

A BoundaryCurve is a list of smooth arcs grouped into closed components.
Each arc supplies position, first and second derivative as functions of a
local parameter xi in [0, 1]; corners are exactly the junctions between
arcs of the same component, never detected numerically. Orientation is
counterclockwise for outer components and clockwise for holes, so the
outward normal is always n = (y', -x')/|x'|.

All named shapes carry hand-derived closed-form derivatives so that
jacobians and curvatures entering the quadrature are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from shapely.geometry import LinearRing, Polygon

TWO_PI = 2.0 * np.pi

STEKLOV = "steklov"
NEUMANN = "neumann"


class GeometryError(ValueError):
    """Invalid shape construction (self-intersection, bad parameters...)."""


@dataclass(frozen=True)
class SmoothArc:
    """One smooth boundary piece over the local parameter xi in [0, 1].

    position, derivative and second_derivative map an array of xi values to
    a pair (x, y) of coordinate arrays; derivatives are taken with respect
    to xi. boundary_condition marks the arc as Steklov or Neumann.
    """

    position: Callable
    derivative: Callable
    second_derivative: Callable
    boundary_condition: str = STEKLOV

    def __post_init__(self):
        if self.boundary_condition not in (STEKLOV, NEUMANN):
            raise GeometryError(
                f"unknown boundary condition {self.boundary_condition!r}"
            )


@dataclass(frozen=True)
class BoundaryCurve:
    """Piecewise-smooth closed boundary, possibly with several components.

    arcs are stored flat; arc_component[i] gives the component an arc belongs
    to. Within a component of m arcs, arc i occupies the global parameter
    interval [2*pi*i/m, 2*pi*(i+1)/m). corner_params lists, per component,
    the global parameter values where the tangent is discontinuous (empty
    tuple for smooth components).
    """

    arcs: tuple
    arc_component: tuple
    name: str = "custom"

    @property
    def n_components(self) -> int:
        return max(self.arc_component) + 1

    def component_arcs(self, c: int):
        """Indices into self.arcs of the arcs making up component c."""
        return [i for i, ci in enumerate(self.arc_component) if ci == c]

    def corner_params(self, c: int = 0):
        """Global parameter values of the corners of component c."""
        m = len(self.component_arcs(c))
        if m == 1:
            return ()
        return tuple(TWO_PI * i / m for i in range(m))

    @property
    def has_corners(self) -> bool:
        return any(len(self.component_arcs(c)) > 1 for c in range(self.n_components))

    def arc_at(self, t: float, c: int = 0):
        """Map a global parameter on component c to (arc, local xi)."""
        idx = self.component_arcs(c)
        m = len(idx)
        u = (t % TWO_PI) / TWO_PI * m
        i = min(int(u), m - 1)
        return self.arcs[idx[i]], u - i


def _as_xi(t):
    return np.atleast_1d(np.asarray(t, dtype=float))


def _arc_curvature(arc: SmoothArc, xi):
    xi = _as_xi(xi)
    dx, dy = arc.derivative(xi)
    ddx, ddy = arc.second_derivative(xi)
    sp = np.hypot(dx, dy)
    return (dx * ddy - dy * ddx) / sp**3


# ---------------------------------------------------------------------------
# quadrature over arcs (geometry integrals only; boundary operators use the
# trapezoidal/graded rules from the discretization module)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _arc_integral(arc: SmoothArc, f, panels: int = 64) -> float:
    """Composite Gauss-Legendre integral of f(xi, x, y, dx, dy) over [0, 1]."""
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    xi = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    w = np.broadcast_to(half * _GL_WEIGHTS[None, :], (panels, _GL_NODES.size)).ravel()
    x, y = arc.position(xi)
    dx, dy = arc.derivative(xi)
    return float(np.sum(w * f(xi, x, y, dx, dy)))


def perimeter(curve: BoundaryCurve) -> float:
    """Total arc length, summed over all components."""
    return sum(
        _arc_integral(arc, lambda xi, x, y, dx, dy: np.hypot(dx, dy))
        for arc in curve.arcs
    )


def area(curve: BoundaryCurve) -> float:
    """Enclosed area via (1/2) * contour integral of (x dy - y dx).

    Holes are parametrized clockwise and subtract automatically.
    """
    return 0.5 * sum(
        _arc_integral(arc, lambda xi, x, y, dx, dy: x * dy - y * dx)
        for arc in curve.arcs
    )


def curvature(curve: BoundaryCurve, t, component: int = 0):
    """Signed curvature (x'y'' - y'x'')/|x'|^3 at global parameter t.

    t must not be a corner parameter; the tangent is discontinuous there.
    """
    corners = curve.corner_params(component)
    tt = np.atleast_1d(np.asarray(t, dtype=float)) % TWO_PI
    for c in corners:
        if np.any(np.abs(tt - c) < 1e-12) or np.any(np.abs(tt - c - TWO_PI) < 1e-12):
            raise GeometryError("curvature is undefined at a corner parameter")
    out = np.empty_like(tt)
    for j, tj in enumerate(tt):
        arc, xi = curve.arc_at(tj, component)
        out[j] = _arc_curvature(arc, xi)[0]
    return out if np.ndim(t) else float(out[0])


# ---------------------------------------------------------------------------
# arc constructors

def _trig_arc(pos, dpos, ddpos, bc=STEKLOV):
    return SmoothArc(pos, dpos, ddpos, bc)


def _circle_arc(R: float, center=(0.0, 0.0), clockwise: bool = False,
                angle0: float = 0.0, angle1: float = TWO_PI, bc=STEKLOV):
    cx, cy = center
    sgn = -1.0 if clockwise else 1.0
    span = angle1 - angle0

    def pos(xi):
        th = angle0 + sgn * span * xi
        return cx + R * np.cos(th), cy + R * np.sin(th)

    def dpos(xi):
        th = angle0 + sgn * span * xi
        return -R * sgn * span * np.sin(th), R * sgn * span * np.cos(th)

    def ddpos(xi):
        th = angle0 + sgn * span * xi
        return -R * span**2 * np.cos(th), -R * span**2 * np.sin(th)

    return SmoothArc(pos, dpos, ddpos, bc)


def _line_arc(a, b, bc=STEKLOV):
    ax, ay = float(a[0]), float(a[1])
    ex, ey = float(b[0]) - ax, float(b[1]) - ay

    def pos(xi):
        return ax + xi * ex, ay + xi * ey

    def dpos(xi):
        one = np.ones_like(xi)
        return ex * one, ey * one

    def ddpos(xi):
        zero = np.zeros_like(xi)
        return zero, zero

    return SmoothArc(pos, dpos, ddpos, bc)


def _polar_arc(rf, rpf, rppf, bc=STEKLOV):
    """Star-shaped boundary r(theta) with analytic r' and r''."""

    def pos(xi):
        th = TWO_PI * xi
        r = rf(th)
        return r * np.cos(th), r * np.sin(th)

    def dpos(xi):
        th = TWO_PI * xi
        r, rp = rf(th), rpf(th)
        return TWO_PI * (rp * np.cos(th) - r * np.sin(th)), \
            TWO_PI * (rp * np.sin(th) + r * np.cos(th))

    def ddpos(xi):
        th = TWO_PI * xi
        r, rp, rpp = rf(th), rpf(th), rppf(th)
        cx = (rpp - r) * np.cos(th) - 2.0 * rp * np.sin(th)
        cy = (rpp - r) * np.sin(th) + 2.0 * rp * np.cos(th)
        return TWO_PI**2 * cx, TWO_PI**2 * cy

    return SmoothArc(pos, dpos, ddpos, bc)


# ---------------------------------------------------------------------------
# construction-time validation

def _validate(curve: BoundaryCurve, samples: int = 4096) -> BoundaryCurve:
    rings = []
    for c in range(curve.n_components):
        idx = curve.component_arcs(c)
        per_arc = max(samples // len(idx), 16)
        pts = []
        for i in idx:
            xi = np.arange(per_arc) / per_arc
            x, y = curve.arcs[i].position(xi)
            pts.append(np.column_stack([x, y]))
        coords = np.vstack(pts)
        ring = LinearRing(coords)
        if not ring.is_simple:
            raise GeometryError(f"component {c} of {curve.name!r} self-intersects")
        signed = 0.5 * np.sum(
            coords[:, 0] * np.roll(coords[:, 1], -1)
            - coords[:, 1] * np.roll(coords[:, 0], -1)
        )
        if c == 0 and signed <= 0:
            raise GeometryError("outer component must be counterclockwise")
        if c > 0 and signed >= 0:
            raise GeometryError("hole components must be clockwise")
        rings.append(ring)
    outer = Polygon(rings[0])
    for c in range(1, curve.n_components):
        inner = Polygon(rings[c])
        if not outer.contains(inner):
            raise GeometryError("hole component lies outside the outer boundary")
        if outer.boundary.intersects(inner.boundary):
            raise GeometryError("components intersect each other")
    return curve


# ---------------------------------------------------------------------------
# named shapes

def disk(R: float = 1.0) -> BoundaryCurve:
    if R <= 0:
        raise GeometryError("disk radius must be positive")
    return _validate(BoundaryCurve((_circle_arc(R),), (0,), name="disk"))


def ellipse(a: float, b: float) -> BoundaryCurve:
    if a <= 0 or b <= 0:
        raise GeometryError("ellipse semi-axes must be positive")

    def pos(xi):
        th = TWO_PI * xi
        return a * np.cos(th), b * np.sin(th)

    def dpos(xi):
        th = TWO_PI * xi
        return -TWO_PI * a * np.sin(th), TWO_PI * b * np.cos(th)

    def ddpos(xi):
        th = TWO_PI * xi
        return -TWO_PI**2 * a * np.cos(th), -TWO_PI**2 * b * np.sin(th)

    return _validate(BoundaryCurve((_trig_arc(pos, dpos, ddpos),), (0,), name="ellipse"))


def kite(kappa: float = 0.65) -> BoundaryCurve:
    """x = cos t + kappa cos 2t - kappa, y = 1.5 sin t."""

    def pos(xi):
        th = TWO_PI * xi
        return np.cos(th) + kappa * np.cos(2 * th) - kappa, 1.5 * np.sin(th)

    def dpos(xi):
        th = TWO_PI * xi
        return TWO_PI * (-np.sin(th) - 2 * kappa * np.sin(2 * th)), \
            TWO_PI * 1.5 * np.cos(th)

    def ddpos(xi):
        th = TWO_PI * xi
        return TWO_PI**2 * (-np.cos(th) - 4 * kappa * np.cos(2 * th)), \
            -TWO_PI**2 * 1.5 * np.sin(th)

    return _validate(BoundaryCurve((_trig_arc(pos, dpos, ddpos),), (0,), name="kite"))


def omega_a() -> BoundaryCurve:
    """Wavy star-shaped domain r = 1 + 0.3 cos(3(theta + 0.2 cos theta))."""

    def rf(th):
        return 1.0 + 0.3 * np.cos(3.0 * th + 0.6 * np.cos(th))

    def rpf(th):
        phi = 3.0 * th + 0.6 * np.cos(th)
        return -0.3 * np.sin(phi) * (3.0 - 0.6 * np.sin(th))

    def rppf(th):
        phi = 3.0 * th + 0.6 * np.cos(th)
        phip = 3.0 - 0.6 * np.sin(th)
        return -0.3 * (np.cos(phi) * phip**2 - np.sin(phi) * 0.6 * np.cos(th))

    return _validate(BoundaryCurve((_polar_arc(rf, rpf, rppf),), (0,), name="omega_A"))


def omega_b() -> BoundaryCurve:
    """r = exp(cos theta) cos^2(2 theta) + exp(sin theta) sin^2(2 theta)."""

    def parts(th):
        u = np.exp(np.cos(th))
        w = np.exp(np.sin(th))
        v = np.cos(2 * th) ** 2
        z = np.sin(2 * th) ** 2
        return u, v, w, z

    def rf(th):
        u, v, w, z = parts(th)
        return u * v + w * z

    def rpf(th):
        u, v, w, z = parts(th)
        up = -np.sin(th) * u
        wp = np.cos(th) * w
        vp = -2.0 * np.sin(4 * th)
        zp = 2.0 * np.sin(4 * th)
        return up * v + u * vp + wp * z + w * zp

    def rppf(th):
        u, v, w, z = parts(th)
        up = -np.sin(th) * u
        wp = np.cos(th) * w
        vp = -2.0 * np.sin(4 * th)
        zp = 2.0 * np.sin(4 * th)
        upp = (np.sin(th) ** 2 - np.cos(th)) * u
        wpp = (np.cos(th) ** 2 - np.sin(th)) * w
        vpp = -8.0 * np.cos(4 * th)
        zpp = 8.0 * np.cos(4 * th)
        return upp * v + 2 * up * vp + u * vpp + wpp * z + 2 * wp * zp + w * zpp

    return _validate(BoundaryCurve((_polar_arc(rf, rpf, rppf),), (0,), name="omega_B"))


def polygon(vertices, name: str = "polygon") -> BoundaryCurve:
    """Simple closed polygon, one straight arc per side, counterclockwise."""
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[0] < 3 or V.shape[1] != 2:
        raise GeometryError("polygon needs at least 3 planar vertices")
    arcs = tuple(
        _line_arc(V[i], V[(i + 1) % len(V)]) for i in range(len(V))
    )
    return _validate(BoundaryCurve(arcs, (0,) * len(V), name=name))


def square(side: float = np.pi) -> BoundaryCurve:
    if side <= 0:
        raise GeometryError("square side must be positive")
    s = side
    return polygon([(0, 0), (s, 0), (s, s), (0, s)], name="square")


def l_shape() -> BoundaryCurve:
    """Standard re-entrant L: a 2x2 square with the top-right unit square removed."""
    return polygon(
        [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], name="L_shape"
    )


def isoceles_triangle() -> BoundaryCurve:
    """Right isoceles triangle with legs 1, 1 and hypotenuse sqrt(2)."""
    return polygon([(0, 0), (1, 0), (0, 1)], name="isoceles_triangle")


def semicircle_mixed(R: float = 1.0) -> BoundaryCurve:
    """Half-disk: Steklov condition on the arc, Neumann on the diameter."""
    if R <= 0:
        raise GeometryError("semicircle radius must be positive")
    arcs = (
        _circle_arc(R, angle0=0.0, angle1=np.pi, bc=STEKLOV),
        _line_arc((-R, 0.0), (R, 0.0), bc=NEUMANN),
    )
    return _validate(BoundaryCurve(arcs, (0, 0), name="semicircle_mixed"))


def annulus(R_out: float = 1.0, eps: float = 0.5) -> BoundaryCurve:
    """Annular ring: outer circle counterclockwise, inner circle clockwise."""
    if not (0 < eps < R_out):
        raise GeometryError("annulus requires 0 < eps < R_out")
    arcs = (_circle_arc(R_out), _circle_arc(eps, clockwise=True))
    return _validate(BoundaryCurve(arcs, (0, 1), name="annulus"))


# ---------------------------------------------------------------------------
# Fourier star shapes

@dataclass(frozen=True)
class ShapeVector:
    """Star-shaped boundary r(t) = a0 + sum_j a_j cos(jt) + b_j sin(jt).

    a0 > sum_j(|a_j| + |b_j|) keeps r positive (no self-intersection) and
    every coefficient is capped at 0.1 in magnitude; both are construction
    invariants, not soft preferences.
    """

    a0: float
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if len(self.a) != len(self.b):
            raise GeometryError("ShapeVector needs equally many a and b coefficients")
        if self.a0 <= sum(abs(v) for v in self.a) + sum(abs(v) for v in self.b):
            raise GeometryError("ShapeVector requires a0 > sum(|a_j| + |b_j|)")
        if any(abs(v) > 0.1 for v in self.a + self.b):
            raise GeometryError("ShapeVector coefficients are capped at |.| <= 0.1")

    @property
    def n_modes(self) -> int:
        return len(self.a)

    def to_dict(self) -> dict:
        return {"a0": self.a0, "a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_dict(cls, d: dict) -> "ShapeVector":
        return cls(float(d["a0"]), tuple(d.get("a", ())), tuple(d.get("b", ())))


def fourier_shape(sv: ShapeVector) -> BoundaryCurve:
    j = np.arange(1, sv.n_modes + 1)
    a = np.asarray(sv.a)
    b = np.asarray(sv.b)

    def rf(th):
        jt = np.multiply.outer(np.asarray(th), j)
        return sv.a0 + np.cos(jt) @ a + np.sin(jt) @ b

    def rpf(th):
        jt = np.multiply.outer(np.asarray(th), j)
        return -np.sin(jt) @ (j * a) + np.cos(jt) @ (j * b)

    def rppf(th):
        jt = np.multiply.outer(np.asarray(th), j)
        return -np.cos(jt) @ (j * j * a) - np.sin(jt) @ (j * j * b)

    return _validate(BoundaryCurve((_polar_arc(rf, rpf, rppf),), (0,), name="fourier"))


# ---------------------------------------------------------------------------
# rigid motions and dilation (used by invariance tests and scale checks)

def transformed(curve: BoundaryCurve, rotation: float = 0.0,
                translation=(0.0, 0.0), scale: float = 1.0) -> BoundaryCurve:
    """Rotate, then scale, then translate a curve. Boundary conditions carry over."""
    if scale <= 0:
        raise GeometryError("scale factor must be positive")
    c, s = np.cos(rotation), np.sin(rotation)
    tx, ty = translation

    def wrap(arc: SmoothArc) -> SmoothArc:
        def pos(xi):
            x, y = arc.position(xi)
            return scale * (c * x - s * y) + tx, scale * (s * x + c * y) + ty

        def dpos(xi):
            x, y = arc.derivative(xi)
            return scale * (c * x - s * y), scale * (s * x + c * y)

        def ddpos(xi):
            x, y = arc.second_derivative(xi)
            return scale * (c * x - s * y), scale * (s * x + c * y)

        return SmoothArc(pos, dpos, ddpos, arc.boundary_condition)

    return BoundaryCurve(
        tuple(wrap(a) for a in curve.arcs), curve.arc_component, name=curve.name
    )


# ---------------------------------------------------------------------------
# named-shape registry and config loading

def make_named_shape(name: str, params: dict | None = None) -> BoundaryCurve:
    """Build one of the named shapes from string name + parameter dict."""
    params = dict(params or {})
    try:
        builder = {
            "disk": lambda: disk(params.pop("R", 1.0)),
            "ellipse": lambda: ellipse(params.pop("a", 1.0), params.pop("b", 1.5)),
            "kite": lambda: kite(params.pop("kappa", 0.65)),
            "omega_A": omega_a,
            "omega_B": omega_b,
            "square": lambda: square(params.pop("side", np.pi)),
            "L_shape": l_shape,
            "isoceles_triangle": isoceles_triangle,
            "semicircle_mixed": lambda: semicircle_mixed(params.pop("R", 1.0)),
            "annulus": lambda: annulus(
                params.pop("R_out", 1.0), params.pop("eps", 0.5)
            ),
            "fourier": lambda: fourier_shape(ShapeVector.from_dict(params.pop("shape"))),
        }[name]
    except KeyError:
        raise GeometryError(f"unknown shape name {name!r}") from None
    curve = builder()
    if params:
        raise GeometryError(f"unused shape parameters for {name!r}: {sorted(params)}")
    return curve


def shape_from_config(cfg: dict) -> BoundaryCurve:
    """Shape from a config mapping.

    Accepted forms: {"name": ..., "params": {...}},
    {"fourier": {"a0": ..., "a": [...], "b": [...]}} or
    {"polygon": [[x, y], ...]}.
    """
    if "name" in cfg:
        return make_named_shape(cfg["name"], cfg.get("params"))
    if "fourier" in cfg:
        return fourier_shape(ShapeVector.from_dict(cfg["fourier"]))
    if "polygon" in cfg:
        return polygon(cfg["polygon"])
    raise GeometryError("shape config needs one of: name, fourier, polygon")


def load_shape(path) -> BoundaryCurve:
    """Shape from a JSON config file (same forms as shape_from_config)."""
    with open(path) as f:
        return shape_from_config(json.load(f))
