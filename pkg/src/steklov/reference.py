"""Independent reference spectra: disk, square, annulus, exceptional values.

The disk spectrum is the classical Bessel quotient per angular order. The
square spectrum comes from separation of variables: eigenfunctions factor as
X(x)Y(y) with X'' = -c X, Y'' = -(mu^2 - c) Y, and matching the Steklov
condition on opposite sides reduces each parity class to a one-parameter
family sigma_x(c) = sigma_y(mu^2 - c) of tan/tanh intersections scanned and
root-found per branch (derivation notes in docs/square_oracle.md). At an
exceptional wavenumber the resonant separation constants appear as poles of
the branch functions, never as roots, so the scan is exceptional-safe and
the sentinels are prepended from the Dirichlet representation count.

The annulus spectrum solves, per angular order, the 2x2 boundary system for
c1 J_n + c2 Y_n; its determinant is a quadratic in sigma whose two real
roots are both eigenvalues.

None of this touches the boundary-operator code; these are the second set
of books the solver is audited against.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .special import (
    bessel_j,
    bessel_j_prime,
    bessel_y,
    bessel_y_prime,
    bessel_zero,
)

__all__ = [
    "OracleError",
    "DiskSpectrumQuery",
    "disk_spectrum",
    "disk_spectrum_exceptional",
    "square_spectrum",
    "annulus_radial_spectrum",
    "exceptional_wavenumbers",
    "save_reference_csv",
]

NEG_INF = float("-inf")


class OracleError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# disk

@dataclass(frozen=True)
class DiskSpectrumQuery:
    mu: float
    count: int
    radius: float = 1.0
    max_order: int | None = None

    def __post_init__(self):
        if self.count < 1:
            raise OracleError("count must be at least 1")
        if self.mu < 0 or self.radius <= 0:
            raise OracleError("need mu >= 0 and radius > 0")


def _bessel_ratio(n, z: float, depth: int = 80) -> np.ndarray:
    """J_{n+1}(z)/J_n(z) by the standard continued fraction (CF1).

    Backward evaluation; for n well above z it converges to machine
    precision in a handful of levels, exactly the regime where forming
    the ratio from jv values fails because J_n(z) underflows.
    """
    n = np.asarray(n, dtype=float)
    r = np.zeros_like(n)
    for k in range(depth, 0, -1):
        r = 1.0 / (2.0 * (n + k) / z - r)
    return r


def _disk_sigma(mu: float, z: float, n: np.ndarray) -> np.ndarray:
    sig = np.empty(len(n), dtype=float)
    # direct quotient is fine while J_n(z) is far from underflow
    lo = n < max(2.0 * z, z + 40.0)
    sig[lo] = mu * bessel_j_prime(n[lo], z) / bessel_j(n[lo], z)
    # J'_n/J_n = n/z - J_{n+1}/J_n
    sig[~lo] = mu * (n[~lo] / z - _bessel_ratio(n[~lo], z))
    # magnitudes below 1e-12 only arise when z sits on a zero of J_n' to
    # double precision (e.g. mu = j_{1,1}, where J_0' = -J_1 vanishes);
    # the analytic value there is exactly 0 and the error metric switches
    # to absolute on exact zeros
    sig[np.abs(sig) < 1e-12] = 0.0
    return sig


def _disk_orders_values(mu: float, radius: float, max_order: int) -> np.ndarray:
    z = mu * radius
    n = np.arange(max_order + 1)
    sig = _disk_sigma(mu, z, n)
    # each order n >= 1 appears twice (sin and cos azimuthal factors)
    return np.sort(np.concatenate([sig, sig[1:]]))


def _check_disk_resonance(mu: float, radius: float, max_order: int) -> None:
    z = mu * radius
    for n in range(max_order + 1):
        k = 1
        while True:
            j = bessel_zero(n, k)
            if j > z + 1.0:
                break
            if abs(z - j) < 1e-12:
                raise OracleError(
                    f"mu*R coincides with Bessel zero j_{{{n},{k}}}; "
                    "use disk_spectrum_exceptional"
                )
            k += 1
        if bessel_zero(n, 1) > z + 1.0:
            break


def disk_spectrum(q: DiskSpectrumQuery) -> np.ndarray:
    """First q.count eigenvalues mu J'_n(mu R)/J_n(mu R), ascending.

    max_order grows automatically until the count-th smallest value is
    stable under max_order -> max_order + 10.
    """
    mo = q.max_order if q.max_order is not None else max(20, q.count)
    _check_disk_resonance(q.mu, q.radius, mo)
    vals = _disk_orders_values(q.mu, q.radius, mo)[: q.count]
    while True:
        nxt = _disk_orders_values(q.mu, q.radius, mo + 10)[: q.count]
        if len(vals) == q.count and np.allclose(nxt, vals, rtol=1e-13, atol=1e-13):
            return nxt
        if q.max_order is not None and len(vals) >= q.count:
            return nxt
        vals, mo = nxt, mo + 10
        if mo > 10000:
            raise OracleError("max_order failed to stabilize")


def disk_spectrum_exceptional(mu: float, count: int, radius: float = 1.0):
    """(sentinel count ell, finite eigenvalues) at an exceptional wavenumber.

    mu * radius must equal some Bessel zero j_{n*,k} to 1e-12; the resonant
    order n* contributes ell = 1 (n* = 0) or 2 sentinels and is excluded
    from the finite list.
    """
    z = mu * radius
    n_star = None
    n = 0
    while bessel_zero(n, 1) <= z + 1.0:
        k = 1
        while True:
            j = bessel_zero(n, k)
            if j > z + 1.0:
                break
            if abs(z - j) < 1e-12:
                n_star = n
                break
            k += 1
        if n_star is not None:
            break
        n += 1
    if n_star is None:
        raise OracleError("mu*R is not a Bessel zero; use disk_spectrum")
    ell = 1 if n_star == 0 else 2
    mo = max(20, count + n_star)
    prev = None
    while True:
        ns = np.array([m for m in range(mo + 1) if m != n_star])
        sig = _disk_sigma(mu, z, ns)
        mult = np.where(ns == 0, 1, 2)
        vals = np.sort(np.repeat(sig, mult))[:count]
        if prev is not None and len(prev) == count and np.allclose(vals, prev, rtol=1e-13):
            return ell, vals
        prev, mo = vals, mo + 10


# ---------------------------------------------------------------------------
# square (separation of variables)

def _branch(par: str, c, L: float):
    """sigma for the 1D factor with X'' = -c X on [-L/2, L/2].

    par = 'e': X = cos(sqrt(c) x) family; par = 'o': X = sin family.
    Negative c continues through the hyperbolic functions; c = 0 is the
    constant (even) or linear (odd) factor.
    """
    c = np.asarray(c, dtype=float)
    out = np.empty_like(c)
    pos = c > 0
    neg = c < 0
    zer = ~pos & ~neg
    xi = np.sqrt(c[pos])
    ze = np.sqrt(-c[neg])
    if par == "e":
        out[pos] = -xi * np.tan(xi * L / 2)
        out[neg] = ze * np.tanh(ze * L / 2)
        out[zer] = 0.0
    else:
        out[pos] = xi / np.tan(xi * L / 2)
        out[neg] = ze / np.tanh(ze * L / 2)
        out[zer] = 2.0 / L
    return out


def _branch_poles(par: str, L: float, cmax: float):
    """Poles of _branch(par, c) for c in (0, cmax]."""
    ks = []
    j = 1
    while True:
        root = ((2 * j - 1) * np.pi / L) ** 2 if par == "e" else (2 * j * np.pi / L) ** 2
        if root > cmax:
            break
        ks.append(root)
        j += 1
    return ks


def _square_ell(side: float, mu: float) -> int:
    """Number of ordered pairs (m, n), m, n >= 1 with (pi/side)^2(m^2+n^2) = mu^2."""
    lam = (mu * side / np.pi) ** 2
    top = int(np.floor(np.sqrt(lam))) + 1
    ell = 0
    for m in range(1, top + 1):
        for n in range(1, top + 1):
            if abs(m * m + n * n - lam) < 1e-9 * max(1.0, lam):
                ell += 1
    return ell


def square_spectrum(side: float, mu: float, count: int) -> np.ndarray:
    """First `count` Steklov eigenvalues of the side x side square.

    At an exceptional wavenumber the ell resonant directions are returned
    as leading -inf sentinels (their true limit), followed by the finite
    eigenvalues; off resonance the array is all finite. Roots are bracketed
    between consecutive poles of the branch functions and polished to
    ~1e-13; the scan raises rather than silently skipping a root.
    """
    if side <= 0 or mu < 0:
        raise OracleError("need side > 0 and mu >= 0")
    L = side
    ell = _square_ell(side, mu)
    need = count - ell
    if need <= 0:
        return np.full(count, NEG_INF)

    sig_cap = 1.0
    for _ in range(60):
        window = mu**2 + (1.2 * sig_cap) ** 2 + 10.0
        vals = []
        for (px, py), dup in ((("e", "e"), 1), (("o", "o"), 1), (("e", "o"), 2)):
            cuts = sorted(set(
                [-window, mu**2 + window]
                + _branch_poles(px, L, mu**2 + window)
                + [mu**2 - q for q in _branch_poles(py, L, mu**2 + window)]
            ))
            cuts = [c for c in cuts if -window <= c <= mu**2 + window]

            def h(c):
                return _branch(px, np.atleast_1d(c), L)[0] \
                    - _branch(py, np.atleast_1d(mu**2 - c), L)[0]

            for a, b in zip(cuts[:-1], cuts[1:]):
                eps = 1e-9 * (b - a)
                grid = np.linspace(a + eps, b - eps, 4000)
                hv = _branch(px, grid, L) - _branch(py, mu**2 - grid, L)
                sgn = np.sign(hv)
                exact = np.nonzero(hv == 0.0)[0]
                for i in exact:
                    vals.extend([_branch(px, np.atleast_1d(grid[i]), L)[0]] * dup)
                flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
                for i in flips:
                    try:
                        c0 = brentq(h, grid[i], grid[i + 1], xtol=1e-13, rtol=8.9e-16)
                    except ValueError as exc:
                        raise OracleError(f"root polish failed in ({a}, {b})") from exc
                    vals.extend([_branch(px, np.atleast_1d(c0), L)[0]] * dup)
        vals = np.sort(np.asarray(vals))
        # roots the branch functions cannot distinguish from 0 in double
        # precision are exact zeros (Neumann-type modes); keeping the 1e-14
        # dust would poison relative-error comparisons downstream
        vals[np.abs(vals) < 1e-12] = 0.0
        vals = vals[vals <= sig_cap]
        if len(vals) >= need:
            return np.concatenate([np.full(ell, NEG_INF), vals[:need]])
        sig_cap *= 2
    raise OracleError("bracket scan exhausted before finding enough roots")


# ---------------------------------------------------------------------------
# annulus (outer radius R_out = 1, inner radius eps, both sides Steklov)

def annulus_radial_spectrum(mu: float, eps: float, count: int) -> np.ndarray:
    """Eigenvalues of the annulus 1 > r > eps by radial separation.

    Per angular order n the trace conditions on u = c1 J_n(mu r) + c2 Y_n(mu r)
    give a 2x2 system whose determinant is quadratic in sigma; both roots are
    eigenvalues, with multiplicity 2 for n >= 1.
    """
    if not (0 < eps < 1):
        raise OracleError("annulus oracle needs 0 < eps < 1")
    nmax = max(30, count)
    prev = None
    while True:
        vals = []
        for n in range(nmax + 1):
            J1, Y1 = bessel_j(n, mu), bessel_y(n, mu)
            Jp1, Yp1 = mu * bessel_j_prime(n, mu), mu * bessel_y_prime(n, mu)
            Je, Ye = bessel_j(n, mu * eps), bessel_y(n, mu * eps)
            Jpe = -mu * bessel_j_prime(n, mu * eps)
            Ype = -mu * bessel_y_prime(n, mu * eps)
            # det of [[Jp1 - s J1, Yp1 - s Y1], [Jpe - s Je, Ype - s Ye]] = 0
            a = J1 * Ye - Y1 * Je
            b = -(J1 * Ype - Y1 * Jpe + Jp1 * Ye - Yp1 * Je)
            c = Jp1 * Ype - Yp1 * Jpe
            disc = b * b - 4 * a * c
            if disc < 0:
                continue
            mult = 1 if n == 0 else 2
            for root in ((-b + np.sqrt(disc)) / (2 * a), (-b - np.sqrt(disc)) / (2 * a)):
                vals.extend([root] * mult)
        vals = np.sort(np.asarray(vals))[:count]
        if prev is not None and len(prev) == count and np.allclose(vals, prev, rtol=1e-13):
            return vals
        prev, nmax = vals, nmax + 20
        if nmax > 5000:
            raise OracleError("annulus order cap failed to stabilize")


# ---------------------------------------------------------------------------
# exceptional wavenumber catalogs

def exceptional_wavenumbers(shape: str, limit: float, *, radius: float = 1.0,
                            side: float = np.pi):
    """All exceptional wavenumbers of the disk or square up to `limit`.

    Returns a sorted list of (mu_D, multiplicity). Shapes without a closed
    form Dirichlet spectrum are rejected.
    """
    if limit > 100:
        raise OracleError("catalog capped at limit <= 100")
    out = []
    if shape == "disk":
        n = 0
        while True:
            if bessel_zero(n, 1) > limit * radius:
                break
            k = 1
            while True:
                j = bessel_zero(n, k)
                if j > limit * radius:
                    break
                out.append((j / radius, 1 if n == 0 else 2))
                k += 1
            n += 1
        return sorted(out)
    if shape == "square":
        top = int(np.ceil(limit * side / np.pi)) + 1
        raw = []
        for m in range(1, top + 1):
            for n in range(1, top + 1):
                mu = np.pi * np.hypot(m, n) / side
                if mu <= limit:
                    raw.append(mu)
        raw.sort()
        for mu in raw:
            if out and abs(out[-1][0] - mu) < 1e-12:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((mu, 1))
        return out
    raise OracleError(f"no exceptional-wavenumber catalog for shape {shape!r}")


def save_reference_csv(values, path) -> None:
    """One eigenvalue per row; -inf sentinels serialize as the string -inf."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["k", "sigma"])
        for k, v in enumerate(np.asarray(values), start=1):
            w.writerow([k, "-inf" if v == NEG_INF else repr(float(v))])
