"""Integer-order Bessel and Hankel functions and Bessel zeros.

Thin, contract-checked wrappers around scipy.special. The layer-potential
kernels, the analytic disk spectrum, and the exceptional-wavenumber catalog
all consume these; keeping them in one place pins the accuracy requirements
(relative error <= 1e-14 for |x| <= 100) to a single tested surface.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

# Euler-Mascheroni constant to 20 digits; enters the small-argument law
# Y_0(x) ~ (2/pi)(ln(x/2) + gamma_E) used in the kernel-splitting diagonal.
EULER_GAMMA = 0.57721566490153286061


def _check_order(n) -> None:
    arr = np.asarray(n)
    if np.any(arr < 0) or not np.all(np.mod(arr, 1) == 0):
        raise ValueError("Bessel order must be a non-negative integer")


def bessel_j(n, x):
    """J_n(x) for integer order n >= 0; scalar or array arguments."""
    _check_order(n)
    return _sp.jv(n, x)


def bessel_y(n, x):
    """Y_n(x) for integer order n >= 0."""
    _check_order(n)
    return _sp.yv(n, x)


def bessel_j_prime(n, x):
    """J_n'(x) via the recurrence (J_{n-1} - J_{n+1})/2; J_0' = -J_1."""
    _check_order(n)
    return _sp.jvp(n, x)


def bessel_y_prime(n, x):
    """Y_n'(x) via the same recurrence applied to Y."""
    _check_order(n)
    return _sp.yvp(n, x)


def hankel1(n, x):
    """H_n^{(1)}(x) = J_n(x) + i Y_n(x), defined here for x > 0 only.

    Kernel code handles coincident points separately, so x <= 0 signals a
    caller bug and raises instead of returning nan.
    """
    _check_order(n)
    if np.any(np.asarray(x) <= 0):
        raise ValueError("hankel1 requires x > 0")
    return _sp.hankel1(n, x)


def bessel_zero(n: int, k: int) -> float:
    """k-th positive zero j_{n,k} of J_n, k >= 1, absolute error <= 1e-12."""
    _check_order(n)
    if k < 1:
        raise ValueError("zero index k must be >= 1")
    return float(_sp.jn_zeros(n, k)[-1])
