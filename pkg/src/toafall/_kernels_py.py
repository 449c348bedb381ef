"""Pure-Python/numpy implementation of the hot kernels.

Selected at import time when the compiled extension is unavailable (see
``_backend``).  The algorithms and floating-point operation order mirror
``_kernels.pyx`` exactly so both backends produce the same results.

Kernel API:

  pdf_batch(m, sigma0, v0, g, hbar, x, t)           -> ndarray of densities
  crossing_roots(m, sigma0, v0, g, hbar, x, xi,
                 abs_tol, max_expansions)           -> (roots, status)

Status codes: 0 = first crossing found, 1 = no positive crossing exists
(counted outcome), 2 = bracket expansion exhausted (diagnostic failure).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

_SQRT_2PI = 2.5066282746310002  # sqrt(2*pi)
_EXP_FLOOR = 745.0              # exp(-745) underflows to 0 in double precision

STATUS_OK = 0
STATUS_NO_CROSSING = 1
STATUS_BRACKET_FAILURE = 2


def pdf_batch(m, sigma0, v0, g, hbar, x, t):
    """Closed-form arrival-time density of a free-fall Gaussian packet.

    The prefactor is taken in absolute value so the result is a density
    (>= 0) for any t, including the diagnostic t < 0 range.
    """
    t = np.asarray(t, dtype=float)
    tau = 2.0 * m * sigma0 * sigma0 / hbar
    u2 = 1.0 + (t / tau) ** 2
    drift = x - v0 * t - 0.5 * g * t * t
    with np.errstate(over="ignore", invalid="ignore"):
        ex = drift * drift / (2.0 * sigma0 * sigma0 * u2)
        pref = (v0 + x * t / (tau * tau) + g * t
                + 0.5 * g * t * t * t / (tau * tau)) / u2
        out = np.abs(pref) * np.exp(-ex) / (_SQRT_2PI * sigma0 * np.sqrt(u2))
    # Far tails: exp underflow times a huge prefactor can produce NaN/inf,
    # but the true limit is 0.
    out = np.where((ex > _EXP_FLOOR) | ~np.isfinite(ex), 0.0, out)
    return out


def _phi(t, v0, g, sigma0, tau, xi, x):
    """Signed distance of the xi-quantile of the packet past the detector."""
    return v0 * t + 0.5 * g * t * t + xi * sigma0 * math.sqrt(1.0 + (t * t) / (tau * tau)) - x


def _brent(v0, g, sigma0, tau, xi, x, a, b, fa, fb, tol_abs):
    """Classic Brent root finder on a sign-change bracket [a, b]."""
    c, fc = a, fa
    e = d = b - a
    eps = 2.220446049250313e-16
    while True:
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * eps * abs(b) + tol_abs
        mid = 0.5 * (c - b)
        if abs(mid) <= tol or fb == 0.0:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            e = d = mid
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * mid * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * mid * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            s = e
            e = d
            if 2.0 * p < 3.0 * mid * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                e = d = mid
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        elif mid > 0.0:
            b += tol
        else:
            b -= tol
        fb = _phi(b, v0, g, sigma0, tau, xi, x)
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            e = d = b - a


def _crossing_root_scalar(v0, g, sigma0, tau, xi, x, t_c, abs_tol, max_expansions):
    """Smallest t > 0 with x_c(t) + xi*sigma(t) = x.  Returns (root, status)."""
    if xi * sigma0 >= x:
        # starts at or beyond the detector and the quantile moves forward
        return math.nan, STATUS_NO_CROSSING
    if g == 0.0 and v0 + xi * sigma0 / tau <= 0.0:
        # spreading outruns the drift: this quantile never reaches x
        return math.nan, STATUS_NO_CROSSING

    lo = 0.0
    flo = xi * sigma0 - x
    hi = 2.0 * t_c
    fhi = _phi(hi, v0, g, sigma0, tau, xi, x)
    k = 0
    while fhi < 0.0:
        if k >= max_expansions:
            return math.nan, STATUS_BRACKET_FAILURE
        lo, flo = hi, fhi
        hi *= 2.0
        fhi = _phi(hi, v0, g, sigma0, tau, xi, x)
        k += 1
    if fhi == 0.0:
        return hi, STATUS_OK
    if flo == 0.0:
        return lo, STATUS_OK

    # A launched packet observed in the near field can cross, recede, and
    # cross again; pin the bracket to the first sign change before polishing.
    if v0 > 0.0 and xi < 0.0 and x < 10.0 * sigma0:
        n_cells = 64
        step = (hi - lo) / n_cells
        a, fa = lo, flo
        for i in range(1, n_cells):
            b = lo + step * i
            fb = _phi(b, v0, g, sigma0, tau, xi, x)
            if fb == 0.0:
                return b, STATUS_OK
            if fb > 0.0:
                hi, fhi = b, fb
                break
            a, fa = b, fb
        lo, flo = a, fa

    root = _brent(v0, g, sigma0, tau, xi, x, lo, hi, flo, fhi, abs_tol)
    return root, STATUS_OK


def crossing_roots(m, sigma0, v0, g, hbar, x, xi, abs_tol, max_expansions):
    """First-crossing times for a batch of quantile draws xi."""
    xi = np.asarray(xi, dtype=float)
    tau = 2.0 * m * sigma0 * sigma0 / hbar
    t_c = 2.0 * x / (math.sqrt(v0 * v0 + 2.0 * g * x) + v0)
    roots = np.empty(xi.shape, dtype=float)
    status = np.empty(xi.shape, dtype=np.int8)
    flat_xi = xi.ravel()
    flat_roots = roots.ravel()
    flat_status = status.ravel()
    for i in range(flat_xi.size):
        r, s = _crossing_root_scalar(v0, g, sigma0, tau, flat_xi[i], x,
                                     t_c, abs_tol, max_expansions)
        flat_roots[i] = r
        flat_status[i] = s
    return roots, status
