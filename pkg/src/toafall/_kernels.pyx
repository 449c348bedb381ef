# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the hot kernels.

Mirrors ``_kernels_py`` operation for operation; see that module for the
API and status-code contract.
"""

from libc.math cimport sqrt, exp, fabs, NAN, isfinite

import numpy as np

BACKEND_NAME = "cython"

cdef double _SQRT_2PI = 2.5066282746310002
cdef double _EXP_FLOOR = 745.0
cdef double _EPS = 2.220446049250313e-16

STATUS_OK = 0
STATUS_NO_CROSSING = 1
STATUS_BRACKET_FAILURE = 2

cdef int _ST_OK = 0
cdef int _ST_NO_CROSSING = 1
cdef int _ST_BRACKET_FAILURE = 2


cdef inline double _pdf_one(double m, double sigma0, double v0, double g,
                            double tau, double x, double t) nogil:
    cdef double u2 = 1.0 + (t / tau) * (t / tau)
    cdef double drift = x - v0 * t - 0.5 * g * t * t
    cdef double ex = drift * drift / (2.0 * sigma0 * sigma0 * u2)
    if ex > _EXP_FLOOR or not isfinite(ex):
        return 0.0
    cdef double pref = (v0 + x * t / (tau * tau) + g * t
                        + 0.5 * g * t * t * t / (tau * tau)) / u2
    return fabs(pref) * exp(-ex) / (_SQRT_2PI * sigma0 * sqrt(u2))


def pdf_batch(double m, double sigma0, double v0, double g, double hbar,
              double x, t):
    """Closed-form arrival-time density of a free-fall Gaussian packet."""
    cdef double tau = 2.0 * m * sigma0 * sigma0 / hbar
    t_in = np.asarray(t, dtype=np.float64)
    flat = np.ascontiguousarray(t_in.reshape(-1))
    out = np.empty(flat.shape[0], dtype=np.float64)
    cdef double[::1] tv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = tv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _pdf_one(m, sigma0, v0, g, tau, x, tv[i])
    return out.reshape(t_in.shape)


cdef inline double _phi(double t, double v0, double g, double sigma0,
                        double tau, double xi, double x) nogil:
    return v0 * t + 0.5 * g * t * t + xi * sigma0 * sqrt(1.0 + (t * t) / (tau * tau)) - x


cdef double _brent(double v0, double g, double sigma0, double tau, double xi,
                   double x, double a, double b, double fa, double fb,
                   double tol_abs) nogil:
    cdef double c = a, fc = fa
    cdef double e = b - a, d = b - a
    cdef double tol, mid, s, p, q, r, tmp
    while True:
        if fabs(fc) < fabs(fb):
            tmp = b; b = c; c = tmp          # rotate (a,b,c) <- (b,c,b)
            a = c
            tmp = fb; fb = fc; fc = tmp
            fa = fc
        tol = 2.0 * _EPS * fabs(b) + tol_abs
        mid = 0.5 * (c - b)
        if fabs(mid) <= tol or fb == 0.0:
            return b
        if fabs(e) < tol or fabs(fa) <= fabs(fb):
            e = mid; d = mid
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
            if 2.0 * p < 3.0 * mid * q - fabs(tol * q) and p < fabs(0.5 * s * q):
                d = p / q
            else:
                e = mid; d = mid
        a = b; fa = fb
        if fabs(d) > tol:
            b += d
        elif mid > 0.0:
            b += tol
        else:
            b -= tol
        fb = _phi(b, v0, g, sigma0, tau, xi, x)
        if (fb > 0.0) == (fc > 0.0):
            c = a; fc = fa
            e = b - a; d = b - a


cdef double _crossing_root_scalar(double v0, double g, double sigma0,
                                  double tau, double xi, double x,
                                  double t_c, double abs_tol,
                                  int max_expansions, int* status) nogil:
    cdef double lo, flo, hi, fhi, step, a, fa, b, fb
    cdef int k, i, n_cells

    if xi * sigma0 >= x:
        status[0] = _ST_NO_CROSSING
        return NAN
    if g == 0.0 and v0 + xi * sigma0 / tau <= 0.0:
        status[0] = _ST_NO_CROSSING
        return NAN

    lo = 0.0
    flo = xi * sigma0 - x
    hi = 2.0 * t_c
    fhi = _phi(hi, v0, g, sigma0, tau, xi, x)
    k = 0
    while fhi < 0.0:
        if k >= max_expansions:
            status[0] = _ST_BRACKET_FAILURE
            return NAN
        lo = hi; flo = fhi
        hi *= 2.0
        fhi = _phi(hi, v0, g, sigma0, tau, xi, x)
        k += 1
    if fhi == 0.0:
        status[0] = _ST_OK
        return hi
    if flo == 0.0:
        status[0] = _ST_OK
        return lo

    if v0 > 0.0 and xi < 0.0 and x < 10.0 * sigma0:
        n_cells = 64
        step = (hi - lo) / n_cells
        a = lo; fa = flo
        for i in range(1, n_cells):
            b = lo + step * i
            fb = _phi(b, v0, g, sigma0, tau, xi, x)
            if fb == 0.0:
                status[0] = _ST_OK
                return b
            if fb > 0.0:
                hi = b; fhi = fb
                break
            a = b; fa = fb
        lo = a; flo = fa

    status[0] = _ST_OK
    return _brent(v0, g, sigma0, tau, xi, x, lo, hi, flo, fhi, abs_tol)


def crossing_roots(double m, double sigma0, double v0, double g, double hbar,
                   double x, xi, double abs_tol, int max_expansions):
    """First-crossing times for a batch of quantile draws xi."""
    cdef double tau = 2.0 * m * sigma0 * sigma0 / hbar
    cdef double t_c = 2.0 * x / (sqrt(v0 * v0 + 2.0 * g * x) + v0)
    xi_in = np.asarray(xi, dtype=np.float64)
    flat = np.ascontiguousarray(xi_in.reshape(-1))
    roots = np.empty(flat.shape[0], dtype=np.float64)
    status = np.empty(flat.shape[0], dtype=np.int8)
    cdef double[::1] xv = flat
    cdef double[::1] rv = roots
    cdef signed char[::1] sv = status
    cdef Py_ssize_t i, n = xv.shape[0]
    cdef int st
    with nogil:
        for i in range(n):
            rv[i] = _crossing_root_scalar(v0, g, sigma0, tau, xv[i], x,
                                          t_c, abs_tol, max_expansions, &st)
            sv[i] = <signed char> st
    return roots.reshape(xi_in.shape), status.reshape(xi_in.shape)
