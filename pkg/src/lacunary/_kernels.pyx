# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Aberth iteration and winding-number sums."""

import numpy as np
cimport numpy as cnp
from libc.math cimport M_PI, atan2, cos as _cos, fabs, hypot, sin as _sin

cnp.import_array()


cdef inline double _abs(double complex x) noexcept nogil:
    return hypot(x.real, x.imag)


cdef inline double complex _newton_ratio(const double complex[:] c, Py_ssize_t n, double complex z) noexcept nogil:
    # p(z)/p'(z); for |z| > 1 evaluate the reversed polynomial in 1/z
    cdef double complex p, dp, y
    cdef Py_ssize_t k
    if z.real * z.real + z.imag * z.imag <= 1.0:
        p = c[n]
        dp = 0
        for k in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        return p / dp
    y = 1.0 / z
    p = c[0]
    dp = 0
    for k in range(1, n + 1):
        dp = dp * y + p
        p = p * y + c[k]
    # p(z) = z^n rp(y),  p'(z) = z^(n-1) (n rp(y) - y rp'(y))
    return z * p / (n * p - y * dp)


cdef inline bint _at_noise_level(const double complex[:] c, Py_ssize_t n, double complex z) noexcept nogil:
    # |p(z)| within rounding error of sum |c_k| |z|^k (reversed form when |z| > 1)
    cdef double complex p, x
    cdef double a, ax
    cdef Py_ssize_t k
    if z.real * z.real + z.imag * z.imag <= 1.0:
        x = z
        p = c[n]
        a = _abs(c[n])
        ax = _abs(x)
        for k in range(n - 1, -1, -1):
            p = p * x + c[k]
            a = a * ax + _abs(c[k])
    else:
        x = 1.0 / z
        p = c[0]
        a = _abs(c[0])
        ax = _abs(x)
        for k in range(1, n + 1):
            p = p * x + c[k]
            a = a * ax + _abs(c[k])
    return _abs(p) <= 4.0 * n * 2.220446049250313e-16 * a


def aberth(cnp.ndarray[cnp.complex128_t, ndim=1] coeffs,
           cnp.ndarray[cnp.complex128_t, ndim=1] z0,
           int max_iter=500, double tol=1e-14):
    """Gauss-Seidel Aberth-Ehrlich iteration; coeffs in ascending order.

    A root stops moving once its correction is below tol or its residual is
    at rounding level (the latter is what ends the iteration at multiple roots).
    """
    cdef const double complex[:] c = coeffs
    cdef Py_ssize_t n = coeffs.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zs = z0.copy()
    cdef double complex[:] z = zs
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] frozen_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[:] frozen = frozen_arr
    cdef Py_ssize_t i, j, it
    cdef double complex ratio, s, w, diff
    cdef bint done
    cdef double az
    with nogil:
        for it in range(max_iter):
            done = True
            for i in range(n):
                if frozen[i]:
                    continue
                if _at_noise_level(c, n, z[i]):
                    frozen[i] = 1
                    continue
                ratio = _newton_ratio(c, n, z[i])
                s = 0
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        s = s + 1.0 / diff
                w = ratio / (1.0 - ratio * s)
                z[i] = z[i] - w
                az = fabs(z[i].real) + fabs(z[i].imag)
                if fabs(w.real) + fabs(w.imag) > tol * (az if az > 1e-300 else 1.0):
                    done = False
                else:
                    frozen[i] = 1
            if done:
                break
    return zs, it + 1, bool(done)


def winding_sum(cnp.ndarray[cnp.complex128_t, ndim=1] coeffs, double radius, int n_points):
    """Total argument increment of p around |z| = radius, largest single step, min |p|."""
    cdef const double complex[:] c = coeffs
    cdef Py_ssize_t n = coeffs.shape[0] - 1
    cdef Py_ssize_t m = n_points + 1
    cdef Py_ssize_t j, k
    # Horner over all points at once, real and imaginary parts split
    cdef double[::1] zr = np.empty(m), zi = np.empty(m)
    cdef double[::1] pr = np.empty(m), pi = np.empty(m)
    cdef double total = 0, biggest = 0, least = 1e308, step, theta, a, cr, ci, tr, qr, qi
    with nogil:
        for j in range(m):
            theta = 2 * M_PI * j / n_points
            zr[j] = radius * _cos(theta)
            zi[j] = radius * _sin(theta)
            pr[j] = c[n].real
            pi[j] = c[n].imag
        for k in range(n - 1, -1, -1):
            cr = c[k].real
            ci = c[k].imag
            for j in range(m):
                tr = pr[j] * zr[j] - pi[j] * zi[j] + cr
                pi[j] = pr[j] * zi[j] + pi[j] * zr[j] + ci
                pr[j] = tr
        for j in range(m):
            a = hypot(pr[j], pi[j])
            if a < least:
                least = a
            if j > 0:
                # arg(p_j / p_{j-1}) = atan2(Im(p_j conj p_{j-1}), Re(p_j conj p_{j-1}))
                qr = pr[j] * pr[j - 1] + pi[j] * pi[j - 1]
                qi = pi[j] * pr[j - 1] - pr[j] * pi[j - 1]
                step = atan2(qi, qr)
                total += step
                if fabs(step) > biggest:
                    biggest = fabs(step)
    return total, biggest, least
