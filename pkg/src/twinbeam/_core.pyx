# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot paths: erfc, session sampling, histogram binning.

Mirrors ``twinbeam._core_py`` operation for operation; the two modules must
stay bit-identical (enforced by tests/test_backends.py).
"""

from libc.math cimport exp, fabs, floor

import numpy as np

BACKEND = "compiled"

cdef double _THRESHOLD = 0.46875
cdef double _XSMALL = 1.11e-16
cdef double _XHUGE = 26.543
cdef double _INV_SQRT_PI = 5.6418958354775628695e-1

cdef double[5] _ERF_A = [
    3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
    3.20937758913846947e03, 1.85777706184603153e-1]
cdef double[4] _ERF_B = [
    2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
    2.84423683343917062e03]
cdef double[9] _ERFC_C = [
    5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
    2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
    2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8]
cdef double[8] _ERFC_D = [
    1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
    1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
    3.43936767414372164e03, 1.23033935480374942e03]
cdef double[6] _ERFC_P = [
    3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
    1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2]
cdef double[5] _ERFC_Q = [
    2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
    6.05183413124413191e-2, 2.33520497626869185e-3]


cdef double _erfc(double x) noexcept nogil:
    cdef double y = fabs(x)
    cdef double z, num, den, result, ysq, dely
    cdef int i
    if y <= _THRESHOLD:
        z = y * y if y > _XSMALL else 0.0
        num = _ERF_A[4] * z
        den = z
        for i in range(3):
            num = (num + _ERF_A[i]) * z
            den = (den + _ERF_B[i]) * z
        return 1.0 - x * (num + _ERF_A[3]) / (den + _ERF_B[3])
    if y <= 4.0:
        num = _ERFC_C[8] * y
        den = y
        for i in range(7):
            num = (num + _ERFC_C[i]) * y
            den = (den + _ERFC_D[i]) * y
        result = (num + _ERFC_C[7]) / (den + _ERFC_D[7])
    else:
        if y >= _XHUGE:
            return 2.0 if x < 0.0 else 0.0
        z = 1.0 / (y * y)
        num = _ERFC_P[5] * z
        den = z
        for i in range(4):
            num = (num + _ERFC_P[i]) * z
            den = (den + _ERFC_Q[i]) * z
        result = z * (num + _ERFC_P[4]) / (den + _ERFC_Q[4])
        result = (_INV_SQRT_PI - result) / y
    ysq = floor(y * 16.0) / 16.0
    dely = (y - ysq) * (y + ysq)
    result = exp(-ysq * ysq) * exp(-dely) * result
    if x < 0.0:
        result = 2.0 - result
    return result


def erfc(double x):
    """Complementary error function of a finite double."""
    return _erfc(x)


def erfc_many(double[::1] xs):
    """Elementwise erfc over a contiguous float64 array."""
    cdef Py_ssize_t n = xs.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _erfc(xs[i])
    return out


def sample_and_decide(double[::1] mu, double[::1] sigma, double[::1] z,
                      double threshold):
    """Turn standard-normal draws into difference samples and threshold decisions."""
    cdef Py_ssize_t n = mu.shape[0]
    samples = np.empty(n)
    decisions = np.empty(n, dtype=np.int8)
    cdef double[::1] s = samples
    cdef signed char[::1] d = decisions
    cdef double neg = -threshold
    cdef double v
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            v = mu[i] + sigma[i] * z[i]
            s[i] = v
            if v > threshold:
                d[i] = 1
            elif v < neg:
                d[i] = 0
            else:
                d[i] = 2
    return samples, decisions


def bin_counts(double[::1] xs, double lo, double width, Py_ssize_t nbins,
               double hi):
    """Count samples into nbins equal-width bins over [lo, hi] (last bin closed)."""
    counts = np.zeros(nbins, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t below = 0, above = 0, k, i
    cdef double v
    with nogil:
        for i in range(n):
            v = xs[i]
            if v < lo:
                below += 1
            elif v > hi:
                above += 1
            else:
                k = <Py_ssize_t>floor((v - lo) / width)
                if k > nbins - 1:
                    k = nbins - 1
                c[k] += 1
    return counts, below, above
