"""Pure-Python kernels: fallback used when the compiled extension is unavailable.

The compiled module ``twinbeam._core`` implements the same four functions with
the same argument conventions, and both are required to produce bit-identical
output for identical input arrays (the test suite enforces this).  Keep the
arithmetic here in exact lockstep with ``_core.pyx``: same operation order, no
re-association, libm ``exp``/``floor`` only.
"""

import math

import numpy as np

BACKEND = "python"

# Rational minimax coefficients for the complementary error function
# (Cody-style three-interval scheme, absolute error well below 1e-15).
_ERF_A = (
    3.16112374387056560e00,
    1.13864154151050156e02,
    3.77485237685302021e02,
    3.20937758913846947e03,
    1.85777706184603153e-1,
)
_ERF_B = (
    2.36012909523441209e01,
    2.44024637934444173e02,
    1.28261652607737228e03,
    2.84423683343917062e03,
)
_ERFC_C = (
    5.64188496988670089e-1,
    8.88314979438837594e00,
    6.61191906371416295e01,
    2.98635138197400131e02,
    8.81952221241769090e02,
    1.71204761263407058e03,
    2.05107837782607147e03,
    1.23033935479799725e03,
    2.15311535474403846e-8,
)
_ERFC_D = (
    1.57449261107098347e01,
    1.17693950891312499e02,
    5.37181101862009858e02,
    1.62138957456669019e03,
    3.29079923573345963e03,
    4.36261909014324716e03,
    3.43936767414372164e03,
    1.23033935480374942e03,
)
_ERFC_P = (
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
)
_ERFC_Q = (
    2.56852019228982242e00,
    1.87295284992346047e00,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
)
_INV_SQRT_PI = 5.6418958354775628695e-1
_THRESHOLD = 0.46875
_XSMALL = 1.11e-16
_XHUGE = 26.543  # erfc underflows to zero beyond this point


def erfc(x: float) -> float:
    """Complementary error function of a finite double."""
    y = abs(x)
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
    # Split y*y as ysq*ysq + del with ysq on a 1/16 grid so that exp keeps
    # full relative accuracy in the tail.
    ysq = math.floor(y * 16.0) / 16.0
    dely = (y - ysq) * (y + ysq)
    result = math.exp(-ysq * ysq) * math.exp(-dely) * result
    if x < 0.0:
        result = 2.0 - result
    return result


def erfc_many(xs: np.ndarray) -> np.ndarray:
    """Elementwise erfc over a contiguous float64 array."""
    out = np.empty(xs.shape[0])
    f = erfc
    for i, v in enumerate(xs):
        out[i] = f(v)
    return out


def sample_and_decide(mu, sigma, z, threshold):
    """Turn standard-normal draws into difference samples and threshold decisions.

    samples[i] = mu[i] + sigma[i] * z[i]; decision codes are 1 (above the
    threshold), 0 (below its negative), 2 (inside the dead band, inclusive).
    """
    samples = mu + sigma * z
    decisions = np.full(samples.shape, 2, dtype=np.int8)
    decisions[samples > threshold] = 1
    decisions[samples < -threshold] = 0
    return samples, decisions


def bin_counts(xs, lo, width, nbins, hi):
    """Count samples into nbins equal-width bins over [lo, hi].

    Bin k covers [lo + k*width, lo + (k+1)*width); the final bin is closed at
    hi.  Samples outside [lo, hi] are tallied separately and returned as
    (below, above).
    """
    below_mask = xs < lo
    above_mask = xs > hi
    inside = ~(below_mask | above_mask)
    k = np.floor((xs[inside] - lo) / width).astype(np.int64)
    np.minimum(k, nbins - 1, out=k)
    counts = np.bincount(k, minlength=nbins).astype(np.int64)
    return counts, int(np.count_nonzero(below_mask)), int(np.count_nonzero(above_mask))
