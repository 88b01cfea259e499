"""Independent numerical oracles used by the test suite.

Everything here is deliberately naive: adaptive Simpson quadrature over the
defining integrals, with no shared code or coefficients with the package
implementations.  These oracles define the expected values the closed forms
are checked against.
"""

import math

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_INV_SQRT_TWO_PI = 1.0 / math.sqrt(2.0 * math.pi)


def adaptive_simpson(f, a, b, tol=1e-12, max_depth=50):
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance."""

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, xm, f0, fl, f1, left, tol / 2.0, depth + 1) + recurse(
            xm, x2, f1, fr, f2, right, tol / 2.0, depth + 1
        )

    if a == b:
        return 0.0
    fa = f(a)
    fm = f(0.5 * (a + b))
    fb = f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def erfc_quad(z, tol=1e-13):
    """erfc by quadrature of (2/sqrt(pi)) exp(-t^2) from z out to 10.

    The neglected tail beyond t = 10 is below 1e-44, far under every
    tolerance used in the tests.
    """
    if z >= 10.0:
        return 0.0
    return _TWO_OVER_SQRT_PI * adaptive_simpson(lambda t: math.exp(-t * t), z, 10.0, tol)


def normal_component(n, mean, sigma):
    """Unit-weight Gaussian density."""
    u = (n - mean) / sigma
    return _INV_SQRT_TWO_PI * math.exp(-0.5 * u * u) / sigma


def mixture_density(n, mean, sigma):
    """Equal-weight two-component mixture density at n."""
    return 0.5 * (normal_component(n, mean, sigma) + normal_component(n, -mean, sigma))


def mixture_integral(mean, sigma, tol=1e-10):
    """Total mass of the mixture density over its effective support."""
    span = abs(mean) + 12.0 * sigma
    return adaptive_simpson(lambda n: mixture_density(n, mean, sigma), -span, span, tol)


def efficiency_quad(threshold, mean, sigma, tol=1e-12):
    """Acceptance probability by quadrature: mixture mass outside [-t, t]."""
    span = abs(mean) + 14.0 * sigma
    hi = max(span, threshold + sigma)
    f = lambda n: mixture_density(n, mean, sigma)
    upper = adaptive_simpson(f, threshold, hi, tol)
    lower = adaptive_simpson(f, -hi, -threshold, tol)
    return upper + lower


def ber_quad(threshold, mean, sigma, tol=1e-12):
    """Error probability by quadrature.

    Error mass: the half-weighted +mean component landing below -threshold
    plus the half-weighted -mean component landing above +threshold
    (symmetric contributions).  Divided by the total accepted mass.
    """
    lo = mean - 16.0 * sigma
    if lo >= -threshold:
        numerator = 0.0
    else:
        numerator = 2.0 * 0.5 * adaptive_simpson(
            lambda n: normal_component(n, mean, sigma), lo, -threshold, tol
        )
    return numerator / efficiency_quad(threshold, mean, sigma, tol)
