"""Kernel backend selection.

Imports the compiled extension ``twinbeam._core`` when it is available and
falls back to the pure-Python ``twinbeam._core_py`` otherwise.  Set the
environment variable ``TWINBEAM_BACKEND`` to ``compiled`` or ``python`` to
force one side (used by the benchmark and the cross-backend tests).  Both
backends produce bit-identical results for identical inputs.
"""

import os

import numpy as np

_requested = os.environ.get("TWINBEAM_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _core as _impl
    except ImportError:
        from . import _core_py as _impl
elif _requested == "compiled":
    from . import _core as _impl
elif _requested in ("python", "pure"):
    from . import _core_py as _impl
else:
    raise ImportError(
        f"TWINBEAM_BACKEND={_requested!r} not recognized; "
        "use 'auto', 'compiled' or 'python'"
    )

BACKEND = _impl.BACKEND


def _as_f8(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def erfc(x: float) -> float:
    return _impl.erfc(float(x))


def erfc_many(xs) -> np.ndarray:
    return _impl.erfc_many(_as_f8(xs))


def sample_and_decide(mu, sigma, z, threshold: float):
    mu = _as_f8(mu)
    sigma = _as_f8(sigma)
    z = _as_f8(z)
    if not (mu.shape == sigma.shape == z.shape):
        raise ValueError("mu, sigma and z must have identical shapes")
    return _impl.sample_and_decide(mu, sigma, z, float(threshold))


def bin_counts(xs, lo: float, width: float, nbins: int, hi: float):
    return _impl.bin_counts(_as_f8(xs), float(lo), float(width), int(nbins), float(hi))
