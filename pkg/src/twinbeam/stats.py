"""Closed-form statistics of the threshold-decision difference channel.

The photoelectron difference measured in one (source, basis) condition is
modeled as an equal-weight two-component Gaussian mixture: one component per
key bit, centered at +mean_diff and -mean_diff, both with standard deviation
sigma.  Each component carries weight 1/2 so the density integrates to one.
From that density follow the acceptance probability of a symmetric dead-band
threshold (postselection efficiency) and the error rate of the surviving
decisions (BER), both expressible through erfc.
"""

import math
from dataclasses import dataclass

from . import _backend
from .errors import DegeneratePolicyError, DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianModel:
    """Difference distribution of one condition: component center and spread.

    mean_diff is the encoded mean photoelectron difference (+N, -N, or 0 for a
    mismatched basis); sigma is the standard deviation of the difference.
    """

    mean_diff: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mean_diff):
            raise DomainError("GaussianModel.mean_diff must be finite")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError("GaussianModel.sigma must be finite and > 0")


@dataclass(frozen=True)
class DecisionPolicy:
    """Symmetric dead-band decision rule: conclusive only beyond +-threshold."""

    threshold: float

    def __post_init__(self):
        if not (math.isfinite(self.threshold) and self.threshold >= 0.0):
            raise DomainError("DecisionPolicy.threshold must be finite and >= 0")


def erfc(z: float) -> float:
    """Complementary error function, (2/sqrt(pi)) * integral of exp(-t^2) from z."""
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("erfc requires a finite argument")
    return _backend.erfc(z)


def mixture_pdf(n: float, model: GaussianModel) -> float:
    """Density of the two-component difference mixture at n."""
    n = float(n)
    if not math.isfinite(n):
        raise DomainError("mixture_pdf requires a finite sample value")
    a = (n - model.mean_diff) / model.sigma
    b = (n + model.mean_diff) / model.sigma
    return 0.5 * (math.exp(-0.5 * a * a) + math.exp(-0.5 * b * b)) / (
        model.sigma * _SQRT_TWO_PI
    )


def postselection_efficiency(policy: DecisionPolicy, model: GaussianModel) -> float:
    """Probability that a correct-basis sample falls outside the dead band.

    Equal to (erfc((t - m)/(sqrt(2) s)) + erfc((t + m)/(sqrt(2) s))) / 2 for
    threshold t, center m, spread s.  A zero threshold discards nothing, so
    the value is exactly 1 there (erfc(-x) + erfc(x) == 2).
    """
    if policy.threshold == 0.0:
        return 1.0
    scale = _SQRT2 * model.sigma
    a = (policy.threshold - model.mean_diff) / scale
    b = (policy.threshold + model.mean_diff) / scale
    return 0.5 * erfc(a) + 0.5 * erfc(b)


def ber(policy: DecisionPolicy, model: GaussianModel) -> float:
    """Error probability of a conclusive correct-basis decision.

    erfc((t + m)/(sqrt(2) s)) / (2 P) with P the postselection efficiency;
    lies in [0, 1/2] for m >= 0 and equals exactly 1/2 at m = 0.
    """
    p = postselection_efficiency(policy, model)
    if p <= 0.0:
        raise DegeneratePolicyError(
            f"threshold {policy.threshold} accepts no samples for this model"
        )
    b = (policy.threshold + model.mean_diff) / (_SQRT2 * model.sigma)
    return erfc(b) / (2.0 * p)


def db_from_sigma_ratio(sigma_a: float, sigma_b: float) -> float:
    """Variance ratio of a relative to b, in decibels: 10 log10(sa^2 / sb^2)."""
    sigma_a = float(sigma_a)
    sigma_b = float(sigma_b)
    if not (math.isfinite(sigma_a) and sigma_a > 0.0):
        raise DomainError("sigma_a must be finite and > 0")
    if not (math.isfinite(sigma_b) and sigma_b > 0.0):
        raise DomainError("sigma_b must be finite and > 0")
    r = sigma_a / sigma_b
    return 10.0 * math.log10(r * r)
