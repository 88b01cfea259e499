"""Generative model of the optical channel.

Covers the source statistics (twin-beam or coherent), the small attenuation
that encodes a bit as a mean photoelectron difference of +-N, the basis match
between sender and receiver, detector efficiency, and Gaussian sampling of
the measured difference.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class SourceKind(Enum):
    TWIN_BEAM = "twin"
    COHERENT = "coherent"


class Basis(Enum):
    """The two polarization mode pairs a symbol can be encoded in."""

    VH = 0
    DIAG45 = 1


@dataclass(frozen=True)
class SourceModel:
    """Statistical description of the light source.

    mean_photons_per_mode is the per-detector mean photoelectron number;
    correlation_db is the difference-noise variance relative to the shot-noise
    limit in dB (negative for twin beams, 0 for coherent light).
    """

    kind: SourceKind
    mean_photons_per_mode: float
    correlation_db: float = 0.0

    def __post_init__(self):
        if not (
            math.isfinite(self.mean_photons_per_mode)
            and self.mean_photons_per_mode > 0.0
        ):
            raise DomainError("SourceModel.mean_photons_per_mode must be > 0")
        if not math.isfinite(self.correlation_db):
            raise DomainError("SourceModel.correlation_db must be finite")
        if self.kind is SourceKind.COHERENT and self.correlation_db != 0.0:
            raise DomainError("coherent sources must have correlation_db = 0")
        if self.kind is SourceKind.TWIN_BEAM and self.correlation_db >= 0.0:
            raise DomainError("twin-beam sources must have correlation_db < 0")


@dataclass(frozen=True)
class EncodingParams:
    """Single-arm attenuation fraction; the encoded mean difference is
    N = attenuation_fraction * mean_photons_per_mode."""

    attenuation_fraction: float

    def __post_init__(self):
        if not (
            math.isfinite(self.attenuation_fraction)
            and 0.0 <= self.attenuation_fraction <= 0.01
        ):
            raise DomainError("EncodingParams.attenuation_fraction must lie in [0, 0.01]")


@dataclass(frozen=True)
class DetectionParams:
    quantum_efficiency: float

    def __post_init__(self):
        if not (
            math.isfinite(self.quantum_efficiency)
            and 0.0 < self.quantum_efficiency <= 1.0
        ):
            raise DomainError("DetectionParams.quantum_efficiency must lie in (0, 1]")


@dataclass(frozen=True)
class PulseRecord:
    """One transmitted symbol: the key bit, its basis, and the encoded mean."""

    alice_bit: int
    alice_basis: Basis
    mean_diff: float

    def __post_init__(self):
        if self.alice_bit not in (0, 1):
            raise DomainError("PulseRecord.alice_bit must be 0 or 1")
        if not math.isfinite(self.mean_diff):
            raise DomainError("PulseRecord.mean_diff must be finite")
        if self.alice_bit == 1 and self.mean_diff < 0.0:
            raise DomainError("bit 1 must carry a non-negative mean difference")
        if self.alice_bit == 0 and self.mean_diff > 0.0:
            raise DomainError("bit 0 must carry a non-positive mean difference")


def shot_noise_sigma(source: SourceModel) -> float:
    """Coherent-state standard deviation of the photoelectron difference,
    sqrt(2 * mean_photons_per_mode)."""
    return math.sqrt(2.0 * source.mean_photons_per_mode)


def effective_sigma(
    source: SourceModel,
    basis_match: bool,
    det: DetectionParams,
    calibration_factor: float = 1.0,
) -> float:
    """Standard deviation of the measured difference in one condition.

    A matched-basis twin-beam measurement sees the sub-shot-noise variance
    ratio r_meas = 1 - eta * (1 - r_source) with r_source = 10^(dB/10);
    detector inefficiency mixes in vacuum noise and drags r_meas back toward
    one.  A mismatched basis mixes the two modes at 45 degrees, which erases
    the correlation entirely, so coherent sources and wrong-basis conditions
    sit exactly at the (calibrated) shot-noise limit.
    """
    if not (math.isfinite(calibration_factor) and calibration_factor > 0.0):
        raise DomainError("calibration_factor must be finite and > 0")
    snl = calibration_factor * shot_noise_sigma(source)
    if source.kind is SourceKind.COHERENT or not basis_match:
        return snl
    r_source = 10.0 ** (source.correlation_db / 10.0)
    r_meas = 1.0 - det.quantum_efficiency * (1.0 - r_source)
    return snl * math.sqrt(r_meas)


def encode_pulse(
    bit: int, basis: Basis, enc: EncodingParams, source: SourceModel
) -> PulseRecord:
    """Encode a bit as a mean difference of +N (bit 1) or -N (bit 0)."""
    if bit not in (0, 1):
        raise DomainError("bit must be 0 or 1")
    n = enc.attenuation_fraction * source.mean_photons_per_mode
    return PulseRecord(bit, basis, n if bit == 1 else -n)


def measure_difference(
    pulse: PulseRecord,
    bob_basis: Basis,
    source: SourceModel,
    det: DetectionParams,
    rng,
    calibration_factor: float = 1.0,
    sigma_override: float | None = None,
) -> float:
    """Draw one photoelectron-difference sample for the receiver.

    The sample is mu + sigma * z with z standard normal from rng, mu equal to
    the encoded mean when the bases match and 0 otherwise, and sigma from
    effective_sigma.  sigma_override is a test hook; 0 returns exactly mu
    while still consuming one draw, keeping the stream aligned.
    """
    match = bob_basis == pulse.alice_basis
    mu = pulse.mean_diff if match else 0.0
    if sigma_override is not None:
        if not (math.isfinite(sigma_override) and sigma_override >= 0.0):
            raise DomainError("sigma_override must be finite and >= 0")
        sigma = sigma_override
    else:
        sigma = effective_sigma(source, match, det, calibration_factor)
    z = rng.standard_normal()
    return mu + sigma * z
