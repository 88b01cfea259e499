"""Alice/Bob/Eve session machinery.

Random bit and basis generation, transmission through the channel model,
threshold decisions, public-channel basis sifting, empirical BER estimation
with Wilson intervals, and two illustrative correlation-degrading attacks.

Determinism contract: run_session consumes its random generator in a fixed,
documented order of whole-array draws, so a given (seed, configuration) pair
always reproduces the same transcript regardless of kernel backend:

    1. alice bits        integers(0, 2, size=n, dtype=uint8)
    2. alice bases       integers(0, 2, size=n, dtype=uint8)
    3. bob bases         integers(0, 2, size=n, dtype=uint8)
    4. eve bases         integers(0, 2, size=n, dtype=uint8)   (intercept-resend only)
    5. eve normals       standard_normal(n)                    (intercept-resend only)
    6. bob normals       standard_normal(n)
"""

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from . import _backend
from .channel import (
    Basis,
    DetectionParams,
    EncodingParams,
    PulseRecord,
    SourceKind,
    SourceModel,
    effective_sigma,
)
from .errors import DomainError, InsufficientDataError, ProtocolError
from .stats import DecisionPolicy

# 97.5% standard-normal quantile used by the 95% Wilson score interval.
_WILSON_Z = 1.959963984540054


class Decision(IntEnum):
    ZERO = 0
    ONE = 1
    INCONCLUSIVE = 2


class AttackKind(Enum):
    NONE = "none"
    INTERCEPT_RESEND = "intercept_resend"
    BEAMSPLITTER_TAP = "beamsplitter_tap"


class TimingMode(Enum):
    PULSE = "pulse"
    CONTINUOUS_INTERVALS = "continuous"


@dataclass(frozen=True)
class MeasurementRecord:
    """Bob's record for one symbol: basis choice, sampled difference, decision."""

    index: int
    bob_basis: Basis
    n_sample: float
    decision: Decision


@dataclass(frozen=True)
class AttackModel:
    kind: AttackKind = AttackKind.NONE
    tap_fraction: float | None = None

    def __post_init__(self):
        if self.kind is AttackKind.BEAMSPLITTER_TAP:
            if self.tap_fraction is None or not (
                math.isfinite(self.tap_fraction) and 0.0 <= self.tap_fraction <= 1.0
            ):
                raise DomainError("tap_fraction must lie in [0, 1] for a beam-splitter tap")
        elif self.tap_fraction is not None:
            raise DomainError("tap_fraction is only meaningful for a beam-splitter tap")


@dataclass(frozen=True)
class TimingConfig:
    mode: TimingMode = TimingMode.PULSE
    interval_duration: float | None = None

    def __post_init__(self):
        if self.mode is TimingMode.CONTINUOUS_INTERVALS:
            if self.interval_duration is None or not (
                math.isfinite(self.interval_duration) and self.interval_duration > 0.0
            ):
                raise DomainError("continuous-interval timing needs interval_duration > 0")
        elif self.interval_duration is not None:
            raise DomainError("interval_duration is only meaningful in continuous mode")


NO_ATTACK = AttackModel()
PULSE_TIMING = TimingConfig()


@dataclass
class SiftedKey:
    """Matched-basis subsequence after public basis comparison."""

    positions: list[int]
    alice_bits: list[int]
    bob_decisions: list[Decision]
    inconclusive_count: int = field(default=-1)

    def __post_init__(self):
        if not (len(self.positions) == len(self.alice_bits) == len(self.bob_decisions)):
            raise ProtocolError("sifted lists must share one length")
        n_inc = sum(1 for d in self.bob_decisions if d is Decision.INCONCLUSIVE)
        if self.inconclusive_count < 0:
            self.inconclusive_count = n_inc
        elif self.inconclusive_count != n_inc:
            raise ProtocolError("inconclusive_count disagrees with the decision list")


@dataclass(frozen=True)
class BerEstimate:
    ber: float
    postselection_rate: float
    wilson_interval: tuple[float, float]
    n_conclusive: int
    n_errors: int


def _generate_arrays(length: int, rng) -> tuple[np.ndarray, np.ndarray]:
    bits = rng.integers(0, 2, size=length, dtype=np.uint8)
    bases = rng.integers(0, 2, size=length, dtype=np.uint8)
    return bits, bases


def alice_generate(length: int, rng) -> list[tuple[int, Basis]]:
    """Independent uniform key bits and basis choices, deterministic under seed."""
    if length <= 0:
        raise DomainError("length must be >= 1")
    bits, bases = _generate_arrays(length, rng)
    return [(int(b), Basis(int(v))) for b, v in zip(bits, bases)]


def decide(n_sample: float, policy: DecisionPolicy) -> Decision:
    """Map a sample to 1 / 0 / inconclusive; the boundary values +-threshold
    count as inconclusive (strict inequalities on both conclusive branches)."""
    if n_sample > policy.threshold:
        return Decision.ONE
    if n_sample < -policy.threshold:
        return Decision.ZERO
    return Decision.INCONCLUSIVE


_PERFECT_DETECTOR = DetectionParams(1.0)


def apply_attack(
    pulse: PulseRecord, attack: AttackModel, source: SourceModel, rng
) -> tuple[PulseRecord, SourceModel]:
    """Transform one in-flight pulse according to the eavesdropping model.

    Intercept-resend: Eve measures in a uniformly random basis with a perfect
    detector, infers the bit from the sign of her sample, and re-emits a
    coherent pulse carrying her bit in her basis; the resent light has no
    twin-beam correlation left.  Beam-splitter tap: a fraction of the power is
    diverted, scaling the transmitted means by (1 - f) and degrading the
    measured correlation exactly as if the detector efficiency were scaled by
    (1 - f).  Consumes randomness only for intercept-resend (one basis draw,
    one normal draw).
    """
    if attack.kind is AttackKind.NONE:
        return pulse, source

    if attack.kind is AttackKind.INTERCEPT_RESEND:
        eve_basis = Basis(int(rng.integers(0, 2)))
        match = eve_basis == pulse.alice_basis
        mu = pulse.mean_diff if match else 0.0
        sigma = effective_sigma(source, match, _PERFECT_DETECTOR)
        sample = mu + sigma * rng.standard_normal()
        eve_bit = 1 if sample > 0.0 else 0
        n = abs(pulse.mean_diff)
        resent = PulseRecord(eve_bit, eve_basis, n if eve_bit == 1 else -n)
        coherent = SourceModel(SourceKind.COHERENT, source.mean_photons_per_mode, 0.0)
        return resent, coherent

    f = attack.tap_fraction
    if f == 0.0:
        return pulse, source
    if f == 1.0:
        raise DomainError("tap_fraction = 1 leaves no transmitted light to measure")
    power = 1.0 - f
    mean = pulse.mean_diff * power
    tapped_pulse = PulseRecord(pulse.alice_bit, pulse.alice_basis, mean)
    if source.kind is SourceKind.COHERENT:
        tapped_source = SourceModel(SourceKind.COHERENT, source.mean_photons_per_mode * power, 0.0)
    else:
        r = 10.0 ** (source.correlation_db / 10.0)
        r_tapped = 1.0 - power * (1.0 - r)
        tapped_source = SourceModel(
            SourceKind.TWIN_BEAM,
            source.mean_photons_per_mode * power,
            10.0 * math.log10(r_tapped),
        )
    return tapped_pulse, tapped_source


def run_session(
    length: int,
    source: SourceModel,
    enc: EncodingParams,
    det: DetectionParams,
    policy: DecisionPolicy,
    attack: AttackModel = NO_ATTACK,
    timing: TimingConfig = PULSE_TIMING,
    rng=None,
    calibration_factor: float = 1.0,
) -> tuple[list[PulseRecord], list[MeasurementRecord]]:
    """Simulate one full transmission session.

    Per index: Alice encodes a random bit in a random basis, the optional
    attack transforms the in-flight pulse, Bob measures in his own random
    basis and applies the threshold decision.  Fully deterministic under the
    generator's seed (see the module docstring for the draw order).  The
    returned pulses are Alice's originals, untouched by any attack.
    """
    if length <= 0:
        raise DomainError("session length must be >= 1")
    if rng is None:
        raise DomainError("run_session needs a seeded random generator")

    bits, abasis = _generate_arrays(length, rng)
    bbasis = rng.integers(0, 2, size=length, dtype=np.uint8)

    n_enc = enc.attenuation_fraction * source.mean_photons_per_mode
    signed_mean = np.where(bits == 1, n_enc, -n_enc)

    if attack.kind is AttackKind.INTERCEPT_RESEND:
        ebasis = rng.integers(0, 2, size=length, dtype=np.uint8)
        ez = rng.standard_normal(length)
        ematch = ebasis == abasis
        emu = np.where(ematch, signed_mean, 0.0)
        esig = np.where(
            ematch,
            effective_sigma(source, True, _PERFECT_DETECTOR),
            effective_sigma(source, False, _PERFECT_DETECTOR),
        )
        eve_bits = (emu + esig * ez) > 0.0
        flight_basis = ebasis
        flight_mean = np.where(eve_bits, n_enc, -n_enc)
        resent = SourceModel(SourceKind.COHERENT, source.mean_photons_per_mode, 0.0)
        sig_match = effective_sigma(resent, True, det, calibration_factor)
        sig_mismatch = effective_sigma(resent, False, det, calibration_factor)
    elif attack.kind is AttackKind.BEAMSPLITTER_TAP and attack.tap_fraction != 0.0:
        template = PulseRecord(1, Basis.VH, n_enc)
        _, tapped_source = apply_attack(template, attack, source, rng)
        flight_basis = abasis
        flight_mean = signed_mean * (1.0 - attack.tap_fraction)
        sig_match = effective_sigma(tapped_source, True, det, calibration_factor)
        sig_mismatch = effective_sigma(tapped_source, False, det, calibration_factor)
    else:
        flight_basis = abasis
        flight_mean = signed_mean
        sig_match = effective_sigma(source, True, det, calibration_factor)
        sig_mismatch = effective_sigma(source, False, det, calibration_factor)

    bz = rng.standard_normal(length)
    basis_match = bbasis == flight_basis
    mu = np.where(basis_match, flight_mean, 0.0)
    sigma = np.where(basis_match, sig_match, sig_mismatch)
    samples, codes = _backend.sample_and_decide(mu, sigma, bz, policy.threshold)

    pulses = [
        PulseRecord(int(b), Basis(int(a)), float(m))
        for b, a, m in zip(bits, abasis, signed_mean)
    ]
    measurements = [
        MeasurementRecord(i, Basis(int(v)), float(s), Decision(int(c)))
        for i, (v, s, c) in enumerate(zip(bbasis, samples, codes))
    ]
    return pulses, measurements


def sift(
    alice: list[tuple[int, Basis]], bob: list[MeasurementRecord]
) -> SiftedKey:
    """Keep exactly the indices where the two basis choices matched.

    Pure filter: samples and decisions pass through untouched.
    """
    if len(alice) != len(bob):
        raise ProtocolError(
            f"alice has {len(alice)} records but bob has {len(bob)}"
        )
    positions = []
    bits = []
    decisions = []
    for i, ((bit, basis), record) in enumerate(zip(alice, bob)):
        if basis == record.bob_basis:
            positions.append(i)
            bits.append(bit)
            decisions.append(record.decision)
    return SiftedKey(positions, bits, decisions)


def wilson_interval(successes: int, trials: int, z: float = _WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise DomainError("wilson_interval needs at least one trial")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def estimate_ber(sifted: SiftedKey) -> BerEstimate:
    """Empirical BER over conclusive decisions, with its 95% Wilson interval.

    Wilson is used rather than the normal approximation because the BER of a
    good channel sits close to zero, where the Wald interval collapses.
    """
    n_conclusive = 0
    n_errors = 0
    for bit, d in zip(sifted.alice_bits, sifted.bob_decisions):
        if d is Decision.INCONCLUSIVE:
            continue
        n_conclusive += 1
        if d != bit:
            n_errors += 1
    if n_conclusive == 0:
        raise InsufficientDataError("no conclusive decisions to estimate a BER from")
    return BerEstimate(
        ber=n_errors / n_conclusive,
        postselection_rate=n_conclusive / len(sifted.positions),
        wilson_interval=wilson_interval(n_errors, n_conclusive),
        n_conclusive=n_conclusive,
        n_errors=n_errors,
    )


def time_label(timing: TimingConfig, index: int) -> float | int:
    """Bookkeeping label of a symbol: the pulse index, or the interval start
    time index * interval_duration in continuous mode."""
    if timing.mode is TimingMode.CONTINUOUS_INTERVALS:
        return index * timing.interval_duration
    return index
