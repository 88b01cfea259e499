"""Run configuration: a small INI file with one section per parameter group.

See FORMATS.md at the repository root for the frozen field names.  Every
parse or validation failure raises ConfigError naming the offending field as
section.option.
"""

import configparser
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .channel import (
    Basis,
    DetectionParams,
    EncodingParams,
    SourceKind,
    SourceModel,
)
from .errors import ConfigError, DomainError
from .protocol import AttackKind, AttackModel, TimingConfig, TimingMode
from .stats import DecisionPolicy

_SECTIONS = {
    "run": {"seed", "session_length", "calibration_factor"},
    "source": {"kind", "mean_photons_per_mode", "correlation_db"},
    "encoding": {"attenuation_fraction"},
    "detection": {"quantum_efficiency"},
    "policy": {"threshold"},
    "attack": {"kind", "tap_fraction"},
    "timing": {"mode", "interval_duration"},
}
_REQUIRED_SECTIONS = ("run", "source", "encoding", "detection", "policy")

_SOURCE_KINDS = {"twin": SourceKind.TWIN_BEAM, "coherent": SourceKind.COHERENT}
_ATTACK_KINDS = {
    "none": AttackKind.NONE,
    "intercept_resend": AttackKind.INTERCEPT_RESEND,
    "beamsplitter_tap": AttackKind.BEAMSPLITTER_TAP,
}
_TIMING_MODES = {
    "pulse": TimingMode.PULSE,
    "continuous": TimingMode.CONTINUOUS_INTERVALS,
}


@dataclass(frozen=True)
class RunConfig:
    seed: int
    session_length: int
    calibration_factor: float
    source: SourceModel
    encoding: EncodingParams
    detection: DetectionParams
    policy: DecisionPolicy
    attack: AttackModel
    timing: TimingConfig

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=_check_seed(seed))


def _check_seed(value: int) -> int:
    if not (0 <= value < 2**64):
        raise ConfigError(f"run.seed: {value} is not a 64-bit unsigned integer")
    return value


def _get(cp, section, option, required=True, default=None):
    if cp.has_option(section, option):
        return cp.get(section, option).strip()
    if required:
        raise ConfigError(f"{section}.{option}: missing required field")
    return default


def _get_float(cp, section, option, required=True, default=None):
    raw = _get(cp, section, option, required, None)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{option}: {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{option}: must be finite")
    return value


def _get_int(cp, section, option):
    raw = _get(cp, section, option)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section}.{option}: {raw!r} is not an integer") from None


def _get_choice(cp, section, option, choices, required=True, default=None):
    raw = _get(cp, section, option, required, None)
    if raw is None:
        return default
    key = raw.lower()
    if key not in choices:
        raise ConfigError(
            f"{section}.{option}: {raw!r} is not one of {sorted(choices)}"
        )
    return choices[key]


def load_config(path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as e:
        raise ConfigError(f"cannot parse config file {path}: {e}") from None

    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for option in cp.options(section):
            if option not in _SECTIONS[section]:
                raise ConfigError(f"{section}.{option}: unknown field")
    for section in _REQUIRED_SECTIONS:
        if not cp.has_section(section):
            raise ConfigError(f"missing required section [{section}]")

    seed = _check_seed(_get_int(cp, "run", "seed"))
    session_length = _get_int(cp, "run", "session_length")
    if session_length < 1:
        raise ConfigError("run.session_length: must be >= 1")
    calibration = _get_float(cp, "run", "calibration_factor", required=False, default=1.0)
    if calibration <= 0.0:
        raise ConfigError("run.calibration_factor: must be > 0")

    kind = _get_choice(cp, "source", "kind", _SOURCE_KINDS)
    mean_photons = _get_float(cp, "source", "mean_photons_per_mode")
    correlation = _get_float(
        cp, "source", "correlation_db", required=(kind is SourceKind.TWIN_BEAM), default=0.0
    )
    try:
        source = SourceModel(kind, mean_photons, correlation)
        encoding = EncodingParams(_get_float(cp, "encoding", "attenuation_fraction"))
        detection = DetectionParams(_get_float(cp, "detection", "quantum_efficiency"))
        policy = DecisionPolicy(_get_float(cp, "policy", "threshold"))

        attack_kind = AttackKind.NONE
        tap_fraction = None
        if cp.has_section("attack"):
            attack_kind = _get_choice(
                cp, "attack", "kind", _ATTACK_KINDS, required=False, default=AttackKind.NONE
            )
            tap_fraction = _get_float(cp, "attack", "tap_fraction", required=False)
        attack = AttackModel(attack_kind, tap_fraction)

        mode = TimingMode.PULSE
        interval = None
        if cp.has_section("timing"):
            mode = _get_choice(
                cp, "timing", "mode", _TIMING_MODES, required=False, default=TimingMode.PULSE
            )
            interval = _get_float(cp, "timing", "interval_duration", required=False)
        timing = TimingConfig(mode, interval)
    except DomainError as e:
        raise ConfigError(str(e)) from None

    return RunConfig(
        seed=seed,
        session_length=session_length,
        calibration_factor=calibration,
        source=source,
        encoding=encoding,
        detection=detection,
        policy=policy,
        attack=attack,
        timing=timing,
    )


def config_as_dict(cfg: RunConfig) -> dict:
    """Fully resolved configuration values, embedded in every report."""
    return {
        "run": {
            "seed": cfg.seed,
            "session_length": cfg.session_length,
            "calibration_factor": cfg.calibration_factor,
        },
        "source": {
            "kind": cfg.source.kind.value,
            "mean_photons_per_mode": cfg.source.mean_photons_per_mode,
            "correlation_db": cfg.source.correlation_db,
        },
        "encoding": {"attenuation_fraction": cfg.encoding.attenuation_fraction},
        "detection": {"quantum_efficiency": cfg.detection.quantum_efficiency},
        "policy": {"threshold": cfg.policy.threshold},
        "attack": {
            "kind": cfg.attack.kind.value,
            "tap_fraction": cfg.attack.tap_fraction,
        },
        "timing": {
            "mode": cfg.timing.mode.value,
            "interval_duration": cfg.timing.interval_duration,
        },
    }
