"""Simulator and analytic toolkit for a key distribution channel that encodes
bits in the photon-number difference of polarization-mode pairs.

Twin-beam light carries sub-shot-noise difference correlations, which narrow
the decision statistics and cut the bit error rate relative to coherent light
of the same power; this package provides the closed-form statistics, a
seeded Monte Carlo channel simulator, attack models, and the reduction and
reporting tools around them.
"""

from ._backend import BACKEND
from .analysis import (
    FitResult,
    Histogram,
    SweepRow,
    SweepTable,
    Table1Row,
    build_histogram,
    fit_gaussian_mixture,
    reproduce_table1,
    sweep,
)
from .channel import (
    Basis,
    DetectionParams,
    EncodingParams,
    PulseRecord,
    SourceKind,
    SourceModel,
    effective_sigma,
    encode_pulse,
    measure_difference,
    shot_noise_sigma,
)
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    DataError,
    DegeneratePolicyError,
    DomainError,
    InsufficientDataError,
    ProtocolError,
    TwinbeamError,
)
from .protocol import (
    AttackKind,
    AttackModel,
    BerEstimate,
    Decision,
    MeasurementRecord,
    SiftedKey,
    TimingConfig,
    TimingMode,
    alice_generate,
    apply_attack,
    decide,
    estimate_ber,
    run_session,
    sift,
    wilson_interval,
)
from .stats import (
    DecisionPolicy,
    GaussianModel,
    ber,
    db_from_sigma_ratio,
    erfc,
    mixture_pdf,
    postselection_efficiency,
)

__version__ = "0.1.0"
