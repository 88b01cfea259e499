"""Statistical reduction of difference-sample streams.

Equal-width histograms, symmetric-mixture parameter estimation by the method
of moments, the eight-condition summary table (source x basis x key), and
analytic threshold/encoding sweeps with Pareto flags.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .channel import (
    DetectionParams,
    EncodingParams,
    SourceKind,
    SourceModel,
    effective_sigma,
)
from .errors import DataError, DomainError, InsufficientDataError
from .stats import DecisionPolicy, GaussianModel, ber, erfc, postselection_efficiency

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram; the final bin is closed at the upper edge.

    Samples outside [edges[0], edges[-1]] are not binned but tallied in
    out_of_range, so sum(counts) <= total_samples always holds.
    """

    bin_edges: list[float]
    counts: list[int]
    bin_width: float
    total_samples: int
    out_of_range: int = 0


@dataclass(frozen=True)
class FitResult:
    mean_hat: float
    sigma_hat: float
    scale_coefficient: float
    residual: float


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    mean_diff: float
    sigma: float
    efficiency: float
    ber: float
    pareto: bool


@dataclass(frozen=True)
class SweepTable:
    rows: list[SweepRow]


def build_histogram(samples, bins: int) -> Histogram:
    """Bin samples into `bins` equal-width intervals spanning [min, max].

    A degenerate stream (all samples equal) is widened to +-1 around the
    common value.  Deterministic and order-independent.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise DomainError("cannot histogram an empty sample list")
    if bins < 2:
        raise DomainError("need at least 2 bins")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    lo = float(x.min())
    hi = float(x.max())
    if lo == hi:
        lo -= 1.0
        hi += 1.0
    width = (hi - lo) / bins
    counts, below, above = _backend.bin_counts(x, lo, width, bins, hi)
    edges = [lo + k * width for k in range(bins)]
    edges.append(hi)
    return Histogram(
        bin_edges=edges,
        counts=[int(c) for c in counts],
        bin_width=width,
        total_samples=int(x.size),
        out_of_range=below + above,
    )


def _folded_abs_mean(mu: float, sigma: float) -> float:
    # E|X| for X ~ Normal(mu, sigma), mu >= 0.
    t = mu / (_SQRT2 * sigma)
    return sigma * _SQRT_2_OVER_PI * math.exp(-t * t) + mu * (1.0 - erfc(t))


def fit_gaussian_mixture(samples, bins: int = 100) -> FitResult:
    """Estimate (mean, sigma) of the symmetric two-component mixture by moments.

    The mixture is symmetric with equal weights, so its raw moments identify
    both parameters: E[X^2] = mean^2 + sigma^2, and E|X| equals the folded
    normal mean of one component.  mean_hat solves the folded-mean equation
    along the second-moment constraint by bisection, which corrects the bias
    of the naive mean-of-|x| estimate when the components overlap.  The scale
    coefficient is the least-squares factor between the histogram counts and
    the fitted density at the bin centers.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 100:
        raise InsufficientDataError(
            f"mixture fitting needs at least 100 samples, got {x.size}"
        )
    m2 = float(np.mean(x * x))
    m1 = float(np.mean(np.abs(x)))
    if m2 == 0.0:
        raise DataError("all samples are zero; the mixture spread is unidentifiable")

    rms = math.sqrt(m2)

    def folded_gap(mu: float) -> float:
        var = m2 - mu * mu
        if var <= 0.0:
            return rms - m1
        return _folded_abs_mean(mu, math.sqrt(var)) - m1

    if folded_gap(0.0) >= 0.0:
        mean_hat = 0.0
    else:
        lo_mu, hi_mu = 0.0, rms
        for _ in range(100):
            mid = 0.5 * (lo_mu + hi_mu)
            if folded_gap(mid) < 0.0:
                lo_mu = mid
            else:
                hi_mu = mid
        mean_hat = 0.5 * (lo_mu + hi_mu)

    var = m2 - mean_hat * mean_hat
    if var <= 0.0:
        raise DataError("sample spread collapses to zero after moment matching")
    sigma_hat = math.sqrt(var)

    hist = build_histogram(x, bins)
    model = GaussianModel(mean_hat, sigma_hat)
    centers = [
        0.5 * (hist.bin_edges[k] + hist.bin_edges[k + 1]) for k in range(len(hist.counts))
    ]
    p = np.array([_mixture_density(c, model) for c in centers])
    counts = np.asarray(hist.counts, dtype=np.float64)
    scale = float(np.dot(counts, p) / np.dot(p, p))
    residual = float(np.sqrt(np.mean((counts - scale * p) ** 2)))
    return FitResult(mean_hat, sigma_hat, scale, residual)


def _mixture_density(n: float, model: GaussianModel) -> float:
    a = (n - model.mean_diff) / model.sigma
    b = (n + model.mean_diff) / model.sigma
    return 0.5 * (math.exp(-0.5 * a * a) + math.exp(-0.5 * b * b)) / (
        model.sigma * math.sqrt(2.0 * math.pi)
    )


@dataclass(frozen=True)
class Table1Row:
    source: SourceKind
    basis_match: bool
    key: int
    mean: float
    sigma: float


# (basis_match, key) in table order: matched basis first, key 1 before key 0.
_TABLE1_CONDITIONS = [(True, 1), (True, 0), (False, 1), (False, 0)]


def reproduce_table1(
    twin_source: SourceModel,
    det: DetectionParams,
    enc: EncodingParams,
    seed: int,
    samples_per_condition: int = 100_000,
    calibration_factor: float = 1.0,
) -> list[Table1Row]:
    """Simulate all eight (source, basis, key) conditions and fit mean/sigma.

    The coherent comparison source reuses the twin source's power.  Each
    condition draws from an independent child stream spawned off the seed
    (numpy SeedSequence.spawn, one child per row in table order), so rows are
    reproducible and independent of execution order.
    """
    if twin_source.kind is not SourceKind.TWIN_BEAM:
        raise DomainError("reproduce_table1 needs a twin-beam source model")
    if samples_per_condition < 2:
        raise DomainError("samples_per_condition must be >= 2")
    coherent = SourceModel(
        SourceKind.COHERENT, twin_source.mean_photons_per_mode, 0.0
    )
    n_enc = enc.attenuation_fraction * twin_source.mean_photons_per_mode
    children = np.random.SeedSequence(seed).spawn(8)
    rows = []
    idx = 0
    for source in (twin_source, coherent):
        for basis_match, key in _TABLE1_CONDITIONS:
            rng = np.random.default_rng(children[idx])
            idx += 1
            mu = (n_enc if key == 1 else -n_enc) if basis_match else 0.0
            sigma = effective_sigma(source, basis_match, det, calibration_factor)
            x = mu + sigma * rng.standard_normal(samples_per_condition)
            rows.append(
                Table1Row(
                    source=source.kind,
                    basis_match=basis_match,
                    key=key,
                    mean=float(x.mean()),
                    sigma=float(x.std(ddof=1)),
                )
            )
    return rows


def sweep(thresholds, mean_diffs, sigma: float) -> SweepTable:
    """Analytic efficiency/BER over a (threshold, mean_diff) grid at fixed sigma.

    Rows are sorted by (threshold, mean_diff).  A row is flagged Pareto when
    no other row offers both an efficiency at least as high and a BER at
    least as low, with one strictly better.
    """
    thresholds = sorted(float(t) for t in thresholds)
    mean_diffs = sorted(float(m) for m in mean_diffs)
    if not thresholds or not mean_diffs:
        raise DomainError("sweep needs non-empty threshold and mean-difference grids")
    for t in thresholds:
        if not (math.isfinite(t) and t >= 0.0):
            raise DomainError("sweep thresholds must be finite and >= 0")
    for m in mean_diffs:
        if not (math.isfinite(m) and m >= 0.0):
            raise DomainError("sweep mean differences must be finite and >= 0")

    cells = []
    for t in thresholds:
        policy = DecisionPolicy(t)
        for m in mean_diffs:
            model = GaussianModel(m, sigma)
            cells.append((t, m, postselection_efficiency(policy, model), ber(policy, model)))

    rows = []
    for t, m, eff, err in cells:
        dominated = any(
            o_eff >= eff and o_err <= err and (o_eff > eff or o_err < err)
            for _, _, o_eff, o_err in cells
        )
        rows.append(SweepRow(t, m, sigma, eff, err, not dominated))
    return SweepTable(rows)
