"""Command-line interface: simulate, replay, sweep, table1.

Every command reads one INI config, writes one machine-readable data file and
one text summary into --out, and is byte-reproducible for a fixed
(config, seed) pair.  Exit codes: 0 success, 2 config/usage error, 3 data
error, 4 insufficient data.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import build_histogram, fit_gaussian_mixture, reproduce_table1, sweep
from .channel import effective_sigma
from .config import config_as_dict, load_config
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    InsufficientDataError,
    ProtocolError,
)
from .protocol import Decision, decide, estimate_ber, run_session, sift, wilson_interval
from .reports import (
    fit_as_dict,
    fmt,
    histogram_as_dict,
    read_sample_file,
    render_summary,
    write_json_report,
    write_sample_file,
    write_sweep_csv,
    write_table1_csv,
    write_text,
)
from .stats import GaussianModel, ber as analytic_ber, postselection_efficiency


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _analytic_reference(cfg):
    """Closed-form correct-basis model of the configured channel, no attack."""
    n_enc = cfg.encoding.attenuation_fraction * cfg.source.mean_photons_per_mode
    sigma = effective_sigma(cfg.source, True, cfg.detection, cfg.calibration_factor)
    model = GaussianModel(n_enc, sigma)
    return {
        "mean_diff": n_enc,
        "sigma": sigma,
        "postselection_efficiency": postselection_efficiency(cfg.policy, model),
        "ber": analytic_ber(cfg.policy, model),
    }


def cmd_simulate(args) -> int:
    cfg = _load(args)
    out = _outdir(args)
    rng = np.random.default_rng(cfg.seed)
    pulses, measurements = run_session(
        cfg.session_length,
        cfg.source,
        cfg.encoding,
        cfg.detection,
        cfg.policy,
        cfg.attack,
        cfg.timing,
        rng,
        calibration_factor=cfg.calibration_factor,
    )
    sifted = sift([(p.alice_bit, p.alice_basis) for p in pulses], measurements)
    estimate = estimate_ber(sifted)
    sifted_samples = [measurements[i].n_sample for i in sifted.positions]
    fit = fit_gaussian_mixture(sifted_samples, bins=args.bins)
    hist = build_histogram(sifted_samples, args.bins)

    report = {
        "schema": "twinbeam-report v1",
        "command": "simulate",
        "config": config_as_dict(cfg),
        "session": {
            "length": cfg.session_length,
            "sifted": len(sifted.positions),
            "conclusive": estimate.n_conclusive,
            "inconclusive": sifted.inconclusive_count,
            "errors": estimate.n_errors,
        },
        "empirical": {
            "ber": estimate.ber,
            "postselection_rate": estimate.postselection_rate,
            "wilson_low": estimate.wilson_interval[0],
            "wilson_high": estimate.wilson_interval[1],
        },
        "analytic": _analytic_reference(cfg),
        "fit": fit_as_dict(fit),
        "histogram": histogram_as_dict(hist),
    }
    write_json_report(out / "report.json", report)
    summary = render_summary(
        "twinbeam simulate",
        [
            ("seed", str(cfg.seed)),
            ("source", f"{cfg.source.kind.value} ({cfg.source.correlation_db:g} dB)"),
            ("attack", cfg.attack.kind.value),
            ("pulses", str(cfg.session_length)),
            ("sifted", str(len(sifted.positions))),
            ("conclusive", str(estimate.n_conclusive)),
            ("empirical BER", fmt(estimate.ber)),
            (
                "95% Wilson",
                f"[{fmt(estimate.wilson_interval[0])}, {fmt(estimate.wilson_interval[1])}]",
            ),
            ("postselection rate", fmt(estimate.postselection_rate)),
            ("analytic BER", fmt(report["analytic"]["ber"])),
            ("analytic efficiency", fmt(report["analytic"]["postselection_efficiency"])),
            ("fit mean", fmt(fit.mean_hat)),
            ("fit sigma", fmt(fit.sigma_hat)),
            ("histogram bins", f"{args.bins} (width {fmt(hist.bin_width)})"),
        ],
    )
    write_text(out / "summary.txt", summary)
    if args.dump_samples:
        write_sample_file(
            args.dump_samples,
            cfg.source.kind.value,
            "match",
            "mixed",
            sifted.positions,
            sifted_samples,
        )
    return 0


def cmd_replay(args) -> int:
    cfg = _load(args)
    out = _outdir(args)
    sample_file = read_sample_file(args.samples)
    decisions = [decide(v, cfg.policy) for v in sample_file.values]
    total = len(decisions)
    conclusive = [
        (d, v)
        for d, v in zip(decisions, sample_file.values)
        if d is not Decision.INCONCLUSIVE
    ]
    empirical = {"ber": None, "wilson_low": None, "wilson_high": None}
    if sample_file.key in ("0", "1"):
        if not conclusive:
            raise InsufficientDataError("no conclusive decisions in the replayed file")
        key = int(sample_file.key)
        errors = sum(1 for d, _ in conclusive if d != key)
        lo, hi = wilson_interval(errors, len(conclusive))
        empirical = {"ber": errors / len(conclusive), "wilson_low": lo, "wilson_high": hi}
    fit = fit_gaussian_mixture(sample_file.values, bins=args.bins)
    hist = build_histogram(sample_file.values, args.bins)

    report = {
        "schema": "twinbeam-report v1",
        "command": "replay",
        "samples_file": {
            "source": sample_file.source,
            "basis": sample_file.basis,
            "key": sample_file.key,
            "rows": total,
        },
        "policy": {"threshold": cfg.policy.threshold},
        "session": {
            "total": total,
            "conclusive": len(conclusive),
            "inconclusive": total - len(conclusive),
        },
        "empirical": dict(
            empirical, postselection_rate=len(conclusive) / total if total else None
        ),
        "fit": fit_as_dict(fit),
        "histogram": histogram_as_dict(hist),
    }
    write_json_report(out / "report.json", report)
    summary = render_summary(
        "twinbeam replay",
        [
            ("samples", str(args.samples)),
            ("labels", f"source={sample_file.source} basis={sample_file.basis} key={sample_file.key}"),
            ("rows", str(total)),
            ("threshold", fmt(cfg.policy.threshold)),
            ("conclusive", str(len(conclusive))),
            ("postselection rate", fmt(report["empirical"]["postselection_rate"])),
            ("empirical BER", fmt(report["empirical"]["ber"])),
            ("fit mean", fmt(fit.mean_hat)),
            ("fit sigma", fmt(fit.sigma_hat)),
            ("histogram bins", f"{args.bins} (width {fmt(hist.bin_width)})"),
        ],
    )
    write_text(out / "summary.txt", summary)
    return 0


def _parse_grid(spec: str, name: str) -> list[float]:
    """Grid syntax: 'a,b,c' or 'start:stop:step' (stop inclusive)."""
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be > 0")
            values = []
            k = 0
            while True:
                v = start + k * step
                if v > stop + 1e-12 * max(1.0, abs(stop)):
                    break
                values.append(v)
                k += 1
        else:
            values = [float(p) for p in spec.split(",") if p.strip()]
    except ValueError as e:
        raise ConfigError(f"{name}: bad grid spec {spec!r} ({e})") from None
    if not values:
        raise ConfigError(f"{name}: empty grid")
    return values


def cmd_sweep(args) -> int:
    cfg = _load(args)
    out = _outdir(args)
    thresholds = _parse_grid(args.n0, "--n0")
    mean_diffs = _parse_grid(args.n, "--n")
    sigma = effective_sigma(cfg.source, True, cfg.detection, cfg.calibration_factor)
    table = sweep(thresholds, mean_diffs, sigma)
    write_sweep_csv(out / "sweep.csv", table)
    n_pareto = sum(1 for r in table.rows if r.pareto)
    summary = render_summary(
        "twinbeam sweep",
        [
            ("source", cfg.source.kind.value),
            ("sigma", fmt(sigma)),
            ("thresholds", str(len(thresholds))),
            ("mean diffs", str(len(mean_diffs))),
            ("rows", str(len(table.rows))),
            ("pareto rows", str(n_pareto)),
        ],
    )
    write_text(out / "summary.txt", summary)
    return 0


def cmd_table1(args) -> int:
    cfg = _load(args)
    out = _outdir(args)
    rows = reproduce_table1(
        cfg.source,
        cfg.detection,
        cfg.encoding,
        seed=cfg.seed,
        samples_per_condition=args.samples_per_condition,
        calibration_factor=cfg.calibration_factor,
    )
    write_table1_csv(out / "table1.csv", rows)
    fields = [("seed", str(cfg.seed)), ("samples/condition", str(args.samples_per_condition))]
    for row in rows:
        label = f"{row.source.value}/{'match' if row.basis_match else 'mismatch'}/key{row.key}"
        fields.append((label, f"mean {fmt(row.mean)}  sigma {fmt(row.sigma)}"))
    write_text(out / "summary.txt", render_summary("twinbeam table1", fields))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinbeam",
        description="Photon-number-difference key distribution channel simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", default=".", help="output directory (default: .)")

    p = sub.add_parser("simulate", help="run a full session and report BER statistics")
    common(p)
    p.add_argument("--bins", type=int, default=100, help="histogram bins (default 100)")
    p.add_argument(
        "--dump-samples", default=None, metavar="PATH",
        help="also write the sifted samples as a replayable dump",
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="analyze an externally recorded sample file")
    common(p)
    p.add_argument("--samples", required=True, help="sample dump to replay")
    p.add_argument("--bins", type=int, default=100)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("sweep", help="analytic efficiency/BER over a parameter grid")
    common(p)
    p.add_argument("--n0", required=True, help="threshold grid: 'a,b,c' or start:stop:step")
    p.add_argument("--n", required=True, help="mean-difference grid: 'a,b,c' or start:stop:step")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="simulate the eight (source, basis, key) conditions")
    common(p)
    p.add_argument("--samples-per-condition", type=int, default=100_000)
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (DataError, ProtocolError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return 3
    except InsufficientDataError as e:
        print(f"insufficient data: {e}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
