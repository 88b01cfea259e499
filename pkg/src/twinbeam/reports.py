"""File formats: sample dumps, JSON reports, text summaries, CSV tables.

All writers are deterministic: identical inputs produce byte-identical files
(sorted JSON keys, repr-exact floats in sample rows, fixed line endings).
The layouts are frozen in FORMATS.md.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

SAMPLE_HEADER_PREFIX = "# twinbeam-samples v1"
_SOURCE_LABELS = {"twin", "coherent"}
_BASIS_LABELS = {"match", "mismatch", "mixed"}
_KEY_LABELS = {"0", "1", "mixed"}


@dataclass(frozen=True)
class SampleFile:
    """Parsed sample dump: condition labels plus (index, value) rows."""

    source: str
    basis: str
    key: str
    indices: list[int]
    values: list[float]


def write_sample_file(path, source: str, basis: str, key: str, indices, values) -> None:
    if source not in _SOURCE_LABELS:
        raise DataError(f"unknown source label {source!r}")
    if basis not in _BASIS_LABELS:
        raise DataError(f"unknown basis label {basis!r}")
    if key not in _KEY_LABELS:
        raise DataError(f"unknown key label {key!r}")
    with open(path, "w") as f:
        f.write(f"{SAMPLE_HEADER_PREFIX}; source={source}; basis={basis}; key={key}\n")
        for i, v in zip(indices, values):
            f.write(f"{i},{v!r}\n")


def read_sample_file(path) -> SampleFile:
    """Parse a sample dump, validating the header and every row.

    Indices must be non-negative and strictly increasing; values must be
    finite.  Errors name the offending line number.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise DataError(f"cannot read sample file {path}: {e}") from None
    if not lines:
        raise DataError(f"{path}: empty file")
    header = lines[0]
    if not header.startswith(SAMPLE_HEADER_PREFIX + ";"):
        raise DataError(f"{path}: line 1: unrecognized header or version")
    labels = {}
    for part in header[len(SAMPLE_HEADER_PREFIX) + 1 :].split(";"):
        part = part.strip()
        if not part or "=" not in part:
            raise DataError(f"{path}: line 1: malformed header field {part!r}")
        name, value = part.split("=", 1)
        labels[name.strip()] = value.strip()
    for name, allowed in (("source", _SOURCE_LABELS), ("basis", _BASIS_LABELS), ("key", _KEY_LABELS)):
        if name not in labels:
            raise DataError(f"{path}: line 1: header is missing {name}=")
        if labels[name] not in allowed:
            raise DataError(f"{path}: line 1: {name}={labels[name]!r} not in {sorted(allowed)}")

    indices = []
    values = []
    prev = -1
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}: line {lineno}: expected 'index,value'")
        try:
            idx = int(parts[0])
        except ValueError:
            raise DataError(f"{path}: line {lineno}: bad index {parts[0]!r}") from None
        if idx <= prev:
            raise DataError(f"{path}: line {lineno}: indices must be strictly increasing")
        try:
            val = float(parts[1])
        except ValueError:
            raise DataError(f"{path}: line {lineno}: bad value {parts[1]!r}") from None
        if not math.isfinite(val):
            raise DataError(f"{path}: line {lineno}: value must be finite")
        prev = idx
        indices.append(idx)
        values.append(val)
    if not values:
        raise DataError(f"{path}: no sample rows")
    return SampleFile(labels["source"], labels["basis"], labels["key"], indices, values)


def write_json_report(path, report: dict) -> None:
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")


def write_text(path, text: str) -> None:
    with open(path, "w") as f:
        f.write(text)


def histogram_as_dict(hist) -> dict:
    return {
        "bin_edges": hist.bin_edges,
        "counts": hist.counts,
        "bin_width": hist.bin_width,
        "total_samples": hist.total_samples,
        "out_of_range": hist.out_of_range,
    }


def fit_as_dict(fit) -> dict:
    return {
        "mean": fit.mean_hat,
        "sigma": fit.sigma_hat,
        "scale_coefficient": fit.scale_coefficient,
        "residual": fit.residual,
    }


def render_summary(title: str, fields: list[tuple[str, str]]) -> str:
    width = max(len(name) for name, _ in fields)
    lines = [title]
    lines.extend(f"  {name.ljust(width)}  {value}" for name, value in fields)
    return "\n".join(lines) + "\n"


def fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def write_sweep_csv(path, table) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["threshold", "mean_diff", "sigma", "efficiency", "ber", "pareto"])
        for row in table.rows:
            w.writerow(
                [
                    repr(row.threshold),
                    repr(row.mean_diff),
                    repr(row.sigma),
                    repr(row.efficiency),
                    repr(row.ber),
                    int(row.pareto),
                ]
            )


def write_table1_csv(path, rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["source", "basis", "key", "mean", "sigma"])
        for row in rows:
            w.writerow(
                [
                    row.source.value,
                    "match" if row.basis_match else "mismatch",
                    row.key,
                    repr(row.mean),
                    repr(row.sigma),
                ]
            )
