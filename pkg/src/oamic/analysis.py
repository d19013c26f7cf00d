"""Relative-intensity datasets: per-offset linear fits.

Crosstalk is "idealised" when the crossover probability barely depends on
the initial mode index. Given digitized (initial_mode, delta_ell,
relative_intensity) records, this module quantifies that dependence per
delta_ell group: the ordinary least-squares slope of intensity against
initial mode, and the relative change (max - min) / mean across the
group. Small numbers in both columns justify the idealised-channel
approximation for a dataset.

CSV schema: header ``initial_mode,delta_ell,relative_intensity``; lines
starting with ``#`` are comments.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import InsufficientDataError

CSV_FIELDS = ("initial_mode", "delta_ell", "relative_intensity")


@dataclass(frozen=True)
class IntensityRecord:
    """One digitized data point of a crossover-intensity plot."""

    initial_mode: int
    delta_ell: int
    relative_intensity: float

    def __post_init__(self):
        if not 0.0 <= self.relative_intensity <= 1.0:
            raise ValueError(
                f"relative_intensity must lie in [0, 1], got {self.relative_intensity}"
            )


@dataclass(frozen=True)
class GroupFit:
    """Least-squares summary for one delta_ell group."""

    delta_ell: int
    slope: float
    relative_change: float
    n_points: int


def analyze_intensities(records) -> list[GroupFit]:
    """Per-delta_ell OLS slope and relative change, sorted by delta_ell.

    Duplicate (initial_mode, delta_ell) keys are rejected; each group
    needs at least two distinct initial modes for a slope.
    """
    records = list(records)
    seen = set()
    for r in records:
        key = (r.initial_mode, r.delta_ell)
        if key in seen:
            raise ValueError(f"duplicate record for (initial_mode, delta_ell) = {key}")
        seen.add(key)

    groups: dict[int, list[IntensityRecord]] = {}
    for r in records:
        groups.setdefault(r.delta_ell, []).append(r)

    fits = []
    for delta in sorted(groups):
        pts = groups[delta]
        xs = [float(r.initial_mode) for r in pts]
        ys = [r.relative_intensity for r in pts]
        if len(set(xs)) < 2:
            raise InsufficientDataError(
                f"delta_ell = {delta}: need >= 2 distinct initial modes, got {len(set(xs))}"
            )
        n = len(xs)
        x_mean = sum(xs) / n
        y_mean = sum(ys) / n
        sxx = sum((x - x_mean) ** 2 for x in xs)
        sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
        slope = sxy / sxx
        rel_change = (max(ys) - min(ys)) / y_mean if y_mean != 0.0 else 0.0
        fits.append(GroupFit(delta, slope, rel_change, n))
    return fits


def read_intensity_csv(text: str) -> list[IntensityRecord]:
    """Parse CSV text (schema above) into records."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != CSV_FIELDS:
        raise ValueError(
            f"expected CSV header {','.join(CSV_FIELDS)}, got {reader.fieldnames}"
        )
    out = []
    for row in reader:
        out.append(
            IntensityRecord(
                int(row["initial_mode"]),
                int(row["delta_ell"]),
                float(row["relative_intensity"]),
            )
        )
    return out


def fits_to_csv(fits) -> str:
    """Serialize group fits with a delta_ell,slope,relative_change header."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["delta_ell", "slope", "relative_change", "n_points"])
    for f in fits:
        writer.writerow([f.delta_ell, repr(f.slope), repr(f.relative_change), f.n_points])
    return buf.getvalue()
