"""Empirical ROC curves and histograms from detector score arrays.

ROC curves are built by exact sorting rather than binning: for each false
alarm probability on the grid, the threshold is the empirical (1 - p_fa)
quantile of the null scores, and the detection probability is the fraction of
alternative scores strictly above it (ties break toward non-detection).
Histograms are kept separately for density visualization.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field

import numpy as np


class RocSource(enum.Enum):
    EMPIRICAL = "empirical"
    THEORY_LR = "theory-lr"
    THEORY_D1 = "theory-d1"


@dataclass(frozen=True)
class ScorePair:
    """Detector scores under target-absent (h0) and target-present (h1)."""

    h0_scores: np.ndarray
    h1_scores: np.ndarray

    def __post_init__(self):
        for name in ("h0_scores", "h1_scores"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.size == 0:
                raise ValueError(f"{name} is empty")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class RocCurve:
    p_fa: np.ndarray
    p_d: np.ndarray
    source: RocSource
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        p_fa = np.asarray(self.p_fa, dtype=float)
        p_d = np.asarray(self.p_d, dtype=float)
        if p_fa.shape != p_d.shape or p_fa.ndim != 1:
            raise ValueError("p_fa and p_d must be 1-d arrays of equal length")
        if np.any(np.diff(p_fa) <= 0):
            raise ValueError("p_fa grid must be strictly increasing")
        object.__setattr__(self, "p_fa", p_fa)
        object.__setattr__(self, "p_d", p_d)


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def default_pfa_grid(num_log: int = 50, lo: float = 1e-3) -> np.ndarray:
    """Log-spaced grid on [lo, 1) plus the linear decade points 0.1 .. 0.9."""
    log_pts = np.logspace(np.log10(lo), 0.0, num_log, endpoint=False)
    lin_pts = np.arange(1, 10) / 10.0
    return np.unique(np.concatenate([log_pts, lin_pts]))


def empirical_roc(scores: ScorePair, grid) -> RocCurve:
    """Exact sort-based empirical ROC over the given p_fa grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(grid <= 0) or np.any(grid >= 1):
        raise ValueError("grid values must lie in (0, 1)")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    thresholds = np.quantile(scores.h0_scores, 1.0 - grid)
    h1_sorted = np.sort(scores.h1_scores)
    above = h1_sorted.size - np.searchsorted(h1_sorted, thresholds, side="right")
    return RocCurve(grid, above / h1_sorted.size, RocSource.EMPIRICAL)


def histogram(scores, bins: int, value_range=None) -> Histogram:
    """Uniform-width histogram with counts and normalized density."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise ValueError("empty score array")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if value_range is not None and not value_range[1] > value_range[0]:
        raise ValueError("zero-width histogram range")
    counts, edges = np.histogram(scores, bins=bins, range=value_range)
    widths = np.diff(edges)
    if edges[-1] == edges[0]:
        raise ValueError("zero-width histogram range")
    density = counts / (scores.size * widths)
    return Histogram(edges, counts, density)


def roc_deviation(a: RocCurve, b: RocCurve) -> float:
    """Max absolute detection-probability gap between two curves, same grid."""
    if a.p_fa.shape != b.p_fa.shape or not np.array_equal(a.p_fa, b.p_fa):
        raise ValueError("curves are not on the same p_fa grid")
    return float(np.max(np.abs(a.p_d - b.p_d)))


_FMT = "%.12g"


def write_roc_csv(path, grid, columns: dict):
    """Write `pfa,<name>,...` with 12 significant digits per value."""
    grid = np.asarray(grid, dtype=float)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["pfa", *columns.keys()])
        cols = [np.asarray(v, dtype=float) for v in columns.values()]
        for i in range(grid.size):
            writer.writerow([_FMT % grid[i], *(_FMT % c[i] for c in cols)])


def read_roc_csv(path):
    """Read a ROC CSV back as (grid, {name: column})."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header[0] != "pfa":
            raise ValueError(f"not a ROC CSV: {path}")
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows)
    return data[:, 0], {name: data[:, i + 1] for i, name in enumerate(header[1:])}


def write_hist_csv(path, hist: Histogram, overlay=None, overlay_name="pdf_theory"):
    """Write `bin_left,bin_right,count,density[,pdf_theory]`."""
    header = ["bin_left", "bin_right", "count", "density"]
    if overlay is not None:
        overlay = np.asarray(overlay, dtype=float)
        header.append(overlay_name)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for i in range(hist.counts.size):
            row = [_FMT % hist.bin_edges[i], _FMT % hist.bin_edges[i + 1],
                   str(int(hist.counts[i])), _FMT % hist.density[i]]
            if overlay is not None:
                row.append(_FMT % overlay[i])
            writer.writerow(row)


def write_scores_csv(path, scores):
    """Write `trial,score`, one row per trial."""
    scores = np.asarray(scores, dtype=float)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["trial", "score"])
        for i, s in enumerate(scores):
            writer.writerow([str(i), _FMT % s])


def read_scores_csv(path) -> np.ndarray:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["trial", "score"]:
            raise ValueError(f"not a score CSV: {path}")
        return np.array([float(row[1]) for row in reader if row])
