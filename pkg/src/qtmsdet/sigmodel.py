"""Covariance model of the four radar I/Q voltage channels and Wishart sampling.

The received and reference signals of a noise (or QTMS) radar are four jointly
Gaussian white time series ``[i1, q1, i2, q2]``.  Everything downstream consumes
only the two sufficient statistics: mean total power and the mean cross
correlation ``d1``.  This module builds the 4x4 covariance matrix and samples
those statistics, either from explicit voltage vectors or in O(1) per trial via
the Wishart distribution of the sample covariance matrix.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np


class RadarKind(enum.Enum):
    """Sign convention of the cross-covariance block.

    NOISE uses the rotation block and the plus sign in d1; QTMS uses the
    reflection block and the minus sign.
    """

    NOISE = "noise"
    QTMS = "qtms"

    @property
    def d1_sign(self) -> float:
        return 1.0 if self is RadarKind.NOISE else -1.0


@dataclass(frozen=True)
class CovarianceParams:
    """Four-parameter signal model plus the radar sign convention.

    rho is restricted to [0, 1): the detection problem is one-sided and
    rho = 1 would make the covariance singular.
    """

    sigma1: float
    sigma2: float
    phi: float
    rho: float
    kind: RadarKind = RadarKind.QTMS

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise ValueError(f"sigmas must be positive, got ({self.sigma1}, {self.sigma2})")
        if not (0.0 <= self.rho < 1.0):
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if not np.isfinite(self.phi):
            raise ValueError("phi must be finite")


@dataclass(frozen=True)
class SufficientStats:
    """The pair (mean total power, mean d1) with its sample count."""

    p_tot_bar: float
    d1_bar: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"sample count must be >= 1, got {self.n}")
        if not (np.isfinite(self.p_tot_bar) and np.isfinite(self.d1_bar)):
            raise ValueError("non-finite sufficient statistics")
        if self.p_tot_bar < 0:
            raise ValueError(f"mean total power cannot be negative, got {self.p_tot_bar}")


def cross_block(phi: float, kind: RadarKind) -> np.ndarray:
    """Rotation block for noise radar, reflection block for QTMS radar."""
    c, s = np.cos(phi), np.sin(phi)
    if kind is RadarKind.NOISE:
        return np.array([[c, s], [-s, c]])
    return np.array([[c, s], [s, -c]])


def build_covariance(params: CovarianceParams) -> np.ndarray:
    """4x4 covariance of [i1, q1, i2, q2]; symmetric positive definite."""
    s1, s2 = params.sigma1, params.sigma2
    off = params.rho * s1 * s2 * cross_block(params.phi, params.kind)
    cov = np.empty((4, 4))
    cov[:2, :2] = s1 * s1 * np.eye(2)
    cov[2:, 2:] = s2 * s2 * np.eye(2)
    cov[:2, 2:] = off
    cov[2:, :2] = off.T
    # Enforce bit-exact symmetry; the blocks already guarantee it up to layout.
    return (cov + cov.T) / 2.0


def _stats_from_scatter(s_bar: np.ndarray, kind: RadarKind):
    """Map normalized scatter matrices (..., 4, 4) to (p_tot_bar, d1_bar)."""
    p_tot = np.trace(s_bar, axis1=-2, axis2=-1)
    d1 = s_bar[..., 0, 2] + kind.d1_sign * s_bar[..., 1, 3]
    return p_tot, d1


def sample_scatter_batch(
    params: CovarianceParams, n: int, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``trials`` normalized sample covariance matrices S/n, S ~ W4(cov, n).

    Uses the Bartlett decomposition when n >= 4 (one chi/normal block per
    trial instead of n vectors).  For n < 4 the Wishart is singular and the
    Bartlett construction is undefined, so explicit outer products are summed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    chol = np.linalg.cholesky(build_covariance(params))
    if n >= 4:
        a = np.zeros((trials, 4, 4))
        for i in range(4):
            a[:, i, i] = np.sqrt(rng.chisquare(n - i, size=trials))
        tril = np.tril_indices(4, k=-1)
        a[:, tril[0], tril[1]] = rng.standard_normal((trials, 6))
        la = chol @ a
        return (la @ np.swapaxes(la, -1, -2)) / n
    z = rng.standard_normal((trials, n, 4))
    x = z @ chol.T
    return np.einsum("tni,tnj->tij", x, x) / n


def sample_stats_batch(
    params: CovarianceParams, n: int, trials: int, rng: np.random.Generator
):
    """Sample (p_tot_bar, d1_bar) arrays for ``trials`` independent trials."""
    s_bar = sample_scatter_batch(params, n, trials, rng)
    return _stats_from_scatter(s_bar, params.kind)


def sample_sufficient_stats(
    params: CovarianceParams, n: int, rng: np.random.Generator
) -> SufficientStats:
    """One Wishart draw, reduced to sufficient statistics.

    Distributionally identical to averaging n explicit 4-vectors drawn from
    the model covariance.
    """
    p_tot, d1 = sample_stats_batch(params, n, 1, rng)
    return SufficientStats(float(p_tot[0]), float(d1[0]), n)


def stats_from_samples(samples, kind: RadarKind) -> SufficientStats:
    """Sufficient statistics from explicit voltage samples (n rows of 4)."""
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.size == 0:
        raise ValueError("empty sample sequence")
    if x.ndim != 2 or x.shape[1] != 4:
        raise ValueError(f"expected samples of shape (n, 4), got {x.shape}")
    p_tot = float(np.mean(np.sum(x * x, axis=1)))
    d1 = float(np.mean(x[:, 0] * x[:, 2] + kind.d1_sign * x[:, 1] * x[:, 3]))
    return SufficientStats(p_tot, d1, x.shape[0])


IQ_COLUMNS = ("i1", "q1", "i2", "q2")


def read_iq_csv(path) -> np.ndarray:
    """Load raw I/Q recordings: header ``i1,q1,i2,q2``, one row per time index."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != list(IQ_COLUMNS):
            raise ValueError(f"expected header {','.join(IQ_COLUMNS)} in {path}")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ValueError(f"no samples in {path}")
    data = np.array(rows)
    if data.shape[1] != 4:
        raise ValueError(f"expected 4 columns in {path}")
    return data
