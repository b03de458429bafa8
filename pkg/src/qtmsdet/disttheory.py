"""Asymptotic score distributions and closed-form ROC curves.

Under the null the LR detector is asymptotically chi-square with one degree of
freedom; under the alternative it is noncentral chi-square with noncentrality
2 n rho^2.  Both survival functions reduce to complementary error functions at
half-integer order, which is what this module uses throughout: no series
truncation, uniform accuracy.

The closed-form ROC for the d1 detector is a large-sample Gaussian
approximation (mean 2 rho, variance 2 (1 + rho^2) / n under the alternative)
and is labeled as such wherever it is emitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, erfcinv, ndtr, ndtri

PFA_MIN = 1e-12  # below this the inverse survival is dominated by rounding


class ExtremeTailError(ValueError):
    """Raised for false-alarm probabilities below PFA_MIN, where the inverse
    survival function would return rounding-dominated garbage."""


@dataclass(frozen=True)
class RocPoint:
    p_fa: float
    p_d: float

    def __post_init__(self):
        if not (0.0 <= self.p_fa <= 1.0 and 0.0 <= self.p_d <= 1.0):
            raise ValueError(f"probabilities out of range: ({self.p_fa}, {self.p_d})")


def chi2_1_survival(t):
    """Survival function of the chi-square(1) distribution: erfc(sqrt(t/2))."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    out = erfc(np.sqrt(t / 2.0))
    return float(out) if out.ndim == 0 else out


def chi2_1_survival_inv(p):
    """Inverse of chi2_1_survival on (0, 1]."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p > 1):
        raise ValueError("p must lie in (0, 1]")
    out = 2.0 * erfcinv(p) ** 2
    return float(out) if out.ndim == 0 else out


def marcum_q_half(a, b):
    """Order-1/2 Marcum Q: survival of noncentral chi-square(1, a^2) at b^2.

    Closed form: (erfc((b - a)/sqrt 2) + erfc((b + a)/sqrt 2)) / 2.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("arguments must be nonnegative")
    rt2 = np.sqrt(2.0)
    out = 0.5 * (erfc((b - a) / rt2) + erfc((b + a) / rt2))
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def fisher_information(rho):
    """Single-sample Fisher information: 1/(1-rho)^2 + 1/(1+rho)^2."""
    rho = np.asarray(rho, dtype=float)
    if np.any(np.abs(rho) >= 1):
        raise ValueError("rho must lie in (-1, 1)")
    out = 1.0 / (1.0 - rho) ** 2 + 1.0 / (1.0 + rho) ** 2
    return float(out) if out.ndim == 0 else out


def chi2_1_pdf(x):
    """chi-square(1) density, exp(-x/2) / sqrt(2 pi x)."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, np.exp(-x / 2.0) / np.sqrt(2.0 * np.pi * np.maximum(x, 1e-300)), 0.0)
    return float(out) if out.ndim == 0 else out


def noncentral_chi2_1_pdf(x, nc):
    """Noncentral chi-square(1, nc) density via the cosh closed form."""
    x = np.asarray(x, dtype=float)
    if nc < 0:
        raise ValueError("noncentrality must be nonnegative")
    if nc == 0:
        return chi2_1_pdf(x)
    xs = np.maximum(x, 1e-300)
    # exp(-(x+nc)/2) cosh(sqrt(nc x)), written with nonpositive exponents so
    # large noncentralities cannot overflow
    rx, rn = np.sqrt(xs), np.sqrt(nc)
    body = 0.5 * (np.exp(-0.5 * (rx - rn) ** 2) + np.exp(-0.5 * (rx + rn) ** 2))
    out = np.where(x > 0, body / np.sqrt(2.0 * np.pi * xs), 0.0)
    return float(out) if out.ndim == 0 else out


def _check_roc_args(rho, n, p_fa):
    p_fa = np.asarray(p_fa, dtype=float)
    if not (0.0 <= rho < 1.0):
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if np.any(p_fa < PFA_MIN):
        raise ExtremeTailError(f"p_fa below {PFA_MIN} is not supported")
    if np.any(p_fa >= 1):
        raise ValueError("p_fa must lie below 1")
    return p_fa


def lr_detection_probability(rho, n, p_fa):
    """Closed-form detection probability of the LR detector (large n)."""
    p_fa = _check_roc_args(rho, n, p_fa)
    thr = chi2_1_survival_inv(p_fa)
    out = marcum_q_half(rho * np.sqrt(2.0 * n), np.sqrt(thr))
    return float(out) if np.ndim(out) == 0 else out


def roc_theory_lr(rho, n, p_fa) -> RocPoint:
    """One point of the theoretical LR ROC curve."""
    return RocPoint(float(p_fa), float(lr_detection_probability(rho, n, p_fa)))


def d1_detection_probability(rho, n, p_fa):
    """Gaussian large-sample detection probability of the d1 detector."""
    p_fa = _check_roc_args(rho, n, p_fa)
    sd0 = np.sqrt(2.0 / n)
    sd1 = np.sqrt(2.0 * (1.0 + rho * rho) / n)
    thr = sd0 * ndtri(1.0 - p_fa)
    out = ndtr(-(thr - 2.0 * rho) / sd1)
    return float(out) if np.ndim(out) == 0 else out


def roc_theory_d1(rho, n, p_fa) -> RocPoint:
    """One point of the Gaussian-approximation d1 ROC curve."""
    return RocPoint(float(p_fa), float(d1_detection_probability(rho, n, p_fa)))
