"""Detector functions built on the sufficient statistics (p_tot_bar, d1_bar).

Three detectors are provided:

* the exact likelihood-ratio detector, which maximizes the log-likelihood of
  the standardized model over the correlation coefficient by solving a cubic;
* its small-correlation approximation ``n * d1^2 / (p_tot - 2)``;
* the raw correlation statistic d1 itself.

All detectors have vectorized ``*_scores`` variants operating on arrays of
statistics, used by the Monte Carlo harness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .sigmodel import SufficientStats

RHO_EDGE = 0.999999  # fallback search bound, likelihood diverges to -inf at +/-1


class ApproxValidityError(ValueError):
    """Raised when p_tot_bar <= 2, where the approximate detector's
    denominator is non-positive and its scores would misorder the ROC."""


class DetectorKind(enum.Enum):
    LR_EXACT = "lr"
    LR_APPROX = "lr-approx"
    D1 = "d1"


@dataclass(frozen=True)
class DetectorScore:
    value: float
    kind: DetectorKind
    rho_hat: float | None = None


def log_likelihood(stats: SufficientStats, rho: float) -> float:
    """Log-likelihood of the standardized 4-channel Gaussian model at ``rho``.

    l(rho) = -(n/2) [ (p_tot - 2 d1 rho)/(1 - rho^2) + 2 ln(1 - rho^2)
                      + 4 ln(2 pi) ]
    """
    if not abs(rho) < 1:
        raise ValueError(f"rho must lie in (-1, 1), got {rho}")
    one_m = 1.0 - rho * rho
    quad = (stats.p_tot_bar - 2.0 * stats.d1_bar * rho) / one_m
    return -0.5 * stats.n * (quad + 2.0 * np.log(one_m) + 4.0 * np.log(2.0 * np.pi))


def log_likelihood_derivative(stats: SufficientStats, rho: float) -> float:
    """Closed-form dl/drho; its numerator is the ML cubic."""
    if not abs(rho) < 1:
        raise ValueError(f"rho must lie in (-1, 1), got {rho}")
    num = _cubic(np.asarray(rho), stats.d1_bar, stats.p_tot_bar)
    return stats.n * float(num) / (1.0 - rho * rho) ** 2


def _cubic(rho, d1, p_tot):
    """Stationarity cubic d1 - (p_tot - 2) rho + d1 rho^2 - 2 rho^3."""
    return d1 - (p_tot - 2.0) * rho + d1 * rho * rho - 2.0 * rho**3


def _lr_value(rho, d1, p_tot, n):
    """-2 [l(0) - l(rho)]; the constant terms of the likelihood cancel."""
    one_m = 1.0 - rho * rho
    return n * ((2.0 * d1 * rho - p_tot * rho * rho) / one_m - 2.0 * np.log(one_m))


def _cubic_roots(d1, p_tot):
    """All real roots of the ML cubic, vectorized; non-real slots are NaN.

    The cubic is made monic (x^3 + b x^2 + c x + d) and depressed; the
    one-real-root branch uses Cardano, the three-real-root branch the
    trigonometric form.  Both branches are evaluated on masked inputs so the
    whole computation stays vectorized.
    """
    d1 = np.asarray(d1, dtype=float)
    p_tot = np.asarray(p_tot, dtype=float)
    b = -d1 / 2.0
    c = (p_tot - 2.0) / 2.0
    d = -d1 / 2.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0

    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    roots = np.full(d1.shape + (3,), np.nan)

    single = disc > 0
    if np.any(single):
        sq = np.sqrt(np.where(single, disc, 0.0))
        t = np.cbrt(-q / 2.0 + sq) + np.cbrt(-q / 2.0 - sq)
        roots[..., 0] = np.where(single, t + shift, np.nan)

    triple = ~single
    if np.any(triple):
        # p <= 0 whenever disc <= 0; clamp guards the p == 0 triple-root case.
        p_safe = np.where(triple & (p < 0), p, -1e-100)
        m = 2.0 * np.sqrt(-p_safe / 3.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.clip(3.0 * q / (p_safe * m), -1.0, 1.0)
        theta = np.arccos(arg) / 3.0
        for k in range(3):
            t = m * np.cos(theta - 2.0 * np.pi * k / 3.0)
            roots[..., k] = np.where(triple, t + shift, roots[..., k])
    return roots


def ml_rho_scores(p_tot, d1, n):
    """Vectorized unconstrained ML estimate of rho over (-1, 1).

    Collects the real roots of the stationarity cubic inside the interval,
    polishes each with one Newton step, and keeps the one with the highest
    likelihood.  An interior maximizer always exists (the likelihood falls to
    -inf at the endpoints); trials where rounding leaves no usable root fall
    back to bounded scalar maximization.
    """
    p_tot = np.asarray(p_tot, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    roots = _cubic_roots(d1, p_tot)

    inside = np.abs(roots) < 1.0
    r = np.where(inside, roots, 0.0)
    # One Newton polish on the cubic; skipped where the derivative is tiny.
    g = _cubic(r, d1[..., None], p_tot[..., None])
    gp = -(p_tot[..., None] - 2.0) + 2.0 * d1[..., None] * r - 6.0 * r * r
    step = np.where(np.abs(gp) > 1e-12, g / np.where(gp == 0, 1.0, gp), 0.0)
    r_new = r - step
    ok = inside & (np.abs(r_new) < 1.0)
    r = np.where(ok, r_new, r)

    value = np.where(inside, _lr_value(np.where(inside, r, 0.0), d1[..., None],
                                       p_tot[..., None], 1.0), -np.inf)
    best = np.argmax(value, axis=-1)
    rho_hat = np.take_along_axis(r, best[..., None], axis=-1)[..., 0]
    rho_hat = np.where(np.any(inside, axis=-1), rho_hat, np.nan)

    bad = ~np.isfinite(rho_hat)
    if np.any(bad):
        flat = rho_hat.reshape(-1)
        pt = p_tot.reshape(-1)
        dd = d1.reshape(-1)
        for i in np.nonzero(bad.reshape(-1))[0]:
            res = minimize_scalar(
                lambda x: -_lr_value(x, dd[i], pt[i], 1.0),
                bounds=(-RHO_EDGE, RHO_EDGE),
                method="bounded",
                options={"xatol": 1e-12},
            )
            flat[i] = res.x
        rho_hat = flat.reshape(rho_hat.shape)
    return rho_hat


def ml_rho(stats: SufficientStats) -> float:
    """ML estimate of the correlation coefficient; sign follows d1_bar."""
    if stats.p_tot_bar <= 0:
        raise ValueError("p_tot_bar must be positive")
    return float(ml_rho_scores(np.asarray(stats.p_tot_bar), np.asarray(stats.d1_bar), stats.n))


def lr_scores(p_tot, d1, n):
    """Vectorized exact LR detector values (and the rho estimates)."""
    rho_hat = ml_rho_scores(p_tot, d1, n)
    value = _lr_value(rho_hat, np.asarray(d1, dtype=float),
                      np.asarray(p_tot, dtype=float), float(n))
    return np.maximum(value, 0.0), rho_hat


def lr_detector(stats: SufficientStats) -> DetectorScore:
    """Exact likelihood-ratio detector -2 [l(0) - l(rho_hat)]; always >= 0."""
    value, rho_hat = lr_scores(np.asarray(stats.p_tot_bar), np.asarray(stats.d1_bar), stats.n)
    return DetectorScore(float(value), DetectorKind.LR_EXACT, float(rho_hat))


def ml_rho_approx(stats: SufficientStats) -> float:
    """Small-correlation estimate d1_bar / (p_tot_bar - 2), unclamped."""
    if stats.p_tot_bar == 2.0:
        raise ApproxValidityError("p_tot_bar == 2: approximate estimator is degenerate")
    return stats.d1_bar / (stats.p_tot_bar - 2.0)


def lr_approx_scores(p_tot, d1, n):
    """Vectorized approximate LR detector; caller must screen p_tot <= 2."""
    return float(n) * np.asarray(d1, dtype=float) ** 2 / (np.asarray(p_tot, dtype=float) - 2.0)


def lr_detector_approx(stats: SufficientStats) -> DetectorScore:
    """Approximate LR detector n * d1^2 / (p_tot - 2); valid for p_tot > 2."""
    if stats.p_tot_bar <= 2.0:
        raise ApproxValidityError(
            f"approximate LR detector requires p_tot_bar > 2, got {stats.p_tot_bar}"
        )
    value = float(lr_approx_scores(stats.p_tot_bar, stats.d1_bar, stats.n))
    return DetectorScore(value, DetectorKind.LR_APPROX)


def d1_detector(stats: SufficientStats) -> DetectorScore:
    """The correlation statistic itself, used directly as a test statistic."""
    return DetectorScore(stats.d1_bar, DetectorKind.D1)
