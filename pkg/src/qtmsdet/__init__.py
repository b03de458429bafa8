"""Likelihood-ratio and correlation detectors for QTMS/noise radar."""

from .detectors import (ApproxValidityError, DetectorKind, DetectorScore,
                        d1_detector, log_likelihood, lr_detector,
                        lr_detector_approx, ml_rho, ml_rho_approx)
from .disttheory import (RocPoint, chi2_1_survival, chi2_1_survival_inv,
                         fisher_information, marcum_q_half, roc_theory_d1,
                         roc_theory_lr)
from .experiment import SimulationPlan, simulate_score_pair, simulate_scores
from .rocgen import (Histogram, RocCurve, RocSource, ScorePair,
                     default_pfa_grid, empirical_roc, histogram, roc_deviation)
from .sigmodel import (CovarianceParams, RadarKind, SufficientStats,
                       build_covariance, read_iq_csv, sample_sufficient_stats,
                       stats_from_samples)

__all__ = [
    "ApproxValidityError", "CovarianceParams", "DetectorKind", "DetectorScore",
    "Histogram", "RadarKind", "RocCurve", "RocPoint", "RocSource", "ScorePair",
    "SimulationPlan", "SufficientStats", "build_covariance", "chi2_1_survival",
    "chi2_1_survival_inv", "d1_detector", "default_pfa_grid", "empirical_roc",
    "fisher_information", "histogram", "log_likelihood", "lr_detector",
    "lr_detector_approx", "marcum_q_half", "ml_rho", "ml_rho_approx",
    "read_iq_csv", "roc_deviation", "roc_theory_d1", "roc_theory_lr",
    "sample_sufficient_stats", "simulate_score_pair", "simulate_scores",
    "stats_from_samples",
]
