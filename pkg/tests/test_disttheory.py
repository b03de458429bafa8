import numpy as np
import pytest

from oracles import noncentral_chi2_1_survival_quad
from qtmsdet.disttheory import (ExtremeTailError, RocPoint, chi2_1_pdf,
                                chi2_1_survival, chi2_1_survival_inv,
                                d1_detection_probability, fisher_information,
                                lr_detection_probability, marcum_q_half,
                                noncentral_chi2_1_pdf, roc_theory_d1,
                                roc_theory_lr)


class TestChi2Survival:
    def test_boundary_and_quantiles(self):
        assert chi2_1_survival(0.0) == 1.0
        assert chi2_1_survival(3.8415) == pytest.approx(0.05, abs=1e-4)
        assert chi2_1_survival(1.0) == pytest.approx(0.3173, abs=1e-4)

    def test_matches_quadrature(self):
        for t in [0.1, 0.5, 1.0, 2.0, 3.8415, 6.0, 9.0]:
            oracle = noncentral_chi2_1_survival_quad(t, 0.0)
            assert chi2_1_survival(t) == pytest.approx(oracle, abs=1e-8)

    def test_monotone_decreasing(self):
        t = np.linspace(0, 40, 400)
        assert np.all(np.diff(chi2_1_survival(t)) <= 0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            chi2_1_survival(-0.1)


class TestChi2SurvivalInverse:
    def test_boundary(self):
        assert chi2_1_survival_inv(1.0) == 0.0
        assert chi2_1_survival_inv(0.05) == pytest.approx(3.8415, abs=1e-3)

    def test_round_trip(self):
        for p in [1e-6, 1e-3, 0.1, 0.5, 0.99]:
            assert chi2_1_survival(chi2_1_survival_inv(p)) == pytest.approx(p, abs=1e-10)

    def test_rejects_out_of_range(self):
        for p in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                chi2_1_survival_inv(p)


class TestMarcumQHalf:
    def test_central_reduction(self):
        assert marcum_q_half(0.0, np.sqrt(3.8415)) == pytest.approx(0.05, abs=1e-4)

    def test_survival_at_origin(self):
        assert marcum_q_half(2.0, 0.0) == 1.0

    def test_matches_quadrature_point(self):
        oracle = noncentral_chi2_1_survival_quad(4.0, 4.0)
        assert marcum_q_half(2.0, 2.0) == pytest.approx(oracle, abs=1e-8)

    def test_matches_quadrature_grid(self):
        for a in [0.0, 1.0, 3.0, 6.0, 10.0]:
            for b in [0.0, 0.5, 2.0, 5.0, 10.0]:
                oracle = noncentral_chi2_1_survival_quad(b * b, a * a)
                assert marcum_q_half(a, b) == pytest.approx(oracle, abs=1e-8)

    def test_monotonicity(self):
        a = np.linspace(0, 10, 60)
        b = np.linspace(0, 10, 60)
        assert np.all(np.diff(marcum_q_half(a, 3.0)) >= 0)
        assert np.all(np.diff(marcum_q_half(3.0, b)) <= 0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            marcum_q_half(-1.0, 0.0)
        with pytest.raises(ValueError):
            marcum_q_half(0.0, -1.0)


class TestFisherInformation:
    def test_values(self):
        assert fisher_information(0.0) == 2.0
        assert fisher_information(0.5) == pytest.approx(4 + 4 / 9)

    def test_even_symmetry(self):
        for rho in (0.1, 0.3, 0.7):
            assert fisher_information(rho) == fisher_information(-rho)

    def test_rejects_edge(self):
        with pytest.raises(ValueError):
            fisher_information(1.0)


def test_pdfs_integrate_to_one():
    from scipy.integrate import quad
    total, _ = quad(chi2_1_pdf, 0, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)
    total, _ = quad(lambda x: noncentral_chi2_1_pdf(x, 10.0), 0, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)


class TestRocTheoryLr:
    def test_diagonal_at_zero_rho(self):
        pt = roc_theory_lr(0.0, 100, 0.1)
        assert pt.p_d == pytest.approx(0.1, abs=1e-12)

    def test_against_noncentral_quadrature(self):
        # noncentrality 2 * 50000 * 0.01^2 = 10
        thr = chi2_1_survival_inv(0.1)
        oracle = noncentral_chi2_1_survival_quad(thr, 10.0)
        pt = roc_theory_lr(0.01, 50000, 0.1)
        assert pt.p_d == pytest.approx(oracle, abs=1e-6)

    def test_monotone_in_pfa_and_rho(self):
        vals = [roc_theory_lr(0.01, 50000, p).p_d for p in (0.01, 0.1, 0.5)]
        assert vals[0] < vals[1] < vals[2]
        by_rho = [roc_theory_lr(r, 50000, 0.1).p_d for r in (0.0, 0.005, 0.01, 0.02)]
        assert np.all(np.diff(by_rho) >= 0)

    def test_pd_at_least_pfa(self):
        grid = np.array([1e-9, 1e-4, 0.1, 1 - 1e-9])
        pd = lr_detection_probability(0.02, 10000, grid)
        assert np.all(pd >= grid - 1e-12)
        assert np.all((pd >= 0) & (pd <= 1))

    def test_extreme_tail_guard(self):
        with pytest.raises(ExtremeTailError):
            lr_detection_probability(0.01, 100, 1e-13)
        with pytest.raises(ValueError):
            lr_detection_probability(0.01, 100, 1.0)
        with pytest.raises(ValueError):
            lr_detection_probability(1.0, 100, 0.1)


class TestRocTheoryD1:
    def test_diagonal_at_zero_rho(self):
        assert roc_theory_d1(0.0, 100, 0.1).p_d == pytest.approx(0.1, abs=1e-12)

    def test_probabilities_in_range(self):
        grid = np.array([1e-9, 1e-3, 0.5, 1 - 1e-9])
        pd = d1_detection_probability(0.01, 50000, grid)
        assert np.all((pd >= 0) & (pd <= 1))

    def test_matches_gaussian_simulation(self):
        # empirical check of the CLT stand-in, rho = 0.01, n = 50000
        from qtmsdet.rocgen import ScorePair, empirical_roc
        from qtmsdet.sigmodel import CovarianceParams, RadarKind, sample_stats_batch
        rng = np.random.default_rng(8)
        n, trials = 50000, 300_000
        _, d0 = sample_stats_batch(CovarianceParams(1, 1, 0, 0.0, RadarKind.QTMS), n, trials, rng)
        _, d1 = sample_stats_batch(CovarianceParams(1, 1, 0, 0.01, RadarKind.QTMS), n, trials, rng)
        grid = np.linspace(0.05, 0.9, 12)
        curve = empirical_roc(ScorePair(d0, d1), grid)
        theory = d1_detection_probability(0.01, n, grid)
        assert np.max(np.abs(curve.p_d - theory)) < 0.01


def test_rocpoint_validation():
    with pytest.raises(ValueError):
        RocPoint(-0.1, 0.5)
    with pytest.raises(ValueError):
        RocPoint(0.1, 1.5)
