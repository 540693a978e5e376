import numpy as np
import pytest

from metricdep import (
    EuclideanSquared,
    GaussianKernel,
    InputError,
    LinearKernel,
    gen_coupled_mixture,
    gen_independent_normal,
    gen_orthogonal_linear,
    hsic_vstat,
    mcov_plugin,
    mcov_trace,
    norm_distribution_check,
    power_study,
)
from metricdep.kernels import induced_semimetric


class TestOrthogonalLinear:
    def test_shapes_and_structure(self):
        x, y = gen_orthogonal_linear(40, seed=0)
        assert x.shape == y.shape == (40, 2)
        assert np.all(x[:, 1] == 0.0) and np.all(y[:, 0] == 0.0)
        np.testing.assert_array_equal(x[:, 0], y[:, 1])  # shared Z

    def test_mcov_trace_linear_is_exactly_zero(self):
        # every cross inner product <x_i, y_j> vanishes identically, so the
        # statistic is 0.0 for every n and seed, not just in expectation
        for seed in (0, 1, 99):
            for n in (2, 17, 200):
                x, y = gen_orthogonal_linear(n, seed)
                assert mcov_trace(x, y, LinearKernel()) == 0.0

    def test_hsic_linear_sees_the_cross_coordinate_covariance(self):
        # the same-basis covariances are all zero, but HSIC sums covariances
        # of all basis pairs: with linear kernels it equals Var(Z)^2 here
        x, y = gen_orthogonal_linear(300, seed=5)
        z = x[:, 0]
        var_z = float(((z - z.mean()) ** 2).mean())
        assert hsic_vstat(x, y, LinearKernel()) == pytest.approx(var_z**2, rel=1e-10)
        assert hsic_vstat(x, y, LinearKernel()) > 0.5

    def test_deterministic(self):
        a = gen_orthogonal_linear(25, seed=3)
        b = gen_orthogonal_linear(25, seed=3)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_n_validation(self):
        with pytest.raises(InputError):
            gen_orthogonal_linear(1, seed=0)


class TestCoupledMixture:
    def test_shapes_and_noise_scale(self):
        x, y = gen_coupled_mixture(500, sigma=0.5, seed=0)
        assert x.shape == y.shape == (500, 2)
        assert np.abs(x).max() < 1.0 + 6 * 0.5

    def test_correlation_signs(self):
        x, y = gen_coupled_mixture(2000, sigma=0.5, seed=1)
        assert np.corrcoef(x[:, 0], y[:, 0])[0, 1] > 0.3
        assert np.corrcoef(x[:, 1], y[:, 1])[0, 1] < -0.3

    def test_bitwise_regeneration(self):
        a = gen_coupled_mixture(100, sigma=0.7, seed=11)
        b = gen_coupled_mixture(100, sigma=0.7, seed=11)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        c = gen_coupled_mixture(100, sigma=0.7, seed=12)
        assert not np.array_equal(a[0], c[0])

    def test_validation(self):
        with pytest.raises(InputError):
            gen_coupled_mixture(10, sigma=0.0, seed=0)
        with pytest.raises(InputError):
            gen_coupled_mixture(1, sigma=0.5, seed=0)

    def test_mcov_statistic_is_tiny_relative_to_hsic(self):
        # the pairing is invisible through cross distances alone
        x, y = gen_coupled_mixture(3000, sigma=0.5, seed=2)
        blind = abs(mcov_plugin(x, y, induced_semimetric(GaussianKernel(1.0))))
        sharp = hsic_vstat(x, y, GaussianKernel(1.0))
        assert blind < 0.05 * sharp


class TestNormDistributionCheck:
    def test_symmetric_mixture_passes(self):
        for seed in (0, 1, 2):
            res = norm_distribution_check(4000, sigma=0.5, seed=seed)
            assert res.p_value > 0.01
            assert 0.0 <= res.ks_statistic <= 1.0

    def test_asymmetric_means_rejected(self):
        # with these means the coupled norms concentrate near sqrt(2) and
        # sqrt(5) while re-pairing adds mass near sqrt(17): the equality breaks
        res = norm_distribution_check(
            4000, sigma=0.5, seed=0, means_y=((0.0, 0.0), (3.0, 0.0))
        )
        assert res.p_value < 1e-6

    def test_degenerate_n2(self):
        res = norm_distribution_check(2, sigma=0.5, seed=0)
        assert 0.0 <= res.p_value <= 1.0
        assert np.isfinite(res.ks_statistic)


class TestIndependentNormal:
    def test_sides_are_independent_draws(self):
        x, y = gen_independent_normal(1000, seed=0)
        assert x.shape == y.shape == (1000, 2)
        assert abs(np.corrcoef(x[:, 0], y[:, 0])[0, 1]) < 0.15


class TestPowerStudy:
    def test_minimal_run_fields(self):
        report = power_study(
            "coupled_mixture", "hsic", 20, alpha=0.05, reps=1, B=1, seed=0
        )
        assert report.reps == 1 and report.permutations == 1
        assert 0.0 <= report.rejection_rate <= 1.0
        assert report.monte_carlo_se == pytest.approx(
            np.sqrt(report.rejection_rate * (1 - report.rejection_rate) / 1)
        )
        doc = report.to_dict()
        assert set(doc) == set(report.CSV_FIELDS)

    def test_deterministic_and_schedule_independent(self):
        kwargs = dict(alpha=0.2, reps=6, B=29, seed=42)
        a = power_study("independent_normal", "hsic", 30, workers=1, **kwargs)
        b = power_study("independent_normal", "hsic", 30, workers=2, **kwargs)
        assert a == b

    def test_detects_strong_dependence_quickly(self):
        report = power_study(
            "orthogonal_linear", "hsic", 100, alpha=0.05, reps=10, B=39, seed=7
        )
        assert report.rejection_rate == 1.0

    def test_mcov_kernel_argument_runs_on_induced_semimetric(self):
        report = power_study(
            "coupled_mixture",
            "mcov",
            30,
            alpha=0.5,
            reps=2,
            B=9,
            seed=3,
            kernel=GaussianKernel(1.0),
        )
        assert report.kernel_or_metric == induced_semimetric(GaussianKernel(1.0)).spec

    def test_default_specs(self):
        report = power_study("independent_normal", "dcov", 20, reps=1, B=1, seed=0)
        assert report.kernel_or_metric == EuclideanSquared().spec
        report = power_study("independent_normal", "hsic", 20, reps=1, B=1, seed=0)
        assert report.kernel_or_metric == "gaussian"

    def test_validation(self):
        with pytest.raises(InputError):
            power_study("nope", "hsic", 20, reps=1, B=1, seed=0)
        with pytest.raises(InputError):
            power_study("coupled_mixture", "nope", 20, reps=1, B=1, seed=0)
        with pytest.raises(InputError):
            power_study("coupled_mixture", "hsic", 20, reps=0, B=1, seed=0)
        with pytest.raises(InputError):
            power_study("coupled_mixture", "hsic", 20, reps=1, B=1, seed=0, alpha=1.5)

    def test_large_noise_drowns_the_signal(self):
        # sanity sweep: at sigma far above the mean separation the mixture is
        # indistinguishable from independence and power falls toward alpha
        report = power_study(
            "coupled_mixture", "hsic", 60, alpha=0.05, reps=40, B=59, seed=5, sigma=50.0
        )
        assert report.rejection_rate <= 0.2
