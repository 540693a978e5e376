import numpy as np
import pytest

from metricdep import (
    DistanceInducedKernel,
    EuclideanSquared,
    ExplicitSemimetric,
    GaussianKernel,
    InputError,
    KernelInducedSemimetric,
    LinearKernel,
    MaternKernel,
    distance_matrix,
    gram_matrix,
    induced_kernel,
    induced_semimetric,
    kernel_eval,
    median_heuristic,
    parse_kernel,
    parse_semimetric,
    resolve_bandwidth,
    semimetric_eval,
    validate_negative_type,
)

CATALOGUE_KERNELS = [
    LinearKernel(),
    GaussianKernel(1.0),
    GaussianKernel(0.3),
    MaternKernel(0.5, 1.0),
    MaternKernel(1.5, 2.0),
    MaternKernel(2.5, 0.7),
]

NEGATIVE_TYPE_METRICS = [
    EuclideanSquared(),
    induced_semimetric(LinearKernel()),
    induced_semimetric(GaussianKernel(1.0)),
    induced_semimetric(MaternKernel(1.5, 0.8)),
]


class TestKernelEval:
    def test_gaussian_identical_points_is_one(self):
        k = GaussianKernel(1.0)
        assert kernel_eval(k, [0.3, -2.0], [0.3, -2.0]) == 1.0

    def test_linear_is_dot_product(self):
        assert kernel_eval(LinearKernel(), [1.0, 2.0], [3.0, 4.0]) == 11.0

    def test_distance_induced_origin_anchor(self):
        # (d2(x,w) + d2(y,w) - d2(x,y)) / 2 = (1 + 1 - 2) / 2 = 0 by hand
        k = induced_kernel(EuclideanSquared())
        assert kernel_eval(k, [1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_symmetry_all_catalogue_kernels(self):
        rng = np.random.default_rng(5)
        for kernel in CATALOGUE_KERNELS:
            for _ in range(10):
                x, y = rng.standard_normal(3), rng.standard_normal(3)
                assert kernel_eval(kernel, x, y) == pytest.approx(
                    kernel_eval(kernel, y, x), rel=0, abs=1e-15
                )

    def test_gaussian_range(self):
        rng = np.random.default_rng(6)
        k = GaussianKernel(0.7)
        vals = [
            kernel_eval(k, rng.standard_normal(2), rng.standard_normal(2))
            for _ in range(50)
        ]
        assert all(0.0 < v <= 1.0 for v in vals)

    def test_matern_half_closed_form(self):
        # nu=1/2 is exp(-r/ell)
        k = MaternKernel(0.5, 2.0)
        assert kernel_eval(k, [0.0], [1.0]) == pytest.approx(np.exp(-0.5), rel=1e-15)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InputError):
            kernel_eval(LinearKernel(), [1.0, 2.0], [1.0])

    def test_nonfinite_rejected(self):
        with pytest.raises(InputError):
            kernel_eval(GaussianKernel(1.0), [np.nan], [0.0])

    def test_bad_parameters_rejected(self):
        with pytest.raises(InputError):
            GaussianKernel(0.0)
        with pytest.raises(InputError):
            MaternKernel(2.0, 1.0)
        with pytest.raises(InputError):
            MaternKernel(1.5, -1.0)


class TestInducedSemimetric:
    def test_linear_kernel_gives_squared_euclidean(self):
        d2 = induced_semimetric(LinearKernel())
        assert semimetric_eval(d2, [1.0, 0.0], [0.0, 1.0]) == 2.0

    def test_identity_is_exactly_zero(self):
        rng = np.random.default_rng(7)
        for kernel in CATALOGUE_KERNELS:
            d2 = induced_semimetric(kernel)
            for _ in range(5):
                x = rng.standard_normal(4)
                assert semimetric_eval(d2, x, x) == 0.0

    def test_gaussian_hand_value(self):
        # d2(0, 2) = 2 - 2 exp(-2) for sigma = 1
        d2 = induced_semimetric(GaussianKernel(1.0))
        assert semimetric_eval(d2, [0.0], [2.0]) == pytest.approx(
            2.0 - 2.0 * np.exp(-2.0), rel=1e-15
        )


class TestInducedKernel:
    def test_euclid2_origin_is_linear(self):
        rng = np.random.default_rng(8)
        k = induced_kernel(EuclideanSquared())
        for _ in range(20):
            x, y = rng.standard_normal(3), rng.standard_normal(3)
            assert kernel_eval(k, x, y) == pytest.approx(float(x @ y), rel=1e-12)

    def test_anchor_maps_to_zero(self):
        rng = np.random.default_rng(9)
        w = rng.standard_normal(3)
        for d2 in NEGATIVE_TYPE_METRICS:
            k = induced_kernel(d2, w)
            assert kernel_eval(k, w, w) == 0.0

    def test_round_trip_recovers_semimetric(self):
        rng = np.random.default_rng(10)
        for d2 in NEGATIVE_TYPE_METRICS:
            for _ in range(5):
                w = rng.standard_normal(2)
                x, y = rng.standard_normal(2), rng.standard_normal(2)
                original = semimetric_eval(d2, x, y)
                recovered = semimetric_eval(
                    induced_semimetric(induced_kernel(d2, w)), x, y
                )
                assert recovered == pytest.approx(original, rel=1e-12, abs=1e-14)

    def test_anchor_dimension_mismatch(self):
        k = induced_kernel(EuclideanSquared(), [1.0, 2.0, 3.0])
        with pytest.raises(InputError):
            kernel_eval(k, [1.0], [2.0])


class TestGramMatrix:
    def test_gaussian_unit_diagonal(self):
        pts = np.random.default_rng(11).standard_normal((12, 3))
        g = gram_matrix(GaussianKernel(0.8), pts)
        assert np.array_equal(np.diagonal(g), np.ones(12))

    def test_linear_gram_is_xxt(self):
        pts = np.eye(3)
        np.testing.assert_allclose(gram_matrix(LinearKernel(), pts), np.eye(3))

    def test_single_point(self):
        g = gram_matrix(LinearKernel(), [[2.0, 3.0]])
        assert g.shape == (1, 1) and g[0, 0] == 13.0

    def test_psd_on_random_points(self):
        rng = np.random.default_rng(12)
        for kernel in CATALOGUE_KERNELS:
            pts = rng.standard_normal((50, 4))
            eig = np.linalg.eigvalsh(gram_matrix(kernel, pts))
            assert eig[0] >= -1e-8 * eig[-1]

    def test_induced_kernel_gram_equals_shifted_linear_gram(self):
        rng = np.random.default_rng(13)
        pts = rng.standard_normal((20, 3))
        w = rng.standard_normal(3)
        g_induced = gram_matrix(induced_kernel(EuclideanSquared(), w), pts)
        g_shifted = gram_matrix(LinearKernel(), pts - w)
        np.testing.assert_allclose(g_induced, g_shifted, rtol=0, atol=1e-12)

    def test_induced_kernel_gram_rejects_invalid_base(self):
        bad = ExplicitSemimetric([[0.0, 1.0, 1.0], [1.0, 0.0, 9.0], [1.0, 9.0, 0.0]])
        with pytest.raises(InputError, match="negative type"):
            gram_matrix(induced_kernel(bad, 0), np.arange(3))


class TestDistanceMatrix:
    def test_euclid2_hand_values(self):
        m = distance_matrix(EuclideanSquared(), [[0.0, 0.0], [3.0, 4.0]])
        np.testing.assert_array_equal(m, [[0.0, 25.0], [25.0, 0.0]])

    def test_single_point(self):
        np.testing.assert_array_equal(
            distance_matrix(EuclideanSquared(), [[1.0, 1.0]]), [[0.0]]
        )

    def test_kernel_induced_matches_pointwise(self):
        m = distance_matrix(induced_semimetric(GaussianKernel(1.0)), [[0.0], [2.0]])
        assert m[0, 1] == pytest.approx(2.0 - 2.0 * np.exp(-2.0), rel=1e-15)
        assert m[0, 0] == 0.0 and m[1, 0] == m[0, 1]

    def test_symmetric_zero_diag_nonnegative(self):
        rng = np.random.default_rng(14)
        for d2 in NEGATIVE_TYPE_METRICS:
            pts = rng.standard_normal((15, 2))
            m = distance_matrix(d2, pts)
            assert np.array_equal(m, m.T)
            assert np.all(np.diagonal(m) == 0.0)
            assert m.min() >= 0.0

    def test_explicit_matrix_roundtrip_and_validation(self):
        base = distance_matrix(
            EuclideanSquared(), np.random.default_rng(15).standard_normal((5, 2))
        )
        ex = ExplicitSemimetric(base)
        np.testing.assert_array_equal(distance_matrix(ex, np.arange(5)), base)
        np.testing.assert_array_equal(
            distance_matrix(ex, [3, 1]), base[np.ix_([3, 1], [3, 1])]
        )
        with pytest.raises(InputError):
            ExplicitSemimetric([[0.0, 1.0], [2.0, 0.0]])  # asymmetric
        with pytest.raises(InputError):
            ExplicitSemimetric([[1.0, 1.0], [1.0, 0.0]])  # nonzero diagonal
        with pytest.raises(InputError):
            ExplicitSemimetric([[0.0, -1.0], [-1.0, 0.0]])  # negative entry
        with pytest.raises(InputError):
            distance_matrix(ex, [0, 7])  # index out of range


class TestValidateNegativeType:
    def test_squared_euclidean_is_valid(self):
        rng = np.random.default_rng(16)
        for _ in range(10):
            pts = rng.standard_normal((rng.integers(2, 30), rng.integers(1, 5)))
            d = distance_matrix(EuclideanSquared(), pts)
            assert validate_negative_type(d).valid

    def test_two_point_matrix_by_hand(self):
        # -0.5 J D J for D = [[0,1],[1,0]] has eigenvalues {0, 1/2}
        report = validate_negative_type([[0.0, 1.0], [1.0, 0.0]])
        assert report.valid
        assert report.worst_eigenvalue == pytest.approx(0.0, abs=1e-12)

    def test_hand_constructed_violator(self):
        # sqrt-distances 1, 1, 3 break the triangle inequality, so no
        # Hilbert-space embedding exists; exact eigenvalues of -0.5 J D J
        # are {-5/6, 0, 9/2} (rational arithmetic by hand).
        d = [[0.0, 1.0, 1.0], [1.0, 0.0, 9.0], [1.0, 9.0, 0.0]]
        report = validate_negative_type(d)
        assert not report.valid
        assert report.worst_eigenvalue == pytest.approx(-5.0 / 6.0, rel=1e-12)

    def test_collinear_three_points_valid(self):
        # squared Euclidean on {0, 1, 2}: spectrum of -0.5 J D J is {0, 0, 2}
        report = validate_negative_type([[0.0, 1.0, 4.0], [1.0, 0.0, 1.0], [4.0, 1.0, 0.0]])
        assert report.valid
        assert report.worst_eigenvalue == pytest.approx(0.0, abs=1e-12)

    def test_input_errors(self):
        with pytest.raises(InputError):
            validate_negative_type([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(InputError):
            validate_negative_type([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(InputError):
            validate_negative_type([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0]])


class TestBandwidth:
    def test_median_heuristic_hand_value(self):
        # pairwise distances of {0, 1, 3} are {1, 3, 2}; median 2
        assert median_heuristic([[0.0], [1.0], [3.0]]) == 2.0

    def test_pooled_median(self):
        assert median_heuristic([[0.0]], [[1.0], [3.0]]) == 2.0

    def test_degenerate_data_falls_back(self):
        assert median_heuristic([[1.0], [1.0], [1.0]]) == 1.0

    def test_unresolved_gaussian_refuses_evaluation(self):
        with pytest.raises(InputError, match="unresolved"):
            kernel_eval(GaussianKernel(), [0.0], [1.0])

    def test_resolve_bandwidth_fills_sigma(self):
        k = resolve_bandwidth(GaussianKernel(), [[0.0], [1.0], [3.0]])
        assert k.sigma == 2.0
        d2 = resolve_bandwidth(induced_semimetric(GaussianKernel()), [[0.0], [1.0], [3.0]])
        assert d2.base.sigma == 2.0
        assert resolve_bandwidth(LinearKernel(), [[0.0]]) == LinearKernel()


class TestSpecStrings:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("linear", LinearKernel()),
            ("gaussian:sigma=0.5", GaussianKernel(0.5)),
            ("gaussian", GaussianKernel(None)),
            ("matern:nu=1.5,ell=2.0", MaternKernel(1.5, 2.0)),
            ("matern:nu=0.5", MaternKernel(0.5, 1.0)),
        ],
    )
    def test_parse_kernel(self, text, expected):
        assert parse_kernel(text) == expected

    def test_parse_induced_kernel(self):
        k = parse_kernel("induced_kernel:base=euclid2,anchor=origin")
        assert isinstance(k, DistanceInducedKernel)
        assert isinstance(k.base, EuclideanSquared)
        assert k.anchor is None
        k = parse_kernel(
            "induced_kernel:base=(induced_metric:base=(matern:nu=2.5,ell=0.7)),anchor=(0.5;-1.0)"
        )
        assert isinstance(k.base, KernelInducedSemimetric)
        assert k.base.base == MaternKernel(2.5, 0.7)
        np.testing.assert_array_equal(k.anchor, [0.5, -1.0])

    def test_parse_semimetric(self):
        assert parse_semimetric("euclid2") == EuclideanSquared()
        d2 = parse_semimetric("induced_metric:base=(gaussian:sigma=2.0)")
        assert isinstance(d2, KernelInducedSemimetric)
        assert d2.base == GaussianKernel(2.0)
        # bare nesting is accepted when unambiguous
        assert parse_semimetric("induced_metric:base=gaussian:sigma=2.0").base == GaussianKernel(2.0)

    def test_spec_round_trip(self):
        for kernel in [*CATALOGUE_KERNELS, induced_kernel(EuclideanSquared())]:
            parsed = parse_kernel(kernel.spec)
            assert parsed.spec == kernel.spec
        for metric in NEGATIVE_TYPE_METRICS:
            assert parse_semimetric(metric.spec).spec == metric.spec

    @pytest.mark.parametrize(
        "text",
        [
            "gauss",
            "gaussian:sigma=abc",
            "matern:ell=1.0",
            "matern:nu=1.5,bogus=2",
            "induced_kernel:anchor=origin",
            "induced_kernel:base=(euclid2",
            "",
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(InputError):
            parse_kernel(text)
