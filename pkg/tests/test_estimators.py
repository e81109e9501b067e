import numpy as np
import pytest

from otfs_bench.core.estimators.base import EstimationProblem
from otfs_bench.core.estimators.impulse import (ImpulseEstimator, impulse_frames, impulse_ls,
                                                impulse_mimo_layout, read_mask)
from otfs_bench.core.estimators.lifting import (build_lifting_matrix, burst_indices, burst_start,
                                                lifting_index)
from otfs_bench.core.estimators.metrics import nmse_dd, nmse_dda, nmse_per_antenna
from otfs_bench.core.estimators.omp import omp
from otfs_bench.core.estimators.registry import default_registry
from otfs_bench.core.estimators.solvers import least_squares
from otfs_bench.core.estimators.somp import (Somp3dEstimator, doppler_half_width, gcv_score,
                                             somp3d)
from otfs_bench.core.modem import lemma1_predict
from otfs_bench.core.synthetic import structured_instance
from otfs_bench.core.validation import lifting_failures, recovery_rates
from otfs_bench.exceptions import (ArgumentError, ConfigurationError, DimensionError,
                                   EstimationError, EstimatorError)
from otfs_bench.types import (ChannelSupport, EstimatorConfig, ImpulseLayout, OtfsConfig,
                              PilotDims, SomppParams)

from .helpers import complex_normal

RECOVERY_CFG = OtfsConfig(M=32, N=32, N_cp=4, delta_f=15e3)
RECOVERY_DIMS = PilotDims(M_tau=16, N_nu=16, M_g=4, N_g=4)


class TestLifting:
    @pytest.mark.parametrize("i,j,n_t,expected", [(1, 1, 8, 2), (8, 3, 8, 3), (5, 3, 8, 8)])
    def test_cyclic_sum(self, i, j, n_t, expected):
        assert lifting_index(i, j, n_t) == expected

    def test_index_out_of_range(self):
        with pytest.raises(ArgumentError):
            lifting_index(0, 1, 4)

    def test_matrix_sums(self):
        lifted = build_lifting_matrix(8, 3)
        assert lifted.shape == (8, 24)
        np.testing.assert_array_equal(lifted.sum(axis=0), 1)
        np.testing.assert_array_equal(lifted.sum(axis=1), 3)

    def test_unit_burst_is_a_cyclic_shift(self):
        np.testing.assert_array_equal(build_lifting_matrix(5, 1), np.roll(np.eye(5), 1, axis=0))

    def test_burst_length_out_of_range(self):
        with pytest.raises(ArgumentError):
            build_lifting_matrix(4, 5)

    def test_finds_every_burst(self):
        assert lifting_failures() == 0

    def test_wrapping_burst(self):
        e_theta = np.zeros(8)
        e_theta[burst_indices(6, 3, 8)] = [1.0, 2.0, 1.0]
        assert burst_start(e_theta, 3) == 6


class TestOmp:
    def test_single_atom(self, rng):
        psi = complex_normal(rng, (20, 40))
        record = omp(3.0 * psi[:, 5], psi, 1)
        assert record.support.columns == (5,)
        assert record.h_hat[5] == pytest.approx(3.0)
        assert record.meta["residual_norm"] < 1e-10

    def test_zero_measurement(self, rng):
        psi = complex_normal(rng, (20, 40))
        record = omp(np.zeros(20), psi, 3)
        assert not np.any(record.h_hat)

    def test_sparsity_out_of_range(self, rng):
        with pytest.raises(ArgumentError):
            omp(np.zeros(20), complex_normal(rng, (20, 40)), 0)

    def test_measurement_length_checked(self, rng):
        with pytest.raises(DimensionError):
            omp(np.zeros(19), complex_normal(rng, (20, 40)), 1)

    def test_gaussian_recovery_rate(self):
        recovered = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            psi = rng.standard_normal((100, 128)) / 10.0
            support = np.sort(rng.choice(128, 5, replace=False))
            h = np.zeros(128, dtype=complex)
            h[support] = rng.uniform(0.5, 1.5, 5) * np.exp(2j * np.pi * rng.uniform(size=5))
            record = omp(psi @ h, psi, 5)
            recovered += record.support.columns == tuple(support)
        assert recovered >= 95


class TestSomp3d:
    def test_zero_measurement(self):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 0)
        y = np.zeros(system.psi.shape[0])
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=2, D=2))
        assert not np.any(record.h_hat)

    def test_noiseless_recovery_rates(self):
        rates = recovery_rates(range(20))
        assert rates["somp3d"] >= 0.95
        assert rates["omp"] >= 0.95

    def test_recovered_support_covers_truth(self):
        covered = 0
        for seed in range(10):
            system, h, columns = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, seed)
            record = somp3d(system.y, system.psi, (4, 4, 8), SomppParams(N_p=1, D=2))
            hit = set(columns) <= set(record.support.columns)
            covered += hit
            # a covering support is fitted exactly
            assert not hit or nmse_dda(record.h_hat, h) < 1e-12
        assert covered >= 9

    def test_residual_never_grows(self, rng):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 1)
        y = system.y + 0.01 * complex_normal(rng, system.y.shape[0])
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=3, D=2))
        residuals = record.meta["residuals"]
        assert all(b <= a + 1e-9 for a, b in zip(residuals, residuals[1:]))

    def test_support_growth_is_bounded(self, rng):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 2)
        y = system.y + 0.05 * complex_normal(rng, system.y.shape[0])
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=3, D=2))
        bound = sum(2 * n_nu * 2 for _, n_nu, _ in record.meta["picks"])
        assert len(record.support) <= bound

    def test_scale_equivariance(self):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 3)
        params = SomppParams(N_p=2, D=2)
        base = somp3d(system.y, system.psi, (4, 4, 8), params)
        scaled = somp3d((2.5 - 1j) * system.y, system.psi, (4, 4, 8), params)
        assert scaled.support.columns == base.support.columns
        np.testing.assert_allclose(scaled.h_hat, (2.5 - 1j) * base.h_hat, rtol=1e-8, atol=1e-10)

    def test_burst_longer_than_array(self, rng):
        with pytest.raises(ArgumentError):
            somp3d(np.zeros(4), complex_normal(rng, (4, 8)), (2, 2, 2), SomppParams(N_p=1, D=3))

    def test_column_count_checked(self, rng):
        with pytest.raises(DimensionError):
            somp3d(np.zeros(4), complex_normal(rng, (4, 9)), (2, 2, 2), SomppParams(N_p=1))

    def test_gcv_score(self):
        assert gcv_score(2.0, 5, 10) == pytest.approx(16.0)
        assert gcv_score(1.0, 10, 10) == float("inf")

    def test_iteration_cap_below_path_count(self):
        with pytest.raises(ConfigurationError):
            SomppParams(N_p=3, max_iter=2)

    def test_repeated_pick_stops_the_pursuit(self):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 0)
        y = np.zeros(system.psi.shape[0])
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=1, D=2, max_iter=4))
        assert len(record.meta["residuals"]) == 2
        assert record.meta["selected_iteration"] == 1

    def test_extended_pursuit_keeps_lowest_gcv_iterate(self, rng):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 4)
        y = system.y + 0.05 * complex_normal(rng, system.y.shape[0])
        m = y.shape[0]
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=2, D=2, max_iter=6))
        residuals, sizes = record.meta["residuals"], record.meta["support_sizes"]
        assert len(sizes) >= 2
        scores = [gcv_score(r, s, m) for r, s in zip(residuals[1:], sizes)][1:]
        selected = record.meta["selected_iteration"]
        assert selected == 2 + int(np.argmin(scores))
        assert len(record.support) == sizes[selected - 1]

    def test_without_cap_runs_exactly_n_p_iterations(self, rng):
        system, _, _ = structured_instance(RECOVERY_DIMS, RECOVERY_CFG, 8, 2, 5)
        y = system.y + 0.05 * complex_normal(rng, system.y.shape[0])
        record = somp3d(y, system.psi, (4, 4, 8), SomppParams(N_p=2, D=2))
        assert record.meta["selected_iteration"] == len(record.meta["support_sizes"]) <= 2

    def test_estimator_defaults_iteration_cap(self, small_cfg):
        problem = EstimationProblem(
            cfg=small_cfg, support=ChannelSupport(M_max=3, N_max=4), n_t=4, n_paths=6
        )
        params = Somp3dEstimator().somp_params(problem)
        assert (params.N_p, params.max_iter) == (6, 18)
        capped = Somp3dEstimator({"max_iter": 7}).somp_params(problem)
        assert capped.max_iter == 7

    @pytest.mark.parametrize(
        "e_nu,epsilon,expected",
        [
            ([0.0, 0.0, 1.0, 0.0, 0.0, 0.0], 0.9, 1),
            ([0.0, 1.0, 1.0, 1.0, 1.0, 0.0], 0.9, 2),
            ([1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.99, 3),
        ],
    )
    def test_doppler_half_width(self, e_nu, epsilon, expected):
        assert doppler_half_width(np.array(e_nu), epsilon) == expected


class TestLeastSquares:
    def test_square_system(self, rng):
        A = complex_normal(rng, (6, 6)) + 3 * np.eye(6)
        y = complex_normal(rng, 6)
        x, regularized = least_squares(A, y)
        assert not regularized
        np.testing.assert_allclose(x, np.linalg.solve(A, y), atol=1e-10)

    def test_duplicate_columns_fall_back(self, rng):
        column = complex_normal(rng, (8, 1))
        x, regularized = least_squares(np.hstack([column, column]), column[:, 0])
        assert regularized
        assert np.all(np.isfinite(x))
        assert np.sum(x) == pytest.approx(1.0, abs=1e-6)

    def test_underdetermined_falls_back(self, rng):
        _, regularized = least_squares(complex_normal(rng, (3, 5)), complex_normal(rng, 3))
        assert regularized

    def test_empty_support(self):
        x, regularized = least_squares(np.zeros((4, 0)), np.ones(4))
        assert x.shape == (0,) and not regularized


class TestImpulse:
    def test_layout_fits(self):
        layout = impulse_mimo_layout(4, ChannelSupport(M_max=3, N_max=4), (6, 8))
        assert not layout.insufficient_guard
        assert layout.positions == ((0, -2), (0, 2), (3, -2), (3, 2))

    def test_layout_flags_crowded_footprint(self):
        layout = impulse_mimo_layout(16, ChannelSupport(M_max=3, N_max=4), (6, 16))
        assert layout.insufficient_guard
        assert len(set(layout.positions)) == 16

    def test_desk_layout(self):
        support = ChannelSupport(M_max=10, N_max=4)
        sparse = impulse_mimo_layout(4, support, (32, 16))
        assert sparse.spacing == (16, 8)
        assert sparse.positions == ((0, -4), (0, 4), (16, -4), (16, 4))
        eight = impulse_mimo_layout(8, support, (32, 16))
        assert not eight.insufficient_guard
        assert eight.spacing == (16, 4)
        crowded = impulse_mimo_layout(16, support, (32, 16))
        assert crowded.insufficient_guard
        assert crowded.spacing == (8, 4)

    def test_read_mask_covers_one_window_per_antenna(self, desk_cfg):
        support = ChannelSupport(M_max=10, N_max=4)
        layout = impulse_mimo_layout(4, support, (32, 16))
        mask = read_mask(layout, support, desk_cfg)
        assert mask.sum() == 4 * 10 * 4
        for ell_p, k_p in layout.positions:
            assert mask[ell_p, k_p + desk_cfg.N // 2]

    def test_read_out_removes_delay_dependent_phase(self, desk_cfg):
        layout = ImpulseLayout(
            positions=((5, 1),), spacing=(32, 16), footprint=(32, 16), insufficient_guard=False
        )
        (frame,) = impulse_frames(layout, desk_cfg)
        H = np.zeros((desk_cfg.M, desk_cfg.N), dtype=complex)
        gain = 0.6 - 0.8j
        H[2, desk_cfg.N // 2 - 1] = gain
        received = lemma1_predict(frame, H, desk_cfg)
        raw = received[7, desk_cfg.N // 2]
        assert raw == pytest.approx(
            gain * np.exp(-2j * np.pi * 7 / (desk_cfg.N * desk_cfg.symbol_length))
        )
        estimate = impulse_ls(received, desk_cfg, ChannelSupport(M_max=4, N_max=4), layout)
        np.testing.assert_allclose(estimate[:, :, 0], H, atol=1e-12)

    def test_layout_recovers_every_antenna(self, small_cfg, rng):
        support = ChannelSupport(M_max=3, N_max=4)
        layout = impulse_mimo_layout(4, support, (6, 8))
        channels = []
        received = np.zeros((small_cfg.M, small_cfg.N), dtype=complex)
        for frame in impulse_frames(layout, small_cfg):
            H = np.zeros((small_cfg.M, small_cfg.N), dtype=complex)
            H[:3, small_cfg.N // 2 - 2 : small_cfg.N // 2 + 2] = complex_normal(rng, (3, 4))
            channels.append(H)
            received += lemma1_predict(frame, H, small_cfg)
        estimate = impulse_ls(received, small_cfg, support, layout)
        for p, H in enumerate(channels):
            np.testing.assert_allclose(estimate[:, :, p], H, atol=1e-10)

    def test_zero_frame(self, small_cfg):
        estimate = impulse_ls(np.zeros((16, 8)), small_cfg, ChannelSupport(M_max=3, N_max=4))
        assert estimate.shape == (16, 8, 1) and not np.any(estimate)

    def test_estimator_reports_its_id_on_failure(self, small_cfg):
        problem = EstimationProblem(
            cfg=small_cfg, support=ChannelSupport(M_max=3, N_max=4), n_t=2, n_paths=1
        )
        with pytest.raises(EstimatorError) as excinfo:
            ImpulseEstimator().estimate(problem)
        assert excinfo.value.estimator_id == "impulse"


class TestMetrics:
    def test_nmse_values(self, rng):
        H = complex_normal(rng, (8, 4))
        assert nmse_dd(H, H) == 0.0
        assert nmse_dd(np.zeros_like(H), H) == pytest.approx(1.0)
        assert nmse_dd(1.1 * H, H) == pytest.approx(0.01)

    def test_zero_truth(self):
        with pytest.raises(EstimationError):
            nmse_dda(np.ones((2, 2, 2)), np.zeros((2, 2, 2)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            nmse_dda(np.ones((2, 2, 2)), np.ones((2, 2, 4)))

    def test_per_antenna_average(self, rng):
        H = complex_normal(rng, (4, 4, 2))
        H_hat = H.copy()
        H_hat[:, :, 1] = 0.0
        assert nmse_per_antenna(H_hat, H) == pytest.approx(0.5)


class TestRegistry:
    def test_ids(self):
        assert default_registry.ids() == ["impulse", "omp", "somp3d"]

    def test_unknown_estimator(self):
        with pytest.raises(ConfigurationError):
            default_registry.create(EstimatorConfig(id="mmse"))

    def test_params_are_passed(self):
        estimator = default_registry.create(EstimatorConfig(id="somp3d", params={"epsilon": 0.8}))
        assert estimator.params == {"epsilon": 0.8}
