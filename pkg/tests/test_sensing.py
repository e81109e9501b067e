import numpy as np
import pytest

from otfs_bench.constants import GUARD_CYCLIC, GUARD_ZERO
from otfs_bench.core.sensing import (angle_transform_pilots, assemble_sensing, build_conv_matrix,
                                     build_phase_matrix, build_sensing_matrix, cyclic_extension,
                                     data_mask, embed_pilots, extract_received_pilots, gen_pilots,
                                     guard_mask, pilot_mask, sensing_system, validate_dims)
from otfs_bench.core.validation import sensing_model_error
from otfs_bench.exceptions import ArgumentError, ConfigurationError, DimensionError
from otfs_bench.types import ChannelSupport, OtfsConfig, PilotDims, SensingSystem

from .helpers import complex_normal

DIMS = PilotDims(M_tau=4, N_nu=4, M_g=2, N_g=2)


class TestPilots:
    def test_deterministic_in_seed(self):
        np.testing.assert_array_equal(gen_pilots(DIMS, 2, 5).pilots, gen_pilots(DIMS, 2, 5).pilots)
        assert gen_pilots(DIMS, 2, 5).pilots.shape == (4, 4, 2)

    def test_unit_power_and_uncorrelated_antennas(self):
        dims = PilotDims(M_tau=100, N_nu=100, M_g=2, N_g=2)
        x = gen_pilots(dims, 2, 0).pilots.reshape(-1, 2)
        assert np.mean(np.abs(x) ** 2) == pytest.approx(1.0, rel=0.05)
        rho = np.abs(np.vdot(x[:, 1], x[:, 0])) / np.sqrt(
            np.vdot(x[:, 0], x[:, 0]).real * np.vdot(x[:, 1], x[:, 1]).real
        )
        assert rho < 0.05


class TestLayout:
    def test_masks_partition_the_frame(self, small_cfg):
        pilots, guards, data = (
            f(DIMS, small_cfg) for f in (pilot_mask, guard_mask, data_mask)
        )
        assert pilots.sum() == 16
        assert pilots.sum() + guards.sum() == 6 * 6
        assert not np.any(pilots & guards)
        assert np.all(pilots | guards | data)

    def test_delay_guard_wraps_to_the_frame_end(self, small_cfg):
        guards = guard_mask(DIMS, small_cfg)
        c = small_cfg.N // 2
        assert guards[small_cfg.M - 1, c] and guards[small_cfg.M - 2, c]
        assert not guards[small_cfg.M - 3, c]

    def test_estimation_only_frame(self, small_cfg):
        pattern = gen_pilots(DIMS, 2, 1)
        frame = embed_pilots(pattern, small_cfg, 1)
        mask = pilot_mask(DIMS, small_cfg)
        np.testing.assert_array_equal(frame[mask], pattern.pilots[:, :, 1].reshape(-1))
        assert not np.any(frame[~mask])

    def test_data_fills_only_data_cells(self, small_cfg):
        pattern = gen_pilots(DIMS, 2, 1)
        cells = data_mask(DIMS, small_cfg)
        frame = embed_pilots(pattern, small_cfg, 0, data=np.ones(int(cells.sum())))
        assert np.all(frame[cells] == 1.0)
        assert not np.any(frame[guard_mask(DIMS, small_cfg)])

    def test_wrong_data_length(self, small_cfg):
        with pytest.raises(ConfigurationError):
            embed_pilots(gen_pilots(DIMS, 2, 1), small_cfg, 0, data=np.ones(3))

    def test_antenna_out_of_range(self, small_cfg):
        with pytest.raises(ArgumentError):
            embed_pilots(gen_pilots(DIMS, 2, 1), small_cfg, 2)

    @pytest.mark.parametrize(
        "dims",
        [
            PilotDims(M_tau=15, N_nu=4, M_g=2, N_g=2),
            PilotDims(M_tau=4, N_nu=3, M_g=2, N_g=2),
            PilotDims(M_tau=4, N_nu=8, M_g=2, N_g=2),
        ],
    )
    def test_invalid_dims(self, small_cfg, dims):
        with pytest.raises(ConfigurationError):
            validate_dims(dims, small_cfg)

    def test_block_smaller_than_support(self, small_cfg):
        with pytest.raises(ConfigurationError):
            validate_dims(DIMS, small_cfg, ChannelSupport(M_max=6, N_max=2))


class TestMeasurementModel:
    def test_received_pilot_index_map(self, small_cfg, rng):
        Y = complex_normal(rng, (small_cfg.M, small_cfg.N))
        pattern = gen_pilots(DIMS, 2, 0)
        system = sensing_system(Y, pattern, small_cfg)
        for ell, k in [(0, -2), (1, 0), (3, 1)]:
            assert system.y[system.row_index(ell, k)] == Y[ell, k + small_cfg.N // 2]

    def test_index_maps_are_bijections(self):
        n_t = 4
        system = SensingSystem(
            y=np.zeros(16, dtype=complex),
            psi=np.zeros((16, DIMS.M_g * DIMS.N_g * n_t), dtype=complex),
            dims=DIMS,
            n_t=n_t,
        )
        rows = [system.row_index(ell, k) for ell in range(4) for k in range(-2, 2)]
        assert sorted(rows) == list(range(16))
        columns = [
            system.column_index(ell, k, r)
            for r in range(-2, 2)
            for ell in range(DIMS.M_g)
            for k in range(-1, 1)
        ]
        # angle-major, then delay, then Doppler
        assert columns == list(range(system.psi.shape[1]))
        for column in columns:
            assert system.column_index(*system.column_triple(column)) == column

    def test_extract_from_zero_frame(self, small_cfg):
        assert not np.any(extract_received_pilots(np.zeros((16, 8)), DIMS, small_cfg))

    def test_angle_transform(self, rng):
        same = np.repeat(complex_normal(rng, (4, 4, 1)), 4, axis=2)
        z = angle_transform_pilots(same)
        np.testing.assert_allclose(z[:, :, 2], same[:, :, 0])
        assert np.max(np.abs(np.delete(z, 2, axis=2))) < 1e-12

        reference_only = np.zeros((4, 4, 4), dtype=complex)
        reference_only[:, :, 0] = same[:, :, 0]
        z = angle_transform_pilots(reference_only)
        np.testing.assert_allclose(z, np.repeat(same[:, :, :1] / 4, 4, axis=2))

    def test_phase_matrix(self, small_cfg):
        W = build_phase_matrix(DIMS, small_cfg)
        assert W.shape == (16, 4)
        np.testing.assert_allclose(np.abs(W), 1.0)
        # columns with zero Doppler (k′ = 0 sits at offset N_g/2) carry no phase
        np.testing.assert_allclose(W[:, 1], 1.0)
        np.testing.assert_allclose(W[:, 3], 1.0)

    def test_conv_matrix_of_delta(self):
        z = np.zeros((4, 4, 2), dtype=complex)
        z[0, 2, 1] = 1.0
        Z = build_conv_matrix(z, DIMS, 0)
        assert Z.sum() == DIMS.M_g * DIMS.N_g
        for col, (ell_c, k_c) in enumerate([(0, -1), (0, 0), (1, -1), (1, 0)]):
            assert Z[ell_c * 4 + k_c + 2, col] == 1.0
        assert not np.any(build_conv_matrix(z, DIMS, -1))

    def test_conv_matrix_matches_zero_padded_sum(self, rng):
        z = complex_normal(rng, (4, 4, 2))
        h = complex_normal(rng, (2, 2))
        expected = np.zeros((4, 4), dtype=complex)
        for ell in range(4):
            for k in range(-2, 2):
                for ell_c in range(2):
                    for k_c in range(-1, 1):
                        src_ell, src_k = ell - ell_c, k - k_c
                        if 0 <= src_ell < 4 and -2 <= src_k < 2:
                            expected[ell, k + 2] += z[src_ell, src_k + 2, 0] * h[ell_c, k_c + 1]
        Z = build_conv_matrix(z, DIMS, -1)
        np.testing.assert_allclose(Z @ h.reshape(-1), expected.reshape(-1), atol=1e-12)

    def test_conv_matrix_angle_out_of_range(self):
        with pytest.raises(ArgumentError):
            build_conv_matrix(np.zeros((4, 4, 2)), DIMS, 1)

    def test_assemble_checks_block_shapes(self, small_cfg):
        W = build_phase_matrix(DIMS, small_cfg)
        with pytest.raises(DimensionError):
            assemble_sensing(W, [np.zeros((16, 4)), np.zeros((16, 5))])

    def test_sensing_matrix_shape(self, small_cfg):
        psi = build_sensing_matrix(gen_pilots(DIMS, 4, 0), small_cfg)
        assert psi.shape == (16, 2 * 2 * 4)

    def test_chain_matches_model(self):
        assert sensing_model_error() < 1e-2

    def test_model_error_shrinks_with_frame_length(self):
        shorter = sensing_model_error(cfg=OtfsConfig(M=32, N=32, N_cp=2, delta_f=15e3))
        assert sensing_model_error() < shorter


class TestCyclicGuard:
    def test_rejects_unknown_guard(self):
        with pytest.raises(ConfigurationError):
            gen_pilots(DIMS, 2, 0, guard="mirror")

    def test_guard_repeats_the_block(self, small_cfg):
        pattern = gen_pilots(DIMS, 2, 1, guard=GUARD_CYCLIC)
        frame = embed_pilots(pattern, small_cfg, 0)
        block = pattern.pilots[:, :, 0]
        # block occupies rows 0..3 and columns 2..5 of the 16×8 frame
        np.testing.assert_array_equal(frame[:4, 2:6], block)
        np.testing.assert_array_equal(frame[14, 2:6], block[2])
        np.testing.assert_array_equal(frame[15, 2:6], block[3])
        np.testing.assert_array_equal(frame[:4, 1], block[:, 3])
        np.testing.assert_array_equal(frame[:4, 6], block[:, 0])
        assert frame[14, 1] == block[2, 3]
        assert not np.any(frame[data_mask(DIMS, small_cfg)])

    def test_extension_shape(self, rng):
        block = complex_normal(rng, (4, 4))
        extended = cyclic_extension(block, DIMS)
        assert extended.shape == (6, 6)
        np.testing.assert_array_equal(extended[2:, 1:5], block)

    def test_periodic_conv_matrix_matches_wrapped_sum(self, rng):
        z = complex_normal(rng, (4, 4, 2))
        h = complex_normal(rng, (2, 2))
        expected = np.zeros((4, 4), dtype=complex)
        for ell in range(4):
            for k in range(-2, 2):
                for ell_c in range(2):
                    for k_c in range(-1, 1):
                        src_ell, src_k = (ell - ell_c) % 4, (k - k_c + 2) % 4
                        expected[ell, k + 2] += z[src_ell, src_k, 0] * h[ell_c, k_c + 1]
        Z = build_conv_matrix(z, DIMS, -1, periodic=True)
        np.testing.assert_allclose(Z @ h.reshape(-1), expected.reshape(-1), atol=1e-12)

    def test_column_norms_concentrate(self, desk_cfg):
        dims, n_t = PilotDims(M_tau=22, N_nu=12, M_g=10, N_g=4), 4
        psi = build_sensing_matrix(gen_pilots(dims, n_t, 3, guard=GUARD_CYCLIC), desk_cfg)
        m = dims.M_tau * dims.N_nu
        norms = np.linalg.norm(psi, axis=0) * np.sqrt(n_t / m)
        assert np.all((norms > 0.8) & (norms < 1.2))
        # within one angle every column permutes the same block
        for block in norms.reshape(n_t, -1):
            np.testing.assert_allclose(block, block[0], rtol=1e-10)

    def test_chain_matches_model(self):
        assert sensing_model_error(guard=GUARD_CYCLIC) < 1e-2

    @pytest.mark.parametrize("guard", [GUARD_ZERO, GUARD_CYCLIC])
    def test_data_does_not_reach_the_pilot_block(self, guard):
        assert sensing_model_error(guard=guard, with_data=True) < 1e-2
