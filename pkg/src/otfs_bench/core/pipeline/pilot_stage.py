"""Module: otfs_bench.core.pipeline.pilot_stage

Builds the pilot frames of a trial, sends them through the channel at the
configured SNR and demodulates what the single-antenna user receives.
"""

from typing import List, Optional, Sequence

import numpy as np

from otfs_bench.constants import GUARD_CYCLIC
from otfs_bench.core.estimators.base import EstimatorKind
from otfs_bench.core.estimators.impulse import impulse_frames, impulse_mimo_layout, read_mask
from otfs_bench.core.estimators.registry import default_registry
from otfs_bench.core.modem import complex_awgn, otfs_demodulate, otfs_modulate, superpose_channels
from otfs_bench.core.pipeline.base import BaseStage
from otfs_bench.core.sensing import embed_pilots, gen_pilots, pilot_mask, sensing_system
from otfs_bench.core.state import (STREAM_IMPULSE_NOISE, STREAM_PILOTS, STREAM_SPARSE_NOISE,
                                   TrialState)
from otfs_bench.types import ComplexArray, OtfsConfig, TapChannel


def transmit(
    frames: Sequence[ComplexArray],
    channels: Sequence[TapChannel],
    cfg: OtfsConfig,
    region: np.ndarray,
    snr_db: Optional[float],
    seed: int,
):
    """Send one frame per antenna and return (channel-scaled received frame, noise power).

    The noise variance is set so that the mean noiseless received power over
    ``region``, the cells the estimator reads, divided by the per-sample noise
    variance equals the SNR.
    """
    signals = [otfs_modulate(frame, cfg) for frame in frames]
    r = superpose_channels(signals, channels)
    noise_power = 0.0
    if snr_db is not None:
        clean = otfs_demodulate(r, cfg)
        noise_power = float(np.mean(np.abs(clean[region]) ** 2)) / 10 ** (snr_db / 10.0)
        r = r + complex_awgn(r.shape[0], noise_power, np.random.default_rng(seed))
    return otfs_demodulate(r, cfg, channel_scaled=True), noise_power


def _kinds(state: TrialState) -> List[EstimatorKind]:
    return [default_registry.create(e).kind for e in state.experiment.estimators]


class SparsePilotStage(BaseStage):
    """Overlapped Gaussian pilots for the sparse-recovery estimators."""

    @property
    def name(self) -> str:
        return "Gaussian pilots"

    def should_run(self, state: TrialState) -> bool:
        return EstimatorKind.DELAY_DOPPLER_ANGLE in _kinds(state)

    def execute(self, state: TrialState) -> None:
        cfg = state.otfs
        state.pattern = gen_pilots(
            state.dims,
            state.n_t,
            state.stream_seed(STREAM_PILOTS),
            guard=state.experiment.pilot.get("guard", GUARD_CYCLIC),
        )
        frames = [embed_pilots(state.pattern, cfg, p) for p in range(state.n_t)]
        received, state.noise_power["sparse"] = transmit(
            frames,
            state.taps,
            cfg,
            pilot_mask(state.dims, cfg),
            state.experiment.snr_db,
            state.stream_seed(STREAM_SPARSE_NOISE),
        )
        state.system = sensing_system(received, state.pattern, cfg)

    def validate(self, state: TrialState) -> bool:
        return state.system is not None and np.all(np.isfinite(state.system.y))


class ImpulsePilotStage(BaseStage):
    """One impulse per antenna packed into the same pilot footprint."""

    @property
    def name(self) -> str:
        return "Impulse pilots"

    def should_run(self, state: TrialState) -> bool:
        return EstimatorKind.DELAY_DOPPLER in _kinds(state)

    def execute(self, state: TrialState) -> None:
        cfg = state.otfs
        footprint = state.dims.footprint
        state.layout = impulse_mimo_layout(state.n_t, state.support, footprint)
        state.impulse_received, state.noise_power["impulse"] = transmit(
            impulse_frames(state.layout, cfg),
            state.taps,
            cfg,
            read_mask(state.layout, state.support, cfg),
            state.experiment.snr_db,
            state.stream_seed(STREAM_IMPULSE_NOISE),
        )

    def validate(self, state: TrialState) -> bool:
        return state.impulse_received is not None
