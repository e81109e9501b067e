"""Module: otfs_bench.core.pipeline.channel_stage

Draws the channel realization of a trial and its ground-truth tensors.
"""

from otfs_bench.core.channel import array_taps, dda_channel, dds_cir, generate_path_set
from otfs_bench.core.pipeline.base import BaseStage
from otfs_bench.core.state import STREAM_CHANNEL, TrialState


class ChannelStage(BaseStage):
    """Path set, per-antenna taps, H^DDS and H^DDA."""

    @property
    def name(self) -> str:
        return "Channel"

    def should_run(self, state: TrialState) -> bool:
        return state.path_set is None

    def execute(self, state: TrialState) -> None:
        params = state.experiment.channel
        cfg = state.otfs
        L = cfg.N_cp - 1
        state.path_set = generate_path_set(
            params, cfg, state.stream_seed(STREAM_CHANNEL), n_t=state.n_t
        )
        state.taps = array_taps(state.path_set, cfg, L, state.n_t, params.rolloff)
        state.dds = dds_cir(state.path_set, cfg, state.n_t, L, params.rolloff)
        state.dda = dda_channel(state.dds)

    def validate(self, state: TrialState) -> bool:
        return state.dda is not None and len(state.taps) == state.n_t
