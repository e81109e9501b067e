"""Module: otfs_bench.core.state

Per-trial state shared by the pipeline stages.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from otfs_bench.types import (ChannelSupport, ComplexArray, DdaChannel, EstimateRecord,
                              ExperimentConfig, ImpulseLayout, OtfsConfig, PathSet, PilotDims,
                              PilotPattern, SensingSystem, TapChannel)


def derive_seed(seed: int, stream: int) -> int:
    """Independent sub-seed for one random stream of a trial."""
    return int(np.random.SeedSequence([seed, stream]).generate_state(1)[0])


# Random streams of one trial
STREAM_CHANNEL = 0
STREAM_PILOTS = 1
STREAM_SPARSE_NOISE = 2
STREAM_IMPULSE_NOISE = 3


@dataclass
class TrialState:
    experiment: ExperimentConfig
    sweep_value: float
    seed: int
    dims: PilotDims
    eta: float
    support: ChannelSupport
    path_set: Optional[PathSet] = None
    taps: List[TapChannel] = field(default_factory=list)
    dds: Optional[ComplexArray] = None
    dda: Optional[DdaChannel] = None
    pattern: Optional[PilotPattern] = None
    system: Optional[SensingSystem] = None
    layout: Optional[ImpulseLayout] = None
    impulse_received: Optional[ComplexArray] = None
    noise_power: Dict[str, float] = field(default_factory=dict)
    records: Dict[str, EstimateRecord] = field(default_factory=dict)
    runtime_ms: Dict[str, float] = field(default_factory=dict)

    @property
    def otfs(self) -> OtfsConfig:
        return self.experiment.otfs

    @property
    def n_t(self) -> int:
        return self.experiment.n_t

    def stream_seed(self, stream: int) -> int:
        return derive_seed(self.seed, stream)
