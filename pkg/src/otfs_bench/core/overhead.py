"""Module: otfs_bench.core.overhead

Pilot-overhead scaling of the impulse scheme against structured sparse recovery.

The impulse scheme needs about N_t·N_max·M_max resource units; the sparse
scheme needs on the order of S·log(L) measurements with sparsity
S = N_max·N_p·D and unknown length L = N_g·M_g·N_t.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

from otfs_bench.core.channel import channel_support, default_burst_length
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.types import ChannelGenParams, OtfsConfig


@dataclass(frozen=True)
class OverheadReport:
    n_t: int
    M_max: int
    N_max: int
    N_p: int
    D: int
    M_g: int
    N_g: int
    impulse_units: int
    sparse_units: float
    impulse_ratio: float
    sparse_ratio: float

    @property
    def reduction(self) -> float:
        """How many times fewer units the sparse scheme needs."""
        return self.impulse_units / self.sparse_units if self.sparse_units else math.inf

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "reduction": self.reduction}


def pilot_overhead(
    cfg: OtfsConfig,
    n_t: int,
    M_max: int,
    N_max: int,
    N_p: int,
    D: Optional[int] = None,
    M_g: Optional[int] = None,
    N_g: Optional[int] = None,
) -> OverheadReport:
    """Resource counts of both schemes, with guards defaulting to the channel support."""
    D = default_burst_length(n_t) if D is None else D
    M_g = M_max if M_g is None else M_g
    N_g = N_max if N_g is None else N_g
    if min(n_t, M_max, N_max, N_p, D, M_g, N_g) < 1:
        raise ConfigurationError("overhead parameters must all be >= 1")
    total = cfg.M * cfg.N
    impulse = n_t * N_max * M_max
    sparse = N_max * N_p * D * math.log(N_g * M_g * n_t)
    return OverheadReport(
        n_t=n_t,
        M_max=M_max,
        N_max=N_max,
        N_p=N_p,
        D=D,
        M_g=M_g,
        N_g=N_g,
        impulse_units=impulse,
        sparse_units=sparse,
        impulse_ratio=impulse / total,
        sparse_ratio=sparse / total,
    )


def overhead_table(
    cfg: OtfsConfig, params: ChannelGenParams, antenna_counts: Sequence[int]
) -> list[OverheadReport]:
    """One report per antenna count for a channel generator's support."""
    support = channel_support(params, cfg)
    return [
        pilot_overhead(cfg, n_t, support.M_max, support.N_max, params.N_p)
        for n_t in antenna_counts
    ]
