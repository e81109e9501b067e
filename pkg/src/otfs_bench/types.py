"""
Centralized type definitions for OTFS Bench.

This module contains the type aliases, protocols and data containers
shared by the modem, channel model, pilot/sensing, estimators and harness.
"""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Protocol, Tuple

import numpy as np

from otfs_bench.constants import GUARD_CYCLIC, GUARD_ZERO

# =============================================================================
# Core Types
# =============================================================================

ComplexArray = np.ndarray
RealArray = np.ndarray
Seed = int
EstimatorId = str
SweepAxis = str
ErrorMessage = str
OriginalError = Optional[Exception]
FilePath = Path | str
UserConfig = Dict[str, Any]
Flags = Tuple[str, ...]

# (delay, Doppler, angle) triple in signed index convention
SupportTriple = Tuple[int, int, int]


class UILogger(Protocol):
    """Protocol for progress reporting used by orchestration code."""

    def info(self, text: str) -> None: ...

    def muted(self, text: str, spaces: int = 0) -> None: ...

    def warning(self, text: str) -> None: ...


# =============================================================================
# Modem Types
# =============================================================================


@dataclass(frozen=True)
class OtfsConfig:
    """Frame geometry and radio parameters of one OTFS frame."""

    M: int
    N: int
    N_cp: int
    delta_f: float
    f_c: float = 2.15e9

    def __post_init__(self):
        from otfs_bench.exceptions import ConfigurationError

        if self.M < 2 or self.N < 2 or self.M % 2 or self.N % 2:
            raise ConfigurationError(f"M and N must be even and >= 2, got M={self.M}, N={self.N}")
        if not 0 <= self.N_cp <= self.M:
            raise ConfigurationError(f"N_cp must lie in [0, M={self.M}], got {self.N_cp}")
        if self.delta_f <= 0:
            raise ConfigurationError(f"delta_f must be positive, got {self.delta_f}")

    @property
    def T_s(self) -> float:
        """Sample interval 1/(M·delta_f)."""
        return 1.0 / (self.M * self.delta_f)

    @property
    def T(self) -> float:
        """OFDM symbol duration including the cyclic prefix."""
        return (self.M + self.N_cp) * self.T_s

    @property
    def symbol_length(self) -> int:
        return self.M + self.N_cp

    @property
    def frame_length(self) -> int:
        return (self.M + self.N_cp) * self.N

    @property
    def wavelength(self) -> float:
        from otfs_bench.constants import SPEED_OF_LIGHT

        return SPEED_OF_LIGHT / self.f_c

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class TapChannel:
    """Linear time-variant taps h[κ][ℓ], row κ-1 holds sample time κ."""

    taps: ComplexArray

    @property
    def L(self) -> int:
        return self.taps.shape[1] - 1

    @property
    def n_samples(self) -> int:
        return self.taps.shape[0]


# =============================================================================
# Channel Types
# =============================================================================


@dataclass(frozen=True)
class Subpath:
    alpha: complex
    nu: float
    psi: float


@dataclass(frozen=True)
class DominantPath:
    """Dominant path; all subpaths share the delay tau."""

    tau: float
    subpaths: Tuple[Subpath, ...]


@dataclass(frozen=True)
class PathSet:
    """Parametric multipath description of one channel realization."""

    paths: Tuple[DominantPath, ...]

    @property
    def n_subpaths(self) -> int:
        return sum(len(path.subpaths) for path in self.paths)

    def flatten(self) -> Tuple[RealArray, ComplexArray, RealArray, RealArray]:
        """Return per-subpath (tau, alpha, nu, psi) arrays."""
        tau = [path.tau for path in self.paths for _ in path.subpaths]
        alpha = [sp.alpha for path in self.paths for sp in path.subpaths]
        nu = [sp.nu for path in self.paths for sp in path.subpaths]
        psi = [sp.psi for path in self.paths for sp in path.subpaths]
        return (
            np.asarray(tau, dtype=float),
            np.asarray(alpha, dtype=complex),
            np.asarray(nu, dtype=float),
            np.asarray(psi, dtype=float),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "paths": [
                {
                    "tau": path.tau,
                    "subpaths": [
                        {
                            "alpha_re": float(np.real(sp.alpha)),
                            "alpha_im": float(np.imag(sp.alpha)),
                            "nu": sp.nu,
                            "psi": sp.psi,
                        }
                        for sp in path.subpaths
                    ],
                }
                for path in self.paths
            ]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PathSet":
        return cls(
            paths=tuple(
                DominantPath(
                    tau=float(p["tau"]),
                    subpaths=tuple(
                        Subpath(
                            alpha=complex(sp["alpha_re"], sp["alpha_im"]),
                            nu=float(sp["nu"]),
                            psi=float(sp["psi"]),
                        )
                        for sp in p["subpaths"]
                    ),
                )
                for p in data["paths"]
            )
        )


@dataclass(frozen=True)
class ChannelGenParams:
    """Parameters of the clustered multipath generator."""

    N_p: int = 6
    N_s: int = 20
    v: float = 100.0
    tau_max: float = 8.333333333e-6
    angle_spread: Optional[float] = None
    pdp_decay: float = 1.0
    rolloff: float = 0.3
    on_grid: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ChannelSupport:
    """Finite delay/Doppler support (M_max, N_max) of the delay-Doppler channel."""

    M_max: int
    N_max: int


@dataclass(frozen=True, eq=False)
class DdaChannel:
    """Delay-Doppler-angle tensor H^DDA with Doppler and angle axes stored centered."""

    tensor: ComplexArray

    @property
    def n_t(self) -> int:
        return self.tensor.shape[2]

    def truncated(self, M_g: int, N_g: int) -> ComplexArray:
        """M_g×N_g×N_t view: delays [0, M_g-1], Doppler [-N_g/2, N_g/2-1]."""
        N = self.tensor.shape[1]
        return self.tensor[:M_g, N // 2 - N_g // 2 : N // 2 + N_g // 2, :]


# =============================================================================
# Pilot / Sensing Types
# =============================================================================


@dataclass(frozen=True)
class PilotDims:
    """Pilot block and guard extents of the sparse pilot layout."""

    M_tau: int
    N_nu: int
    M_g: int
    N_g: int

    @property
    def footprint(self) -> Tuple[int, int]:
        return self.M_tau + self.M_g, self.N_nu + self.N_g

    def overhead(self, cfg: OtfsConfig) -> float:
        rows, cols = self.footprint
        return rows * cols / (cfg.M * cfg.N)

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class PilotPattern:
    """Pilot dims, the M_tau×N_nu×N_t Gaussian pilot tensor and the guard fill.

    With a ``cyclic`` guard the guard cells repeat the pilot block periodically;
    with a ``zero`` guard they stay empty.
    """

    dims: PilotDims
    pilots: ComplexArray
    guard: str = GUARD_ZERO

    @property
    def cyclic(self) -> bool:
        return self.guard == GUARD_CYCLIC

    @property
    def n_t(self) -> int:
        return self.pilots.shape[2]


@dataclass(frozen=True, eq=False)
class SensingSystem:
    """Measurement vector y and sensing matrix Psi with their index maps."""

    y: ComplexArray
    psi: ComplexArray
    dims: PilotDims
    n_t: int

    def row_index(self, ell: int, k: int) -> int:
        """0-based row of received pilot (ℓ, k)."""
        return ell * self.dims.N_nu + k + self.dims.N_nu // 2

    def column_index(self, ell: int, k: int, r: int) -> int:
        return column_index(ell, k, r, self.dims.M_g, self.dims.N_g, self.n_t)

    def column_triple(self, column: int) -> SupportTriple:
        return column_triple(column, self.dims.M_g, self.dims.N_g, self.n_t)


def column_index(ell: int, k: int, r: int, M_g: int, N_g: int, n_t: int) -> int:
    """0-based column of truncated-channel entry (ℓ′, k′, r)."""
    block = r + n_t // 2
    return block * M_g * N_g + ell * N_g + k + N_g // 2


def column_triple(column: int, M_g: int, N_g: int, n_t: int) -> SupportTriple:
    block, within = divmod(column, M_g * N_g)
    ell, k_off = divmod(within, N_g)
    return ell, k_off - N_g // 2, block - n_t // 2


# =============================================================================
# Estimator Types
# =============================================================================


@dataclass(frozen=True)
class SomppParams:
    """Parameters of the structured matching pursuit."""

    N_p: int = 6
    D: int = 1
    epsilon: float = 0.9
    residual_tol: Optional[float] = None
    max_iter: Optional[int] = None

    def __post_init__(self):
        from otfs_bench.exceptions import ConfigurationError

        if self.N_p < 1:
            raise ConfigurationError(f"N_p must be >= 1, got {self.N_p}")
        if self.D < 1:
            raise ConfigurationError(f"D must be >= 1, got {self.D}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigurationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.max_iter is not None and self.max_iter < self.N_p:
            raise ConfigurationError(f"max_iter must be >= N_p={self.N_p}, got {self.max_iter}")


@dataclass(frozen=True)
class SupportSet:
    """Selected Psi columns, ascending, with their (ℓ′, k′, r) triples."""

    columns: Tuple[int, ...] = ()
    triples: FrozenSet[SupportTriple] = frozenset()

    def __len__(self) -> int:
        return len(self.columns)


@dataclass
class EstimateRecord:
    """Estimator output: vector or tensor estimate, support and metadata."""

    h_hat: ComplexArray
    support: SupportSet = field(default_factory=SupportSet)
    nmse: float = math.nan
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def flags(self) -> Flags:
        return tuple(self.meta.get("flags", ()))


@dataclass(frozen=True)
class ImpulseLayout:
    """Per-antenna impulse positions (ℓ_p, k_p) in signed Doppler convention."""

    positions: Tuple[Tuple[int, int], ...]
    spacing: Tuple[int, int]
    footprint: Tuple[int, int]
    insufficient_guard: bool


# =============================================================================
# Experiment Types
# =============================================================================


@dataclass(frozen=True)
class EstimatorConfig:
    id: EstimatorId
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SweepConfig:
    axis: SweepAxis
    values: Tuple[float, ...]


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description."""

    otfs: OtfsConfig
    channel: ChannelGenParams
    pilot: Dict[str, Any]
    n_t: int
    snr_db: Optional[float]
    estimators: Tuple[EstimatorConfig, ...]
    sweep: SweepConfig
    trials: int = 1
    base_seed: int = 0
    exclude_flagged: bool = False
    record_runtime: bool = False
    dump_channels: bool = False
    profile: str = "desk"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "profile": self.profile,
            "otfs": self.otfs.to_dict(),
            "channel": self.channel.to_dict(),
            "pilot": dict(self.pilot),
            "n_t": self.n_t,
            "snr_db": self.snr_db,
            "estimators": [{"id": e.id, "params": dict(e.params)} for e in self.estimators],
            "sweep": {"axis": self.sweep.axis, "values": list(self.sweep.values)},
            "trials": self.trials,
            "base_seed": self.base_seed,
            "exclude_flagged": self.exclude_flagged,
            "record_runtime": self.record_runtime,
            "dump_channels": self.dump_channels,
        }


@dataclass(frozen=True)
class ResultRow:
    sweep_axis: SweepAxis
    sweep_value: float
    estimator: EstimatorId
    seed: Seed
    nmse: float
    runtime_ms: Optional[float]
    flags: Flags
    eta: float
    snr_db: Optional[float]
    n_t: int


@dataclass(frozen=True)
class AggregateRow:
    sweep_value: float
    estimator: EstimatorId
    mean_nmse: float
    median_nmse: float
    std_err: float
    trials: int
    flagged: int


ResultTable = List[ResultRow]
