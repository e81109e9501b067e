"""Module: otfs_bench.core.validation

Property and oracle checks behind the ``validate`` command.

Each check builds a small instance, measures one number and compares it with
a threshold. Checks are registered by name so the CLI can run a subset.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from otfs_bench.constants import GUARD_MODES, GUARD_ZERO
from otfs_bench.core.channel import (array_taps, dda_channel, dds_cir, generate_path_set,
                                     truncate_and_vectorize)
from otfs_bench.core.estimators.lifting import burst_indices, burst_start
from otfs_bench.core.estimators.metrics import nmse_dda
from otfs_bench.core.estimators.omp import omp
from otfs_bench.core.estimators.somp import somp3d
from otfs_bench.core.modem import (apply_channel, compute_h_dd, isfft, lemma1_predict,
                                   otfs_demodulate, otfs_modulate, sfft, superpose_channels)
from otfs_bench.core.sensing import data_mask, embed_pilots, gen_pilots, sensing_system
from otfs_bench.core.synthetic import (on_grid_path_set, random_frame, random_tone_channel,
                                       structured_instance)
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.types import (ChannelGenParams, OtfsConfig, PilotDims, SomppParams, TapChannel,
                              UILogger)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    run: Callable[[], CheckResult]


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def check_round_trip() -> CheckResult:
    worst = 0.0
    for seed, (M, N) in enumerate([(4, 4), (8, 4), (16, 8), (64, 16)]):
        X = random_frame(OtfsConfig(M=M, N=N, N_cp=0, delta_f=15e3), seed)
        worst = max(worst, float(np.max(np.abs(sfft(isfft(X)) - X))))
    return CheckResult("round_trip", worst < 1e-10, worst, 1e-10, "max |sfft(isfft(X)) - X|")


def check_loopback() -> CheckResult:
    worst = 0.0
    for seed, (M, N, N_cp) in enumerate([(16, 8, 4), (64, 16, 16)]):
        cfg = OtfsConfig(M=M, N=N, N_cp=N_cp, delta_f=15e3)
        X = random_frame(cfg, seed)
        identity = TapChannel(taps=np.ones((cfg.frame_length, 1), dtype=complex))
        Y = otfs_demodulate(apply_channel(otfs_modulate(X, cfg), identity), cfg)
        worst = max(worst, float(np.max(np.abs(Y - X))))
    return CheckResult("loopback", worst < 1e-10, worst, 1e-10, "identity channel, no noise")


def lemma1_errors(
    frame_sizes: Sequence[int] = (8, 16, 32, 64),
    M: int = 16,
    N_cp: int = 4,
    L: int = 2,
    tones: Sequence[float] = (0.05, -0.04),
    seed: int = 0,
) -> List[float]:
    """Relative error of the convolution prediction against the sampled chain, per N."""
    errors = []
    for N in frame_sizes:
        cfg = OtfsConfig(M=M, N=N, N_cp=N_cp, delta_f=15e3)
        channel = random_tone_channel(cfg, L, tones, seed)
        X = random_frame(cfg, seed + 1)
        physical = otfs_demodulate(apply_channel(otfs_modulate(X, cfg), channel), cfg, True)
        predicted = lemma1_predict(X, compute_h_dd(channel, cfg), cfg)
        errors.append(_relative(predicted, physical))
    return errors


def check_lemma1() -> CheckResult:
    errors = lemma1_errors()
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    detail = ", ".join(f"{e:.2e}" for e in errors)
    return CheckResult("lemma1_decay", decreasing and errors[-1] < 5e-2, errors[-1], 5e-2, detail)


FRACTIONAL_TONES = (0.3, -0.5, 0.7)


def fractional_doppler_bound(tones: Sequence[float], N: int) -> float:
    """Upper envelope 2·max|sin πf|/√N of the prediction error for fractional tones.

    H^DD interpolates the taps periodically between symbol starts. A tone that
    does not complete whole cycles over the frame jumps by |1 - e^{j2πf}| at the
    wrap, and the interpolation error sits next to that jump, so its share of
    the frame energy falls like 1/N.
    """
    return 2.0 * float(np.max(np.abs(np.sin(np.pi * np.asarray(tones))))) / np.sqrt(N)


def check_lemma1_fractional() -> CheckResult:
    sizes = (8, 16, 32, 64)
    errors = lemma1_errors(sizes, tones=FRACTIONAL_TONES)
    ratios = [e / fractional_doppler_bound(FRACTIONAL_TONES, N) for e, N in zip(errors, sizes)]
    worst = max(ratios)
    detail = ", ".join(f"{e:.2e}" for e in errors)
    return CheckResult("lemma1_fractional", worst <= 1.0, worst, 1.0, detail)


def dds_identity_error(
    cfg: OtfsConfig, n_t: int, seed: int, params: Optional[ChannelGenParams] = None
) -> float:
    """Largest per-antenna relative gap between the closed-form H^DDS and the DFT of the taps."""
    params = params or ChannelGenParams()
    path_set = generate_path_set(params, cfg, seed, n_t=n_t)
    L = cfg.N_cp - 1
    closed = dds_cir(path_set, cfg, n_t, L, params.rolloff)
    taps = array_taps(path_set, cfg, L, n_t, params.rolloff)
    return max(_relative(closed[:, :, p], compute_h_dd(taps[p], cfg)) for p in range(n_t))


def check_dds_identity() -> CheckResult:
    cfg = OtfsConfig(M=64, N=16, N_cp=16, delta_f=15e3)
    worst = max(dds_identity_error(cfg, 16, seed) for seed in range(3))
    return CheckResult("dds_identity", worst < 1e-10, worst, 1e-10, "3 path sets, N_t=16")


def sensing_model_error(
    cfg: Optional[OtfsConfig] = None,
    dims: Optional[PilotDims] = None,
    n_t: int = 4,
    cells=((0, 1, 1, 1.0), (1, 0, -1, 0.8j)),
    seed: int = 0,
    guard: str = GUARD_ZERO,
    with_data: bool = False,
) -> float:
    """‖y - Ψh‖/‖y‖ for a noiseless on-grid channel sent through the full modem chain.

    With ``with_data`` every antenna also fills its data cells with unit-power
    symbols, which the model ignores.
    """
    cfg = cfg or OtfsConfig(M=32, N=64, N_cp=2, delta_f=15e3)
    dims = dims or PilotDims(M_tau=8, N_nu=8, M_g=2, N_g=4)
    L = cfg.N_cp - 1
    path_set = on_grid_path_set(cfg, n_t, cells)
    pattern = gen_pilots(dims, n_t, seed, guard=guard)
    cells_mask = data_mask(dims, cfg)
    signals = []
    for p in range(n_t):
        data = random_frame(cfg, seed + 1 + p)[cells_mask] if with_data else None
        signals.append(otfs_modulate(embed_pilots(pattern, cfg, p, data=data), cfg))
    received = otfs_demodulate(
        superpose_channels(signals, array_taps(path_set, cfg, L, n_t)), cfg, channel_scaled=True
    )
    system = sensing_system(received, pattern, cfg)
    h = truncate_and_vectorize(dda_channel(dds_cir(path_set, cfg, n_t, L)), dims.M_g, dims.N_g)
    return _relative(system.psi @ h, system.y)


def check_sensing_model() -> CheckResult:
    error = max(sensing_model_error(guard=guard) for guard in GUARD_MODES)
    detail = f"on-grid, N=64, N_t=4, guards {'/'.join(GUARD_MODES)}"
    return CheckResult("sensing_model", error < 1e-2, error, 1e-2, detail)


def lifting_failures(max_antennas: int = 16) -> int:
    """Count (N_t, D, start) cases where the lifted argmax misses the burst."""
    failures = 0
    for n_t in range(1, max_antennas + 1):
        for D in range(1, n_t + 1):
            for start in range(n_t):
                e_theta = np.zeros(n_t)
                e_theta[burst_indices(start, D, n_t)] = 1.0
                found = burst_start(e_theta, D)
                if D == n_t:
                    ok = set(burst_indices(found, D, n_t)) == set(range(n_t))
                else:
                    ok = found == start
                failures += not ok
    return failures


def check_lifting() -> CheckResult:
    failures = lifting_failures()
    return CheckResult("lifting", failures == 0, float(failures), 0.0, "N_t <= 16, all D, starts")


def recovery_rates(seeds: Sequence[int], n_t: int = 8, D: int = 2) -> Dict[str, float]:
    """Fraction of constructed single-path instances recovered with NMSE < 1e-4."""
    cfg = OtfsConfig(M=32, N=32, N_cp=4, delta_f=15e3)
    dims = PilotDims(M_tau=16, N_nu=16, M_g=4, N_g=4)
    wins = {"somp3d": 0, "omp": 0}
    for seed in seeds:
        system, h, columns = structured_instance(dims, cfg, n_t, D, seed)
        triple = (dims.M_g, dims.N_g, n_t)
        structured = somp3d(system.y, system.psi, triple, SomppParams(N_p=1, D=D))
        greedy = omp(system.y, system.psi, columns.size, triple)
        wins["somp3d"] += nmse_dda(structured.h_hat, h) < 1e-4
        wins["omp"] += nmse_dda(greedy.h_hat, h) < 1e-4
    return {name: count / len(seeds) for name, count in wins.items()}


def check_recovery() -> CheckResult:
    rates = recovery_rates(range(10))
    worst = min(rates.values())
    detail = ", ".join(f"{name} {rate:.0%}" for name, rate in rates.items())
    return CheckResult("noiseless_recovery", worst >= 0.95, worst, 0.95, detail)


class CheckRegistry:
    def __init__(self):
        self._checks: Dict[str, Check] = {}

    def register(self, check: Check) -> None:
        self._checks[check.name] = check

    def names(self) -> List[str]:
        return list(self._checks)

    def run(
        self, names: Optional[Sequence[str]] = None, ui_logger: Optional[UILogger] = None
    ) -> List[CheckResult]:
        unknown = [name for name in (names or ()) if name not in self._checks]
        if unknown:
            raise ConfigurationError(
                f"Unknown check(s) {', '.join(unknown)}; available: {', '.join(self._checks)}"
            )
        selected = [self._checks[name] for name in (names or self._checks)]
        results = []
        for check in selected:
            if ui_logger:
                ui_logger.muted(check.description, spaces=2)
            results.append(check.run())
        return results


default_checks = CheckRegistry()
for _check in (
    Check("round_trip", "Unitary SFFT/ISFFT round trip", check_round_trip),
    Check("loopback", "Modulate/demodulate loopback", check_loopback),
    Check("lemma1_decay", "Convolution prediction error decays with N", check_lemma1),
    Check(
        "lemma1_fractional",
        "Fractional Doppler error stays under its envelope",
        check_lemma1_fractional,
    ),
    Check("dds_identity", "Closed-form H^DDS equals DFT of taps", check_dds_identity),
    Check("sensing_model", "Chain output matches the sensing model", check_sensing_model),
    Check("lifting", "Lifted argmax finds every burst start", check_lifting),
    Check("noiseless_recovery", "Noiseless structured recovery", check_recovery),
):
    default_checks.register(_check)
