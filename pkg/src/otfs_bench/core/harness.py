"""Module: otfs_bench.core.harness

Monte-Carlo experiment harness.

Resolves the pilot layout for a target overhead, runs seeded trials through
the trial pipeline and folds the per-trial rows into NMSE aggregates.
"""

import dataclasses
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from otfs_bench.constants import (AXIS_EPSILON, AXIS_ETA, AXIS_NT, AXIS_SNR, AXIS_SPEED,
                                  ERROR_ETA_INFEASIBLE, ESTIMATOR_SOMP3D)
from otfs_bench.core.channel import channel_support
from otfs_bench.core.pipeline.channel_stage import ChannelStage
from otfs_bench.core.pipeline.coordinator import TrialCoordinator
from otfs_bench.core.pipeline.estimation_stage import EstimationStage
from otfs_bench.core.pipeline.pilot_stage import ImpulsePilotStage, SparsePilotStage
from otfs_bench.core.sensing import validate_dims
from otfs_bench.core.state import TrialState
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.services.telemetry import trace
from otfs_bench.types import (AggregateRow, ChannelSupport, EstimatorConfig, ExperimentConfig,
                              OtfsConfig, PilotDims, ResultRow, ResultTable, UILogger)

TrialHook = Callable[[TrialState], None]


def resolve_overhead(eta: float, cfg: OtfsConfig, support: ChannelSupport) -> PilotDims:
    """Largest pilot layout whose overhead (M_tau+M_g)(N_nu+N_g)/(MN) does not exceed eta.

    Guards equal the channel support (M_g = M_max, N_g = N_max); ties go to the
    larger N_nu.

    Raises:
        ConfigurationError: If eta is outside (0, 1] or below the smallest feasible layout.
    """
    if not 0.0 < eta <= 1.0:
        raise ConfigurationError(f"pilot overhead ratio must lie in (0, 1], got {eta}")
    M_g, N_g = support.M_max, support.N_max
    total = cfg.M * cfg.N
    best: Optional[Tuple[int, int, int]] = None
    for N_nu in range(support.N_max + support.N_max % 2, cfg.N - N_g + 1, 2):
        budget = int(np.floor(eta * total / (N_nu + N_g) + 1e-9)) - M_g
        M_tau = min(budget, cfg.M - M_g)
        if M_tau < support.M_max:
            continue
        cells = (M_tau + M_g) * (N_nu + N_g)
        if best is None or (cells, N_nu) > best[:2]:
            best = (cells, N_nu, M_tau)
    if best is None:
        minimum = (support.M_max + M_g) * (support.N_max + N_g) / total
        raise ConfigurationError(ERROR_ETA_INFEASIBLE.format(eta=eta, minimum=f"{minimum:.4f}"))
    _, N_nu, M_tau = best
    return PilotDims(M_tau=M_tau, N_nu=N_nu, M_g=M_g, N_g=N_g)


def experiment_for_value(cfg: ExperimentConfig, value: float) -> ExperimentConfig:
    """Apply one sweep value to the experiment."""
    axis = cfg.sweep.axis
    if axis == AXIS_ETA:
        pilot = {"eta": float(value)}
        if "guard" in cfg.pilot:
            pilot["guard"] = cfg.pilot["guard"]
        return dataclasses.replace(cfg, pilot=pilot)
    if axis == AXIS_NT:
        return dataclasses.replace(cfg, n_t=int(value))
    if axis == AXIS_SNR:
        return dataclasses.replace(cfg, snr_db=float(value))
    if axis == AXIS_SPEED:
        return dataclasses.replace(cfg, channel=dataclasses.replace(cfg.channel, v=float(value)))
    if axis == AXIS_EPSILON:
        estimators = tuple(
            EstimatorConfig(e.id, {**e.params, "epsilon": float(value)})
            if e.id == ESTIMATOR_SOMP3D
            else e
            for e in cfg.estimators
        )
        return dataclasses.replace(cfg, estimators=estimators)
    raise ConfigurationError(f"Unknown sweep axis '{axis}'")


def pilot_dims(cfg: ExperimentConfig, support: ChannelSupport) -> PilotDims:
    """Pilot dims from an explicit {M_tau, N_nu} block or a target overhead."""
    if "M_tau" in cfg.pilot:
        dims = PilotDims(
            M_tau=int(cfg.pilot["M_tau"]),
            N_nu=int(cfg.pilot["N_nu"]),
            M_g=int(cfg.pilot.get("M_g", support.M_max)),
            N_g=int(cfg.pilot.get("N_g", support.N_max)),
        )
    else:
        dims = resolve_overhead(float(cfg.pilot["eta"]), cfg.otfs, support)
    validate_dims(dims, cfg.otfs, support)
    return dims


def build_coordinator(ui_logger: Optional[UILogger] = None) -> TrialCoordinator:
    coordinator = TrialCoordinator(ui_logger)
    coordinator.register_stage(ChannelStage())
    coordinator.register_stage(SparsePilotStage())
    coordinator.register_stage(ImpulsePilotStage())
    coordinator.register_stage(EstimationStage(ui_logger=ui_logger))
    return coordinator


def execute_trial(
    cfg: ExperimentConfig, sweep_value: float, seed: int, ui_logger: Optional[UILogger] = None
) -> TrialState:
    """Run the full pipeline for one (sweep value, seed) and return its state."""
    experiment = experiment_for_value(cfg, sweep_value)
    support = channel_support(experiment.channel, experiment.otfs)
    dims = pilot_dims(experiment, support)
    state = TrialState(
        experiment=experiment,
        sweep_value=sweep_value,
        seed=seed,
        dims=dims,
        eta=dims.overhead(experiment.otfs),
        support=support,
    )
    with trace("trial", seed=seed, sweep_value=sweep_value):
        return build_coordinator(ui_logger).run(state)


def rows_from_state(state: TrialState) -> List[ResultRow]:
    experiment = state.experiment
    rows = []
    for config in experiment.estimators:
        record = state.records[config.id]
        rows.append(
            ResultRow(
                sweep_axis=experiment.sweep.axis,
                sweep_value=float(state.sweep_value),
                estimator=config.id,
                seed=state.seed,
                nmse=float(record.nmse),
                runtime_ms=state.runtime_ms[config.id] if experiment.record_runtime else None,
                flags=record.flags,
                eta=state.eta,
                snr_db=experiment.snr_db,
                n_t=experiment.n_t,
            )
        )
    return rows


def run_trial(
    cfg: ExperimentConfig, sweep_value: float, seed: int, ui_logger: Optional[UILogger] = None
) -> List[ResultRow]:
    """One ResultRow per configured estimator; deterministic in (cfg, sweep_value, seed)."""
    return rows_from_state(execute_trial(cfg, sweep_value, seed, ui_logger))


def run_sweep(
    cfg: ExperimentConfig,
    ui_logger: Optional[UILogger] = None,
    trial_hook: Optional[TrialHook] = None,
) -> ResultTable:
    """Iterate sweep values × trials with seeds base_seed + trial index."""
    table: ResultTable = []
    for value in cfg.sweep.values:
        if ui_logger:
            ui_logger.muted(f"{cfg.sweep.axis} = {value}: {cfg.trials} trial(s)")
        with trace("sweep_value", axis=cfg.sweep.axis, value=value):
            for trial in range(cfg.trials):
                state = execute_trial(cfg, value, cfg.base_seed + trial)
                if trial_hook:
                    trial_hook(state)
                table.extend(rows_from_state(state))
    return table


def aggregate(rows: ResultTable, exclude_flagged: bool = False) -> List[AggregateRow]:
    """Mean/median NMSE per (sweep value, estimator), in first-appearance order."""
    groups: Dict[Tuple[float, str], List[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.sweep_value, row.estimator), []).append(row)

    out = []
    for (value, estimator), members in groups.items():
        flagged = sum(1 for row in members if row.flags)
        kept = [row for row in members if not (exclude_flagged and row.flags)]
        values = np.array([row.nmse for row in kept], dtype=float)
        if values.size == 0:
            mean = median = std_err = float("nan")
        else:
            mean, median = float(values.mean()), float(np.median(values))
            std_err = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
        out.append(
            AggregateRow(
                sweep_value=value,
                estimator=estimator,
                mean_nmse=mean,
                median_nmse=median,
                std_err=std_err,
                trials=len(kept),
                flagged=flagged,
            )
        )
    return out
