"""
Module: otfs_bench.cli.main

CLI entry point for the OTFS channel-estimation bench.
Runs experiments and sweeps, the validation suite and the overhead analysis.
"""

from typing import List, Optional

import typer

from otfs_bench.configuration.settings import ApplicationSettings
from otfs_bench.constants import MSG_PROFILE_LOADED, MSG_RESULTS_WRITTEN, MSG_SWEEP_VALUE
from otfs_bench.core.harness import aggregate, run_sweep
from otfs_bench.core.overhead import overhead_table
from otfs_bench.core.state import TrialState
from otfs_bench.core.validation import default_checks
from otfs_bench.exceptions import OtfsBenchError, TelemetryError
from otfs_bench.services import telemetry
from otfs_bench.services.results import (dump_sensing, dump_trial_channel, write_meta_json,
                                         write_results_csv)
from otfs_bench.types import ExperimentConfig, UserConfig
from otfs_bench.ui import console as ui
from otfs_bench.utils.user_configuration import build_experiment, load_config

app_settings = ApplicationSettings()
app = typer.Typer(help=app_settings.name, no_args_is_help=True)

ConfigOption = typer.Option(None, "--config", "-c", help="Experiment config (JSON).")
OutOption = typer.Option(None, "--out", "-o", help="Output directory.")
TrialsOption = typer.Option(None, "--trials", "-t", min=1, help="Trials per sweep value.")
SeedOption = typer.Option(None, "--seed", "-s", help="Base seed.")
ProfileOption = typer.Option(None, "--profile", "-p", help="Parameter profile: desk or paper.")
LogfireOption = typer.Option(False, "--logfire", help="Enable Logfire tracing.")
NoTelemetryOption = typer.Option(False, "--no-telemetry", help="Disable crash reporting.")


def _parse_values(values: str) -> List[float]:
    try:
        return [float(v) for v in values.replace(" ", "").split(",") if v]
    except ValueError:
        raise typer.BadParameter(f"expected a comma-separated list of numbers, got '{values}'")


def _setup_telemetry(logfire_enabled: bool, no_telemetry: bool) -> None:
    telemetry.reset()
    try:
        telemetry.setup(enabled=not no_telemetry)
        telemetry.setup_tracing(logfire_enabled)
    except TelemetryError as e:
        ui.warning(str(e))


def _overrides(trials: Optional[int], seed: Optional[int]) -> UserConfig:
    overrides: UserConfig = {}
    if trials is not None:
        overrides["trials"] = trials
    if seed is not None:
        overrides["base_seed"] = seed
    return overrides


def _execute(experiment: ExperimentConfig, out: Optional[str], write_sensing: bool) -> None:
    settings = ApplicationSettings(out)
    paths = settings.paths
    ui.info(MSG_PROFILE_LOADED.format(profile=experiment.profile))
    wrote_sensing = False

    def trial_hook(state: TrialState) -> None:
        nonlocal wrote_sensing
        if experiment.dump_channels:
            dump_trial_channel(state, paths.channel_dir)
        if write_sensing and not wrote_sensing and state.system is not None:
            dump_sensing(state.system, paths.sensing_file)
            wrote_sensing = True

    axis, trials = experiment.sweep.axis, experiment.trials
    for value in experiment.sweep.values:
        ui.muted(MSG_SWEEP_VALUE.format(axis=axis, value=value, trials=trials))
    with ui.status(f"Running {len(experiment.sweep.values) * experiment.trials} trial(s)"):
        rows = run_sweep(experiment, trial_hook=trial_hook)

    write_results_csv(rows, paths.results_file)
    write_meta_json(experiment, paths.meta_file, {"rows": len(rows)})
    ui.results_table(experiment.sweep.axis, aggregate(rows, experiment.exclude_flagged))
    ui.success(MSG_RESULTS_WRITTEN.format(path=paths.results_file))


def _guard(action) -> None:
    """Run a command body, turning bench errors into an error panel and exit code 1."""
    try:
        action()
    except OtfsBenchError as e:
        ui.error(str(e))
        raise typer.Exit(code=1)
    except (typer.Exit, typer.BadParameter):
        raise
    except Exception as e:
        telemetry.capture_exception(e)
        raise


@app.command()
def run(
    config: Optional[str] = ConfigOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    profile: Optional[str] = ProfileOption,
    dump_sensing_file: bool = typer.Option(
        False, "--dump-sensing", help="Write the first trial's sensing system as binary."
    ),
    logfire_enabled: bool = LogfireOption,
    no_telemetry: bool = NoTelemetryOption,
):
    """Run the experiment described by a config file."""
    _setup_telemetry(logfire_enabled, no_telemetry)

    def action():
        merged = load_config(config, profile, _overrides(trials, seed))
        _execute(build_experiment(merged), out, dump_sensing_file)

    _guard(action)


@app.command()
def sweep(
    axis: str = typer.Option(..., "--axis", "-a", help="eta, nt, snr, epsilon or speed."),
    values: str = typer.Option(..., "--values", "-v", help="Comma-separated sweep values."),
    config: Optional[str] = ConfigOption,
    out: Optional[str] = OutOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    profile: Optional[str] = ProfileOption,
    logfire_enabled: bool = LogfireOption,
    no_telemetry: bool = NoTelemetryOption,
):
    """Sweep one axis, overriding the config's sweep."""
    _setup_telemetry(logfire_enabled, no_telemetry)
    parsed = _parse_values(values)

    def action():
        overrides = {**_overrides(trials, seed), "sweep": {"axis": axis, "values": parsed}}
        merged = load_config(config, profile, overrides)
        _execute(build_experiment(merged), out, False)

    _guard(action)


@app.command()
def validate(
    check: Optional[List[str]] = typer.Option(
        None, "--check", help="Run only the named check (repeatable)."
    ),
    no_telemetry: bool = NoTelemetryOption,
):
    """Run the property and oracle checks and print pass/fail."""
    _setup_telemetry(False, no_telemetry)

    def action():
        results = default_checks.run(check or None, ui_logger=ui)
        ui.check_table(results)
        if not all(result.passed for result in results):
            raise typer.Exit(code=1)

    _guard(action)


@app.command()
def overhead(
    antennas: str = typer.Option("4,8,16,32,64", "--antennas", help="Antenna counts."),
    config: Optional[str] = ConfigOption,
    profile: Optional[str] = ProfileOption,
):
    """Compare impulse and structured-sparse pilot overhead scaling."""

    def action():
        experiment = build_experiment(load_config(config, profile))
        counts = [int(n) for n in _parse_values(antennas)]
        ui.overhead_table(overhead_table(experiment.otfs, experiment.channel, counts))

    _guard(action)


@app.command()
def version():
    """Show version and exit."""
    ui.version()


if __name__ == "__main__":
    app()
