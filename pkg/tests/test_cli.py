import pytest
from typer.testing import CliRunner

from otfs_bench.cli import app
from otfs_bench.constants import ENV_SENTRY_DSN
from otfs_bench.services.results import load_sensing, read_results_csv

runner = CliRunner()


@pytest.fixture(autouse=True)
def no_sentry(monkeypatch):
    monkeypatch.delenv(ENV_SENTRY_DSN, raising=False)


def _run(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def test_version():
    result = _run("version")
    assert result.exit_code == 0
    assert "OTFS Bench" in result.output


def test_run_is_byte_deterministic(tmp_path, fixture_config_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        result = _run("run", "--config", fixture_config_path, "--seed", 7, "--out", out)
        assert result.exit_code == 0, result.output
        outputs.append((out / "results.csv").read_bytes())
        assert (out / "meta.json").exists()
    assert outputs[0] == outputs[1]

    rows = read_results_csv(tmp_path / "a" / "results.csv")
    assert len(rows) == 2 * 2 * 3
    assert {row["seed"] for row in rows} == {"7", "8"}
    assert [row["estimator"] for row in rows[:3]] == ["impulse", "omp", "somp3d"]


def test_run_dumps_sensing_system(tmp_path, fixture_config_path):
    result = _run(
        "run", "--config", fixture_config_path, "--trials", 1, "--out", tmp_path, "--dump-sensing"
    )
    assert result.exit_code == 0, result.output
    psi, y = load_sensing(tmp_path / "sensing.bin")
    assert psi.shape[0] == y.shape[0]


def test_sweep_overrides_axis(tmp_path, fixture_config_path):
    result = _run(
        "sweep", "--axis", "nt", "--values", "2,4", "--config", fixture_config_path,
        "--trials", 1, "--out", tmp_path,
    )
    assert result.exit_code == 0, result.output
    rows = read_results_csv(tmp_path / "results.csv")
    assert [row["n_t"] for row in rows] == ["2"] * 3 + ["4"] * 3
    assert {row["sweep_axis"] for row in rows} == {"nt"}


def test_missing_config_exits_with_error(tmp_path):
    result = _run("run", "--config", tmp_path / "missing.json", "--out", tmp_path)
    assert result.exit_code == 1
    assert "Config file not found" in result.output


def test_invalid_config_exits_with_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n_t": 3}', encoding="utf-8")
    result = _run("run", "--config", path, "--out", tmp_path)
    assert result.exit_code == 1
    assert not (tmp_path / "results.csv").exists()


def test_bad_sweep_values():
    result = _run("sweep", "--axis", "eta", "--values", "a,b")
    assert result.exit_code != 0


def test_overhead():
    result = _run("overhead", "--antennas", "8,16")
    assert result.exit_code == 0
    assert "Pilot Overhead" in result.output


def test_validate_subset():
    result = _run("validate", "--check", "lifting", "--check", "loopback")
    assert result.exit_code == 0, result.output
    assert "lifting" in result.output and "loopback" in result.output


def test_validate_unknown_check():
    result = _run("validate", "--check", "nope")
    assert result.exit_code == 1


def test_unknown_profile_exits_with_error(tmp_path):
    result = _run("run", "--profile", "huge", "--out", tmp_path)
    assert result.exit_code == 1
    assert "huge" in result.output


def test_overhead_with_paper_profile():
    result = _run("overhead", "--profile", "paper", "--antennas", "32")
    assert result.exit_code == 0, result.output
    assert "Pilot Overhead" in result.output
