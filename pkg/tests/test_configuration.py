import json

import pytest

from otfs_bench.configuration.profiles import ProfileRegistry
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.utils.user_configuration import build_experiment, load_config, read_config_file


def _write(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestLoadConfig:
    def test_defaults_are_desk_scale(self):
        config = load_config()
        assert config["profile"] == "desk"
        assert config["otfs"]["M"] == 64 and config["otfs"]["N"] == 16
        assert config["n_t"] == 16
        assert [e["id"] for e in config["estimators"]] == ["impulse", "omp", "somp3d"]

    def test_paper_profile(self):
        config = load_config(profile="paper")
        assert (config["otfs"]["M"], config["otfs"]["N"], config["otfs"]["N_cp"]) == (600, 12, 150)
        assert config["n_t"] == 32
        assert config["channel"]["N_s"] == 20
        assert config["channel"]["tau_max"] == pytest.approx(45 / (600 * 15e3))

    def test_profile_named_in_file(self, tmp_path):
        config = load_config(_write(tmp_path, {"profile": "paper", "trials": 3}))
        assert config["profile"] == "paper"
        assert config["trials"] == 3
        assert config["otfs"]["M"] == 600

    def test_overrides_win(self, tmp_path):
        config = load_config(_write(tmp_path, {"trials": 3}), overrides={"trials": 5})
        assert config["trials"] == 5

    def test_nested_merge_keeps_siblings(self):
        config = load_config(overrides={"channel": {"v": 30.0}})
        assert config["channel"]["v"] == 30.0
        assert config["channel"]["N_p"] == 6

    def test_pilot_is_replaced(self):
        config = load_config(overrides={"pilot": {"M_tau": 20, "N_nu": 8}})
        assert config["pilot"] == {"M_tau": 20, "N_nu": 8}

    def test_estimators_are_replaced(self):
        config = load_config(overrides={"estimators": [{"id": "omp"}]})
        assert config["estimators"] == [{"id": "omp", "params": {}}]

    @pytest.mark.parametrize(
        "overrides,key",
        [
            ({"bogus": 1}, "bogus"),
            ({"otfs": {"X": 1}}, "otfs.X"),
            ({"pilot": {"eta": 0.5, "ratio": 1}}, "pilot.ratio"),
            ({"estimators": [{"id": "omp", "K": 3}]}, "estimators.K"),
        ],
    )
    def test_unknown_keys(self, overrides, key):
        with pytest.raises(ConfigurationError, match=f"Unknown config key '{key}'"):
            load_config(overrides=overrides)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            load_config(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Invalid JSON"):
            read_config_file(path)

    def test_non_object(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_config_file(_write(tmp_path, [1, 2]))

    def test_unknown_profile(self):
        with pytest.raises(ConfigurationError):
            load_config(profile="lab")


class TestBuildExperiment:
    def test_fixture(self, fixture_config_path):
        experiment = build_experiment(load_config(fixture_config_path))
        assert experiment.n_t == 4
        assert experiment.sweep.values == (0.4, 0.5)
        assert experiment.trials == 2
        assert experiment.estimators[2].params == {"epsilon": 0.9}

    @pytest.mark.parametrize(
        "overrides",
        [
            {"n_t": 3},
            {"n_t": 0},
            {"trials": 0},
            {"sweep": {"axis": "bandwidth"}},
            {"sweep": {"values": []}},
            {"estimators": []},
            {"estimators": [{"id": "omp"}, {"id": "omp"}]},
            {"estimators": [{"id": "mmse"}]},
            {"otfs": {"M": 63}},
            {"pilot": {"M_tau": 20}},
            {"pilot": {}},
            {"pilot": {"eta": 0.5, "guard": "mirror"}},
            {"snr_db": "loud"},
        ],
    )
    def test_rejects(self, overrides):
        with pytest.raises(ConfigurationError):
            build_experiment(load_config(overrides=overrides))

    def test_guard_mode(self):
        assert load_config()["pilot"] == {"eta": 0.5, "guard": "cyclic"}
        zero_guard = load_config(overrides={"pilot": {"eta": 0.5, "guard": "zero"}})
        experiment = build_experiment(zero_guard)
        assert experiment.pilot["guard"] == "zero"

    def test_round_trips_through_to_dict(self):
        experiment = build_experiment(load_config(overrides={"snr_db": None}))
        assert experiment.to_dict()["snr_db"] is None
        assert experiment.to_dict()["otfs"]["f_c"] == 2.15e9


def test_profile_registry():
    assert ProfileRegistry().list_profile_ids() == ["desk", "paper"]
