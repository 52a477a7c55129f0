"""
Command Line Tests
==================

End-to-end runs of every command on a small scenario: tables, manifest,
error records, exit codes and reproducibility.

Author: wavepath Team
Version: 1.0.0
"""

import hashlib
import json
import math

import pandas as pd
import pytest

from shared.schemas import TABLE_COLUMNS, Command
from wavepath.cli import commands
from wavepath.cli.main import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, main, run

EXPECTED_TABLES = {
    Command.SIMULATE: ["trajectories", "moments"],
    Command.BOHM: ["bohm", "bohm_summary"],
    Command.ENSEMBLE: ["ensemble", "equivariance", "ensemble_trajectories"],
    Command.WEAK_TRAJ: ["weak_traj", "weak_trajectories"],
    Command.WEAK_MOMENTUM: ["weak_momentum"],
    Command.RECURRENCE: ["recurrence", "recurrence_peaks", "recurrence_crossings"],
    Command.PROPAGATOR_CHECK: ["propagator_check"],
    Command.IDENTITY_CHECK: ["identity"],
}


@pytest.fixture(autouse=True)
def few_residual_samples(monkeypatch):
    monkeypatch.setattr(commands, "RESIDUAL_SAMPLES", 20)


@pytest.fixture
def config_path(tmp_path, static_config_dict):
    path = tmp_path / "static_small.json"
    path.write_text(json.dumps(static_config_dict))
    return path


def _write(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


class TestCommands:
    """Tests that every command writes its tables and manifest."""

    @pytest.mark.parametrize("command", list(Command))
    def test_command_outputs(self, command, config_path, tmp_path):
        out = tmp_path / "out"
        assert run(command, str(config_path), out) == EXIT_OK
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == command.value
        assert manifest["success"] is True
        assert manifest["seed"] == 5
        assert [o["name"] for o in manifest["outputs"]] == EXPECTED_TABLES[command]
        for entry in manifest["outputs"]:
            body = (out / entry["path"]).read_bytes()
            assert hashlib.sha256(body).hexdigest() == entry["sha256"]
            frame = pd.read_csv(out / entry["path"])
            assert list(frame.columns) == TABLE_COLUMNS[entry["name"]]
            assert len(frame) == entry["rows"]
        assert not (out / "error.json").exists()

    def test_simulate_summary(self, config_path, tmp_path):
        out = tmp_path / "out"
        run(Command.SIMULATE, str(config_path), out)
        summary = json.loads((out / "manifest.json").read_text())["summary"]
        assert summary["tdse_relative_residual"] < 1e-6
        assert summary["continuity_relative_residual"] < 1e-6
        assert summary["residual_samples"] == 20
        assert summary["mathieu_form"] == {"x": None, "y": None}
        moments = pd.read_csv(out / "moments.csv")
        assert moments["norm"].sub(1.0).abs().max() < 1e-9

    def test_propagator_check_errors(self, config_path, tmp_path):
        out = tmp_path / "out"
        run(Command.PROPAGATOR_CHECK, str(config_path), out)
        frame = pd.read_csv(out / "propagator_check.csv")
        assert frame["max_error"].max() < 1e-6
        assert frame["static_action_error"].max() < 1e-8

    def test_weak_traj_follows_guide(self, config_path, tmp_path):
        out = tmp_path / "out"
        run(Command.WEAK_TRAJ, str(config_path), out)
        summary = json.loads((out / "manifest.json").read_text())["summary"]
        assert summary["n_unassigned"] == 0
        assert summary["trajectories"] == ["J1"]
        assert summary["n_wma"] == 9 * 7 * 2

    def test_bohm_postselected_paths(self, tmp_path, static_config_dict):
        """Test the backward streamline table written when bohm.end_branches is set."""
        data = {**static_config_dict,
                "bohm": {**static_config_dict["bohm"], "end_branches": ["J1"], "t_f": 1.5,
                         "compare_wmas": True}}
        out = tmp_path / "out"
        assert run(Command.BOHM, str(_write(tmp_path, data)), out) == EXIT_OK
        manifest = json.loads((out / "manifest.json").read_text())
        assert [o["name"] for o in manifest["outputs"]] == ["bohm", "bohm_summary", "bohm_postselected"]
        frame = pd.read_csv(out / "bohm_postselected.csv")
        assert list(frame.columns) == TABLE_COLUMNS["bohm_postselected"]
        assert frame["t"].min() == pytest.approx(0.0)
        assert frame["t"].max() == pytest.approx(1.5)
        # the coherent guide is q(t) = (sin t, 0)
        assert (frame["x"] - frame["t"].apply(math.sin)).abs().max() < 1e-6
        assert (frame["in_tube"] == 1).all()
        summary = manifest["summary"]
        assert summary["postselected"][0]["visited"] == ["J1"]
        comparison = summary["wma_comparison"][0]
        assert comparison["label"] == "J1"
        assert comparison["n_passed_shaded"] <= comparison["n_passed"]

    def test_manifest_echoes_resolved_config(self, config_path, tmp_path):
        out = tmp_path / "out"
        run(Command.BOHM, str(config_path), out, seed=99, tolerance_scale=2.0)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 99
        assert manifest["config"]["alpha0"] == pytest.approx([2 ** 0.5, 2 ** 0.5])
        assert manifest["tolerances"]["rtol"] == pytest.approx(2.0 * 1e-10)
        assert manifest["versions"]["wavepath"] == "1.0.0"


class TestReproducibility:
    """Tests that tables depend only on config and seed."""

    @pytest.mark.parametrize("command", [Command.ENSEMBLE, Command.WEAK_TRAJ, Command.RECURRENCE])
    def test_thread_count_invariance(self, command, config_path, tmp_path):
        run(command, str(config_path), tmp_path / "a", threads=1)
        run(command, str(config_path), tmp_path / "b", threads=3)
        for table in EXPECTED_TABLES[command]:
            assert (tmp_path / "a" / f"{table}.csv").read_bytes() == \
                (tmp_path / "b" / f"{table}.csv").read_bytes()

    def test_seed_changes_ensemble(self, config_path, tmp_path):
        run(Command.ENSEMBLE, str(config_path), tmp_path / "a", seed=1)
        run(Command.ENSEMBLE, str(config_path), tmp_path / "b", seed=2)
        assert (tmp_path / "a" / "ensemble.csv").read_bytes() != (tmp_path / "b" / "ensemble.csv").read_bytes()


class TestFailures:
    """Tests for exit codes and error records."""

    def test_validation_error(self, tmp_path, static_config_dict):
        path = _write(tmp_path, {**static_config_dict, "alpha0": [0.0, 1.0]})
        out = tmp_path / "out"
        assert run(Command.SIMULATE, str(path), out) == EXIT_CONFIG
        record = json.loads((out / "error.json").read_text())
        assert record["error"] == "validation_error"
        assert record["exit_code"] == EXIT_CONFIG
        assert record["details"]["violations"][0]["loc"] == "alpha0.0"

    def test_missing_config(self, tmp_path):
        assert run(Command.SIMULATE, str(tmp_path / "missing.json"), tmp_path / "out") == EXIT_CONFIG

    def test_parse_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        out = tmp_path / "out"
        assert run(Command.SIMULATE, str(path), out) == EXIT_CONFIG
        assert json.loads((out / "error.json").read_text())["error"] == "parse_error"

    def test_bad_thread_count(self, config_path, tmp_path):
        assert run(Command.SIMULATE, str(config_path), tmp_path / "out", threads=0) == EXIT_CONFIG

    def test_caustic_is_a_failure(self, tmp_path, static_config_dict):
        """Test that a propagator request at half a period exits with the caustic code."""
        data = {**static_config_dict,
                "propagator_check": {"t0": 0.0, "t1": 3.141592653589793, "n_points": 5}}
        out = tmp_path / "out"
        assert run(Command.PROPAGATOR_CHECK, str(_write(tmp_path, data)), out) == EXIT_FAILURE
        record = json.loads((out / "error.json").read_text())
        assert record["error"] == "caustic"
        assert record["command"] == "propagator-check"

    def test_postselection_after_interaction(self, tmp_path, static_config_dict):
        data = {**static_config_dict,
                "postselection": {"kind": "gaussian_packet", "r_f": [0.0, 0.0], "p_f": [0.0, 0.0],
                                  "delta_f": 1.0, "t_f": 0.7}}
        assert run(Command.WEAK_TRAJ, str(_write(tmp_path, data)), tmp_path / "out") == EXIT_CONFIG


class TestMain:
    """Tests for argument parsing."""

    def test_main_runs_a_command(self, config_path, tmp_path):
        out = tmp_path / "out"
        code = main(["propagator-check", "--config", str(config_path), "--out", str(out),
                     "--log-level", "WARNING"])
        assert code == EXIT_OK
        assert (out / "propagator_check.csv").exists()

    def test_unknown_command(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["explode", "--config", "static_reference", "--out", str(tmp_path)])
