"""Command-line interface: exit codes, file outputs, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from odsim import cli
from odsim.errors import PhysicalityError
from odsim.scenarios import SCENARIO_NAMES


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


class TestList:
    def test_five_scenarios_in_stable_order(self, capsys):
        assert cli.main(["list"]) == 0
        lines = [l for l in capsys.readouterr().out.strip().split("\n") if l]
        assert len(lines) == 5
        assert [l.split()[0] for l in lines] == list(SCENARIO_NAMES)

    def test_json_flag(self, capsys):
        assert cli.main(["list", "--json"]) == 0
        assert json.loads(capsys.readouterr().out) == list(SCENARIO_NAMES)

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["list", "--frobnicate"])
        assert exc.value.code == 2


class TestRun:
    def test_cascade_outputs(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"scenario": "cascade", "epsilon": 0.5, "kappa_L": 20, "z_steps": 40}
        )
        out = tmp_path / "out"
        assert cli.main(["run", "--config", cfg, "--out", str(out)]) == 0
        csv_path = out / "cascade.csv"
        summary_path = out / "summary.json"
        assert csv_path.exists() and summary_path.exists()

        summary = json.loads(summary_path.read_text(encoding="utf-8"))
        assert summary["scenario"] == "cascade"
        assert summary["passed"] is True
        assert summary["oracle_delta"] < 1e-6
        assert summary["terminal"]["diff_var_terminal"] == pytest.approx(1 / 3, abs=1e-6)
        assert summary["rows"] == 81

        header = csv_path.read_text(encoding="utf-8").split("\n", 1)[0]
        assert header.startswith("z,kappa_z,omega,var_x_sum,var_x_diff")
        assert "wrote" in capsys.readouterr().out

    def test_summary_numbers_are_finite(self, tmp_path):
        cfg = write_config(tmp_path, {"scenario": "memory_swap"})
        out = tmp_path / "out"
        assert cli.main(["run", "--config", cfg, "--out", str(out)]) == 0
        text = (out / "summary.json").read_text(encoding="utf-8")
        assert "NaN" not in text and "Infinity" not in text

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, {"scenario": "single_sample", "z_steps": 30})
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert cli.main(["run", "--config", cfg, "--out", str(out1)]) == 0
        assert cli.main(["run", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "single_sample.csv").read_bytes() == (out2 / "single_sample.csv").read_bytes()
        assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()

    def test_thread_count_does_not_change_outputs(self, tmp_path, monkeypatch):
        cfg = write_config(
            tmp_path,
            {"scenario": "preservation", "omega_over_gamma_list": [0, 1, 2, 3], "z_steps": 30},
        )
        outputs = {}
        for threads in ("1", "8"):
            monkeypatch.setenv("ODSIM_THREADS", threads)
            out = tmp_path / f"t{threads}"
            assert cli.main(["run", "--config", cfg, "--out", str(out)]) == 0
            outputs[threads] = (out / "preservation.csv").read_bytes()
        assert outputs["1"] == outputs["8"]

    def test_override_epsilon_zero_preservation(self, tmp_path):
        cfg = write_config(tmp_path, {"scenario": "preservation", "input_state": "vacuum", "z_steps": 20})
        out = tmp_path / "out"
        code = cli.main(["run", "--config", cfg, "--out", str(out), "--override", "epsilon=0"])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["passed"] is True
        assert summary["config"]["epsilon"] == 0.0
        assert summary["terminal"]["max_deviation"] < 1e-12

    def test_override_list_field(self, tmp_path):
        cfg = write_config(tmp_path, {"scenario": "single_sample", "z_steps": 20})
        out = tmp_path / "out"
        code = cli.main(
            ["run", "--config", cfg, "--out", str(out), "--override", "omega_over_gamma_list=0,1.5"]
        )
        assert code == 0
        data = np.genfromtxt(out / "single_sample.csv", delimiter=",", names=True)
        assert set(np.unique(data["omega"])) == {0.0, 1.5}

    def test_bad_epsilon_exits_2_with_message(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"scenario": "cascade", "epsilon": 1.2})
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
        assert "epsilon must be in [0,1)" in capsys.readouterr().err

    def test_unknown_scenario_exits_2_naming_valid_ones(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"scenario": "teleport"})
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
        err = capsys.readouterr().err
        for name in SCENARIO_NAMES:
            assert name in err

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"scenario": "cascade", "kappa_l": 10})
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
        assert "unknown config key" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert cli.main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 2

    def test_bad_override_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"scenario": "cascade"})
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o"), "--override", "eps"]) == 2
        assert cli.main(
            ["run", "--config", cfg, "--out", str(tmp_path / "o"), "--override", "z_steps=ten"]
        ) == 2

    def test_unwritable_output_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"scenario": "memory_swap"})
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory", encoding="utf-8")
        assert cli.main(["run", "--config", cfg, "--out", str(blocker / "sub")]) == 2

    def test_physicality_violation_exits_3(self, tmp_path, capsys, monkeypatch):
        def explode(cfg):
            raise PhysicalityError("synthetic mid-run violation")

        monkeypatch.setattr(cli, "run_scenario", explode)
        cfg = write_config(tmp_path, {"scenario": "cascade"})
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
        assert "physicality" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "odsim", "list", "--json"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert json.loads(out.stdout) == list(SCENARIO_NAMES)


def test_run_manifest_fields(tmp_path):
    cfg = write_config(tmp_path, {"scenario": "memory_swap"})
    manifest = cli.run(cfg, str(tmp_path / "out"))
    assert manifest.files == ["memory_swap.csv", "summary.json"]
    for name in manifest.files:
        assert (tmp_path / "out" / name).exists()
    assert manifest.tool_version
    assert manifest.duration_s >= 0.0
    assert manifest.passed is True
