"""End-to-end scenario runs: configs, reports, and headline values."""

import math

import numpy as np
import pytest

from odsim.errors import InvalidInputError, UnphysicalParameterError
from odsim.scenarios import (
    BASE_COLUMNS,
    SCENARIO_NAMES,
    ScenarioConfig,
    default_config,
    run_cascade,
    run_gem,
    run_memory_swap,
    run_preservation,
    run_scenario,
    run_single_sample,
)

LOG2_3 = math.log2(3.0)


def checks_by_name(report):
    return {c["name"]: c for c in report.metadata["checks"]}


class TestScenarioConfig:
    def test_rejects_unknown_scenario(self):
        with pytest.raises(InvalidInputError, match="valid scenarios"):
            ScenarioConfig.from_dict({"scenario": "warp"})

    def test_rejects_bad_epsilon_with_exact_message(self):
        with pytest.raises(UnphysicalParameterError, match=r"epsilon must be in \[0,1\)"):
            ScenarioConfig.from_dict({"scenario": "cascade", "epsilon": 1.2})

    def test_rejects_unknown_keys(self):
        with pytest.raises(InvalidInputError, match="unknown config key"):
            ScenarioConfig.from_dict({"scenario": "cascade", "epsilonn": 0.3})

    def test_rejects_coarse_figure_grids(self):
        with pytest.raises(InvalidInputError):
            ScenarioConfig.from_dict({"scenario": "cascade", "z_steps": 5})

    def test_beta_norm_only_for_gem(self):
        with pytest.raises(InvalidInputError):
            ScenarioConfig.from_dict({"scenario": "cascade", "beta_norm": 5.0})

    def test_non_preservation_requires_vacuum_input(self):
        with pytest.raises(InvalidInputError):
            ScenarioConfig.from_dict({"scenario": "cascade", "input_state": "tmsv"})

    def test_coherent_needs_amplitudes(self):
        with pytest.raises(InvalidInputError):
            ScenarioConfig.from_dict({"scenario": "preservation", "input_state": "coherent"})

    def test_defaults_exist_for_every_scenario(self):
        for name in SCENARIO_NAMES:
            cfg = default_config(name)
            assert cfg.scenario == name

    def test_round_trips_to_dict(self):
        cfg = default_config("gem")
        again = ScenarioConfig.from_dict(cfg.to_dict())
        assert again == cfg


class TestPreservation:
    def test_matched_input_unchanged(self):
        rep = run_preservation(default_config("preservation"))
        assert rep.metadata["od_input"]
        assert rep.metadata["max_deviation"] < 1e-9
        assert rep.metadata["passed"]

    def test_dark_mode_excitation_survives(self):
        cfg = ScenarioConfig.from_dict(
            {
                "scenario": "preservation",
                "input_state": "coherent",
                "coherent_amplitudes": [0.0, 0.0, 1.2, -0.3],
                "coherent_basis": "bright_dark",
                "z_steps": 40,
            }
        )
        rep = run_preservation(cfg)
        assert rep.metadata["od_input"]
        assert rep.metadata["max_deviation"] < 1e-9

    def test_bright_excitation_decays_by_beer_law(self):
        cfg = ScenarioConfig.from_dict(
            {
                "scenario": "preservation",
                "input_state": "coherent",
                "coherent_amplitudes": [1.0, 0.0, 0.0, 0.0],
                "coherent_basis": "bright_dark",
                "z_steps": 40,
            }
        )
        rep = run_preservation(cfg)
        assert not rep.metadata["od_input"]
        assert checks_by_name(rep)["bright_mean_beer_decay"]["passed"]
        assert rep.metadata["max_deviation"] > 1e-3  # the state genuinely evolves

    def test_zero_mixing_vacuum_is_dark(self):
        cfg = ScenarioConfig.from_dict(
            {"scenario": "preservation", "epsilon": 0.0, "input_state": "vacuum", "z_steps": 20}
        )
        rep = run_preservation(cfg)
        assert rep.metadata["od_input"]
        assert rep.metadata["max_deviation"] < 1e-12


class TestSingleSample:
    def test_terminal_state(self):
        rep = run_single_sample(default_config("single_sample"))
        by_name = checks_by_name(rep)
        assert by_name["terminal_dark_mode_occupation"]["passed"]
        assert by_name["terminal_logneg_bright_dark"]["passed"]
        assert by_name["terminal_n_a"]["passed"]
        assert by_name["terminal_n_b"]["passed"]
        assert rep.metadata["terminal"]["n_bright_mode"] == pytest.approx(0.0, abs=1e-9)
        # squeezed/antisqueezed magnitudes; the axis assignment follows the
        # bright-mode sign convention (see the checks' note)
        assert rep.terminal("var_x_diff", 0.0) == pytest.approx(4.0 / 9.0, abs=1e-6)
        assert rep.terminal("var_x_sum", 0.0) == pytest.approx(4.0, abs=1e-6)
        assert not by_name["terminal_var_x_sum_vs_oracle"]["passed"]
        assert "note" in by_name["terminal_var_x_sum_vs_oracle"]

    def test_purity_of_terminal_mixture(self):
        rep = run_single_sample(default_config("single_sample"))
        # vacuum x thermal(1/3): purity 1/(2*1/3 + 1) = 0.6
        assert rep.terminal("purity", 0.0) == pytest.approx(0.6, abs=1e-9)

    def test_flat_profile_results_are_grid_independent(self):
        a = run_single_sample(ScenarioConfig(scenario="single_sample", z_steps=50))
        b = run_single_sample(ScenarioConfig(scenario="single_sample", z_steps=100))
        za = a.column("z")
        zb = b.column("z")
        common = np.isin(zb, za)
        np.testing.assert_allclose(b.data[common][:, 3:], a.data[:, 3:], atol=1e-12)


class TestCascade:
    def test_terminal_matched_state(self):
        rep = run_cascade(default_config("cascade"))
        assert rep.metadata["passed"]
        assert rep.terminal("var_x_sum", 0.0) == pytest.approx(3.0, abs=1e-6)
        assert rep.terminal("var_x_diff", 0.0) == pytest.approx(1.0 / 3.0, abs=1e-6)
        assert rep.terminal("purity", 0.0) == pytest.approx(1.0, abs=1e-6)
        assert rep.terminal("logneg_ab", 0.0) == pytest.approx(LOG2_3, abs=1e-6)
        assert rep.terminal("n_a", 0.0) == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_midpoint_matches_single_sample_terminal(self):
        cascade = run_cascade(ScenarioConfig(scenario="cascade", z_steps=50))
        single = run_single_sample(ScenarioConfig(scenario="single_sample", z_steps=50))
        rows = cascade.rows_at_omega(0.0)
        z = rows[:, cascade.columns.index("z")]
        mid = rows[np.argmin(np.abs(z - 1.0))]
        np.testing.assert_allclose(mid[3:], single.rows_at_omega(0.0)[-1][3:], atol=1e-12)

    def test_z_column_spans_both_samples(self):
        rep = run_cascade(ScenarioConfig(scenario="cascade", z_steps=25))
        z = rep.column("z")
        assert z[0] == 0.0
        assert z[-1] == pytest.approx(2.0)
        assert np.all(np.diff(rep.rows_at_omega(0.0)[:, 0]) > 0)


@pytest.fixture(scope="module")
def gem_report():
    return run_gem(ScenarioConfig.from_dict({"scenario": "gem", "z_steps": 1000}))


class TestGem:

    def test_trajectory_shape(self, gem_report):
        report = gem_report
        by_name = checks_by_name(report)
        assert by_name["n_a_at_entry"]["passed"]
        assert by_name["plateau_n_a"]["passed"]
        assert by_name["tail_slope"]["passed"]
        assert by_name["pre_resonance_peak_n_a"]["passed"]
        assert report.metadata["terminal"]["plateau_n_a"] == pytest.approx(4.0 / 9.0, abs=1e-3)

    def test_peak_respects_extremal_phase_bound(self, gem_report):
        report = gem_report
        # 4 eps^2 / (1-eps^2)^2 = 16/9 at eps = 0.5
        assert float(np.max(report.column("n_a"))) <= 16.0 / 9.0 + 1e-9

    def test_convergence_under_grid_doubling(self):
        reps = {
            n: run_gem(ScenarioConfig.from_dict({"scenario": "gem", "z_steps": n}))
            for n in (250, 500, 1000, 4000)
        }
        ref = reps[4000].column("n_a")

        def err(n):
            got = reps[n].column("n_a")
            return float(np.max(np.abs(got - ref[:: 4000 // n])))

        e250, e500 = err(250), err(500)
        assert e500 < 1e-3
        assert e250 / e500 > 1.8  # at least first-order convergence

    def test_detuning_sign_does_not_matter_for_photon_number(self, gem_report):
        report = gem_report
        flipped = run_gem(
            ScenarioConfig.from_dict({"scenario": "gem", "z_steps": 1000, "beta_norm": 5.0})
        )
        np.testing.assert_allclose(flipped.column("n_a"), report.column("n_a"), atol=1e-12)


class TestMemorySwap:
    def test_entanglement_bookkeeping(self):
        rep = run_memory_swap(default_config("memory_swap"))
        assert rep.metadata["passed"]
        assert rep.terminal("logneg_s1_s2") == pytest.approx(LOG2_3, abs=1e-9)
        assert rep.terminal("logneg_light_atoms") == pytest.approx(0.0, abs=1e-12)
        assert rep.terminal("logneg_ab") == pytest.approx(LOG2_3, abs=1e-9)
        assert rep.metadata["terminal"]["light_cov_delta_vs_matched_state"] < 1e-12

    def test_zero_mixing_produces_nothing(self):
        rep = run_memory_swap(ScenarioConfig(scenario="memory_swap", epsilon=0.0, z_steps=10))
        assert rep.terminal("logneg_s1_s2") == 0.0
        assert rep.terminal("logneg_ab") == 0.0

    def test_stage_progression(self):
        rep = run_memory_swap(default_config("memory_swap"))
        assert rep.data.shape[0] == 3
        # light-atom entanglement appears after the first swap, gone after the second
        col = rep.column("logneg_light_atoms")
        assert col[0] == 0.0
        assert col[1] > 0.5
        assert col[2] == pytest.approx(0.0, abs=1e-12)


class TestReports:
    @pytest.mark.parametrize("name", SCENARIO_NAMES)
    def test_columns_and_physical_rows(self, name):
        cfg = (
            default_config(name)
            if name != "gem"
            else ScenarioConfig.from_dict({"scenario": "gem", "z_steps": 200})
        )
        rep = run_scenario(cfg)
        assert rep.columns[: len(BASE_COLUMNS)] == BASE_COLUMNS
        assert rep.data.shape[1] == len(rep.columns)
        assert np.all(np.isfinite(rep.data))
        for col in ("var_x_sum", "var_x_diff", "var_p_sum", "var_p_diff"):
            assert np.all(rep.column(col) > 0)
        assert np.all(rep.column("purity") <= 1 + 1e-9)
        assert np.all(rep.column("logneg_ab") >= 0)

    def test_runs_are_deterministic(self):
        a = run_scenario(default_config("cascade"))
        b = run_scenario(default_config("cascade"))
        assert a.data.tobytes() == b.data.tobytes()

    def test_csv_round_trip(self, tmp_path):
        rep = run_scenario(ScenarioConfig(scenario="single_sample", z_steps=20))
        path = tmp_path / "out.csv"
        rep.to_csv(str(path))
        text = path.read_bytes().decode("utf-8")
        assert "\r" not in text
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(rep.columns)
        parsed = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        np.testing.assert_array_equal(parsed, rep.data)  # 17 digits round-trips exactly
