"""
The release gate: every headline claim of the model checked against the
independent closed forms, at pinned tolerances.

Each criterion is a standalone function returning a CriterionResult; the CLI
`verify` command and the test suite both run them.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import oracle
from .gaussian import (
    GaussianState,
    apply_symplectic,
    bogoliubov_symplectic,
    complex_transmission_channel,
    random_symplectic,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    vacuum_state,
)
from .medium import PropagationGrid, propagate
from .scenarios import (
    GAMMA12,
    LENGTH,
    LIGHT_MODES,
    ScenarioConfig,
    _effective,
    run_cascade,
    run_gem,
    run_memory_swap,
    run_preservation,
    run_scenario,
    run_single_sample,
)

_SEED = 20260810


def _line(name: str, value: float, expected: float, tolerance: float) -> dict:
    delta = abs(float(value) - float(expected))
    return {
        "name": name,
        "value": float(value),
        "expected": float(expected),
        "delta": delta,
        "tolerance": float(tolerance),
        "passed": bool(delta <= tolerance),
    }


def _bound_line(name: str, value: float, bound: float) -> dict:
    """Check value <= bound; the (clipped) value itself is the reported delta."""
    return {
        "name": name,
        "value": float(value),
        "expected": 0.0,
        "delta": float(max(0.0, value)),
        "tolerance": float(bound),
        "passed": bool(value <= bound),
    }


@dataclass
class CriterionResult:
    index: int
    name: str
    lines: list[dict]

    @property
    def passed(self) -> bool:
        return all(l["passed"] for l in self.lines)

    @property
    def max_delta(self) -> float:
        return max((l["delta"] for l in self.lines), default=0.0)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.index:>2} {self.name:<32} max|delta|={self.max_delta:.3e}"


def criterion_1_dark_state_preservation() -> CriterionResult:
    """Matched squeezed inputs traverse the sample with no observable change."""
    lines = []
    for eps in (0.1, 0.3, 0.5, 0.7, 0.9):
        cfg = ScenarioConfig(
            scenario="preservation",
            epsilon=eps,
            kappa_L=10.0,
            omega_over_gamma_list=(0.0, 1.0, 5.0),
            z_steps=40,
            input_state="tmsv",
        )
        rep = run_preservation(cfg)
        lines.append(_bound_line(f"max_deviation_eps={eps}", rep.metadata["max_deviation"], 1e-9))
    return CriterionResult(1, "dark-state-preservation", lines)


def criterion_2_beer_law() -> CriterionResult:
    """Bright-mode amplitude transmission follows the closed-form exponent."""
    eps, kappa_l, steps = 0.5, 10.0, 100
    eff = _effective(eps, kappa_l / LENGTH)
    bogo = bogoliubov_symplectic(eps, LIGHT_MODES)
    fwd, back = bogo.matrix, bogo.inverse().matrix
    mean_bd0 = np.array([math.sqrt(2.0), 0.0, 0.0, 0.0])
    state0 = GaussianState(LIGHT_MODES, back @ mean_bd0, 0.5 * np.eye(4))
    lines = []
    for omega, half in ((0.0, False), (1.0, True)):
        grid = PropagationGrid(steps, (omega,), LENGTH)
        snaps = propagate(state0, eff, GAMMA12, grid)
        worst = 0.0
        for z, _, st in snaps:
            mb = fwd @ st.mean
            got = math.hypot(mb[0], mb[1]) / math.sqrt(2.0)
            want = math.exp(-eff.kappa * z * (0.5 if half else 1.0))
            worst = max(worst, abs(got - want))
        lines.append(_bound_line(f"amplitude_vs_exponent_omega={omega}", worst, 1e-12))
    return CriterionResult(2, "beer-law-transmission", lines)


def criterion_3_bright_variance_decay() -> CriterionResult:
    """Engine bright-mode variance matches the closed form pointwise from vacuum input."""
    eps, kappa_l, steps = 0.5, 10.0, 200
    cfg = ScenarioConfig(
        scenario="single_sample",
        epsilon=eps,
        kappa_L=kappa_l,
        omega_over_gamma_list=(0.0, 1.0, 3.0),
        z_steps=steps,
    )
    rep = run_single_sample(cfg)
    lines = []
    for omega in cfg.omega_over_gamma_list:
        rows = rep.rows_at_omega(omega)
        kz = rows[:, rep.columns.index("kappa_z")]
        got = rows[:, rep.columns.index("var_x_bright")]
        want = np.array([oracle.bright_variance(eps, k, omega / GAMMA12) for k in kz])
        lines.append(
            _bound_line(f"var_x_bright_vs_oracle_omega={omega}", float(np.max(np.abs(got - want))), 1e-9)
        )
    return CriterionResult(3, "bright-variance-decay", lines)


def criterion_4_single_sample_terminal() -> CriterionResult:
    """Terminal state of one sample versus the post-absorption closed forms."""
    cfg = ScenarioConfig(scenario="single_sample", epsilon=0.5, kappa_L=20.0, z_steps=50)
    rep = run_single_sample(cfg)
    by_name = {c["name"]: c for c in rep.metadata["checks"]}
    lines = [
        _line("var_x_sum_vs_oracle", by_name["terminal_var_x_sum_vs_oracle"]["value"],
              by_name["terminal_var_x_sum_vs_oracle"]["expected"], 1e-6),
        _line("var_x_diff_vs_oracle", by_name["terminal_var_x_diff_vs_oracle"]["value"],
              by_name["terminal_var_x_diff_vs_oracle"]["expected"], 1e-6),
        _bound_line("logneg_bright_dark", rep.terminal("logneg_bd", 0.0), 1e-6),
        _line("dark_mode_occupation", rep.metadata["terminal"]["n_dark_mode"], 1.0 / 3.0, 1e-6),
    ]
    return CriterionResult(4, "single-sample-terminal", lines)


def criterion_5_cascade_generation() -> CriterionResult:
    """Two-sample cascade lands on the matched pure squeezed state."""
    lines = []
    for eps in (0.3, 0.5, 0.8):
        cfg = ScenarioConfig(scenario="cascade", epsilon=eps, kappa_L=20.0, z_steps=50)
        rep = run_cascade(cfg)
        pair = oracle.od_variances(eps)
        lines.append(_line(f"var_x_sum_eps={eps}", rep.terminal("var_x_sum", 0.0), pair.sum_var, 1e-5))
        lines.append(_line(f"var_x_diff_eps={eps}", rep.terminal("var_x_diff", 0.0), pair.diff_var, 1e-5))
        lines.append(_line(f"purity_eps={eps}", rep.terminal("purity", 0.0), 1.0, 1e-5))
        lines.append(
            _line(
                f"logneg_ab_eps={eps}",
                rep.terminal("logneg_ab", 0.0),
                math.log2((1 + eps) / (1 - eps)),
                1e-5,
            )
        )
    return CriterionResult(5, "cascade-squeezing-generation", lines)


def criterion_6_intermediate_photon_numbers() -> CriterionResult:
    """Signal/idler occupations between and after the two samples."""
    eps = 0.5
    cfg = ScenarioConfig(scenario="cascade", epsilon=eps, kappa_L=20.0, z_steps=50)
    rep = run_cascade(cfg)
    rows = rep.rows_at_omega(0.0)
    z = rows[:, rep.columns.index("z")]
    mid = rows[np.argmin(np.abs(z - LENGTH))]
    n_a_mid = mid[rep.columns.index("n_a")]
    n_b_mid = mid[rep.columns.index("n_b")]
    lines = [
        _line("n_a_after_sample_1", n_a_mid, eps**2 / (1 - eps**2) ** 2, 1e-6),
        _line("n_b_after_sample_1", n_b_mid, eps**2 * (2 - eps**2) / (1 - eps**2) ** 2, 1e-6),
        _line("n_a_after_sample_2", rep.terminal("n_a", 0.0), eps**2 / (1 - eps**2), 1e-6),
        _line("n_b_after_sample_2", rep.terminal("n_b", 0.0), eps**2 / (1 - eps**2), 1e-6),
    ]
    return CriterionResult(6, "intermediate-photon-numbers", lines)


def criterion_7_gem_trajectory() -> CriterionResult:
    """Gradient-profile photon-number trajectory: entry, amplification, plateau, stability."""
    base = ScenarioConfig.from_dict({"scenario": "gem", "z_steps": 2000})
    rep = run_gem(base)
    doubled = run_gem(ScenarioConfig.from_dict({"scenario": "gem", "z_steps": 4000}))
    n_a = rep.rows_at_omega(0.0)[:, rep.columns.index("n_a")]
    n_a2 = doubled.rows_at_omega(0.0)[:, doubled.columns.index("n_a")][::2]
    by_name = {c["name"]: c for c in rep.metadata["checks"]}
    lines = [
        _bound_line("n_a_at_entry", abs(by_name["n_a_at_entry"]["value"]), 1e-12),
        _line("plateau_n_a", by_name["plateau_n_a"]["value"], by_name["plateau_n_a"]["expected"], 1e-3),
        _bound_line("tail_slope", by_name["tail_slope"]["value"], 1e-4 * rep.metadata["beta_over_gamma"]),
        _bound_line(
            "pre_resonance_peak_exceeds_0.5",
            0.5 - rep.metadata["terminal"]["pre_resonance_peak_n_a"],
            0.0,
        ),
        _bound_line("z_steps_doubling_change", float(np.max(np.abs(n_a - n_a2))), 1e-3),
    ]
    return CriterionResult(7, "gem-trajectory", lines)


def criterion_8_memory_swap_equivalence() -> CriterionResult:
    """Idealized-swap pipeline agrees with the deep dissipative pipeline."""
    eps = 0.5
    swap_rep = run_memory_swap(ScenarioConfig(scenario="memory_swap", epsilon=eps, z_steps=10))

    eff = _effective(eps, 30.0 / LENGTH)
    grid = PropagationGrid(50, (0.0,), LENGTH)
    snaps1 = propagate(vacuum_state(LIGHT_MODES), eff, GAMMA12, grid)
    mid = snaps1[-1][2]
    snaps2 = propagate(mid, eff, GAMMA12, grid, sample_epsilon_inverted=True)
    dissipative_cov = snaps2[-1][2].cov

    # swap pipeline's terminal light covariance, rebuilt by direct bookkeeping
    from .gaussian import reduced_state
    from .medium import swap_sample

    bogo = bogoliubov_symplectic(eps, LIGHT_MODES)
    st = apply_symplectic(vacuum_state(LIGHT_MODES + ("S1", "S2")), bogo)
    st = swap_sample(swap_sample(st, "a", "S1"), "b", "S2")
    swap_cov = reduced_state(apply_symplectic(st, bogo.inverse()), LIGHT_MODES).cov

    cov_delta = float(np.max(np.abs(dissipative_cov - swap_cov)))
    lines = [
        _bound_line("pipelines_terminal_cov_delta", cov_delta, 1e-6),
        _line(
            "logneg_s1_s2",
            swap_rep.metadata["terminal"]["logneg_s1_s2"],
            math.log2(3.0),
            1e-9,
        ),
    ]
    return CriterionResult(8, "memory-swap-equivalence", lines)


def criterion_9_property_suites() -> CriterionResult:
    """Randomized invariants: symplectic condition, channel physicality, closed-form identities."""
    rng = np.random.default_rng(_SEED)
    labels = ("m0", "m1", "m2")

    worst_sympl = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        t = random_symplectic(labels[:n], rng)
        omega = symplectic_form(n)
        worst_sympl = max(worst_sympl, float(np.max(np.abs(t.matrix @ omega @ t.matrix.T - omega))))

    worst_phys = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        modes = labels[:n]
        base = thermal_state(modes, rng.uniform(0.0, 2.0, size=n))
        state = apply_symplectic(base, random_symplectic(modes, rng))
        mode = modes[int(rng.integers(0, n))]
        mag = math.sqrt(rng.uniform(0.0, 1.0))
        phase = rng.uniform(0.0, 2 * math.pi)
        out = complex_transmission_channel(state, mode, mag * complex(math.cos(phase), math.sin(phase)))
        worst_phys = max(worst_phys, 0.5 - float(np.min(symplectic_eigenvalues(out))))

    worst_oracle = 0.0
    for eps in rng.uniform(0.0, 0.95, size=100):
        pair = oracle.od_variances(eps)
        worst_oracle = max(worst_oracle, abs(pair.sum_var * pair.diff_var - 1.0))
        closed = oracle.post_sample_variances(eps)
        hyper = oracle.post_sample_variances_hyperbolic(eps)
        worst_oracle = max(
            worst_oracle,
            abs(closed.sum_var - hyper.sum_var) / max(1.0, closed.sum_var),
            abs(closed.diff_var - hyper.diff_var) / max(1.0, closed.diff_var),
        )

    lines = [
        _bound_line("random_symplectic_condition", worst_sympl, 1e-10),
        _bound_line("channel_physicality_slack", worst_phys, 1e-9),
        _bound_line("oracle_identities", worst_oracle, 1e-12),
    ]
    return CriterionResult(9, "property-suites", lines)


@contextmanager
def _forced_threads(n: int):
    old = os.environ.get("ODSIM_THREADS")
    os.environ["ODSIM_THREADS"] = str(n)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("ODSIM_THREADS", None)
        else:
            os.environ["ODSIM_THREADS"] = old


_FINGERPRINT_CONFIGS = (
    {"scenario": "preservation", "z_steps": 50},
    {"scenario": "cascade", "omega_over_gamma_list": [0.0, 1.0, 3.0], "z_steps": 60},
    {"scenario": "gem", "z_steps": 500, "omega_over_gamma_list": [0.0, 2.0]},
)


def _engine_fingerprint() -> bytes:
    parts = []
    for raw in _FINGERPRINT_CONFIGS:
        rep = run_scenario(ScenarioConfig.from_dict(raw))
        parts.append(rep.data.tobytes())
    return b"".join(parts)


def criterion_10_determinism() -> CriterionResult:
    """Engine output bytes are identical under serial and 8-way threaded frequency sweeps."""
    with _forced_threads(1):
        serial = _engine_fingerprint()
    with _forced_threads(8):
        threaded = _engine_fingerprint()
    identical = serial == threaded
    lines = [_line("threads_1_vs_8_fingerprint", 0.0 if identical else 1.0, 0.0, 0.0)]
    return CriterionResult(10, "determinism", lines)


CRITERIA = (
    criterion_1_dark_state_preservation,
    criterion_2_beer_law,
    criterion_3_bright_variance_decay,
    criterion_4_single_sample_terminal,
    criterion_5_cascade_generation,
    criterion_6_intermediate_photon_numbers,
    criterion_7_gem_trajectory,
    criterion_8_memory_swap_equivalence,
    criterion_9_property_suites,
    criterion_10_determinism,
)


def run_all() -> list[CriterionResult]:
    return [fn() for fn in CRITERIA]


def render_table(results: list[CriterionResult], verbose: bool = False) -> str:
    out = []
    for res in results:
        out.append(res.summary_line())
        if verbose:
            for l in res.lines:
                mark = "ok " if l["passed"] else "BAD"
                out.append(
                    f"    {mark} {l['name']:<40} value={l['value']!r} expected={l['expected']!r} "
                    f"delta={l['delta']:.3e} tol={l['tolerance']:.3e}"
                )
    failing = [r.name for r in results if not r.passed]
    if failing:
        out.append(f"FAILING: {', '.join(failing)}")
    else:
        out.append("ALL PASS")
    return "\n".join(out)
