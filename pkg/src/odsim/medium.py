"""
Λ-medium model: effective parameters from the raw atomic Hamiltonian,
frequency-domain transfer functions, slice-wise Gaussian-state propagation,
and the idealized light↔atom state swap.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .errors import InvalidInputError, UnphysicalParameterError, UnsupportedRegimeError
from .gaussian import ComplexTransmission, GaussianState, bogoliubov_symplectic

ADIABATIC_THRESHOLD = 0.1


def worker_count() -> int:
    """Worker cap from ODSIM_THREADS (0 or unset = one per CPU)."""
    raw = os.environ.get("ODSIM_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInputError(f"ODSIM_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InvalidInputError("ODSIM_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class RawAtomParams:
    """Raw atomic and optical parameters of the driven Λ system (SI-style units)."""

    g31: float  # photon-atom coupling, signal transition (rad/s)
    g32: float  # photon-atom coupling, idler transition (rad/s)
    omega_a_rabi: complex  # signal control-field Rabi frequency (rad/s)
    omega_b_rabi: complex  # idler control-field Rabi frequency (rad/s)
    delta_a: float  # one-photon detuning of the signal pair (rad/s)
    delta_b: float  # one-photon detuning of the idler pair (rad/s)
    gamma3: float  # excited-state decay rate (rad/s)
    gamma12: float  # ground-state coherence decay rate (rad/s)
    n0: float  # linear atomic density (1/m)
    length: float  # sample length (m)
    c: float = 299792458.0  # speed of light (m/s)

    def __post_init__(self) -> None:
        if self.gamma3 <= 0 or self.gamma12 <= 0:
            raise UnphysicalParameterError("decay rates must be > 0")
        if self.length <= 0 or self.n0 <= 0 or self.c <= 0:
            raise UnphysicalParameterError("length, density, and c must be > 0")
        if self.delta_a == 0 or self.delta_b == 0:
            raise UnphysicalParameterError("one-photon detunings must be nonzero")


@dataclass(frozen=True)
class EffectiveParams:
    """Effective couplings of the adiabatically eliminated model."""

    g_a: float  # effective signal coupling (rad/s), real positive by phase choice
    g_b: float  # effective idler coupling (rad/s)
    epsilon: float  # g_b / g_a
    alpha0: float  # sqrt(1 - epsilon^2)
    kappa: float  # optical-depth rate alpha0^2 n0 g_a^2 / (c gamma12) (1/m)

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 1.0:
            raise UnphysicalParameterError("epsilon must be in [0,1)")
        if abs(self.alpha0**2 + self.epsilon**2 - 1.0) > 1e-12:
            raise UnphysicalParameterError("alpha0^2 + epsilon^2 must equal 1")
        if self.kappa <= 0:
            raise UnphysicalParameterError("kappa must be > 0")


@dataclass(frozen=True)
class DetuningProfile:
    """Spatial profile of the residual two-photon detuning δ₁₂(z)."""

    kind: str = "none"  # "none" | "linear"
    beta: float = 0.0  # gradient (rad/s per m), linear profile only
    center: float = 0.0  # z where the linear profile crosses zero (L/2 by convention)

    def __post_init__(self) -> None:
        if self.kind not in ("none", "linear"):
            raise InvalidInputError(f"profile kind must be 'none' or 'linear', got {self.kind!r}")

    @staticmethod
    def none() -> "DetuningProfile":
        return DetuningProfile("none")

    @staticmethod
    def linear_centered(beta: float, length: float) -> "DetuningProfile":
        """Linear gradient crossing zero at the sample midpoint: δ₁₂(z) = β(z − L/2)."""
        return DetuningProfile("linear", beta, 0.5 * length)

    def values(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        z = np.asarray(z, dtype=float)
        if self.kind == "none":
            return np.zeros_like(z)
        return self.beta * (z - self.center)


@dataclass(frozen=True)
class PropagationGrid:
    """Discretization of the sample: slice count, probe frequencies, and length."""

    z_steps: int
    omega_list: tuple[float, ...]
    length: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega_list", tuple(float(w) for w in self.omega_list))
        if self.z_steps < 1:
            raise InvalidInputError("z_steps must be >= 1")
        if not self.omega_list:
            raise InvalidInputError("omega_list must be nonempty")
        if not np.all(np.isfinite(self.omega_list)):
            raise InvalidInputError("omega values must be finite")
        if self.length <= 0:
            raise InvalidInputError("length must be > 0")


@dataclass(frozen=True)
class AdiabaticityReport:
    """Dimensionless ratios behind the adiabatic elimination, with an advisory pass flag."""

    ratios: dict[str, float]
    threshold: float = ADIABATIC_THRESHOLD
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "passed", all(v <= self.threshold for v in self.ratios.values()))


def derive_effective(raw: RawAtomParams) -> EffectiveParams:
    """
    Effective couplings g_a = g₃₁ Ω_a*/Δ_a and g_b = g₃₂ Ω_b*/Δ_b, with mode
    phases absorbed so both are real positive, plus ε = g_b/g_a and the
    optical-depth rate κ.
    """
    g_a = abs(raw.g31 * complex(raw.omega_a_rabi).conjugate() / raw.delta_a)
    g_b = abs(raw.g32 * complex(raw.omega_b_rabi).conjugate() / raw.delta_b)
    if g_a == 0.0 or g_b >= g_a:
        raise UnsupportedRegimeError(
            f"need |g_b| < |g_a| (epsilon < 1); got g_a={g_a:g}, g_b={g_b:g}"
        )
    epsilon = g_b / g_a
    alpha0 = math.sqrt(1.0 - epsilon**2)
    kappa = alpha0**2 * raw.n0 * g_a**2 / (raw.c * raw.gamma12)
    return EffectiveParams(g_a=g_a, g_b=g_b, epsilon=epsilon, alpha0=alpha0, kappa=kappa)


def validate_adiabatic(raw: RawAtomParams, t_interaction: float) -> AdiabaticityReport:
    """
    Check the assumptions behind the effective model over an interaction time:
    large one-photon detunings and a slow optical-pumping rate. Always reports;
    the pass flag (every ratio ≤ 0.1) is advisory.
    """
    if t_interaction <= 0:
        raise InvalidInputError("t_interaction must be > 0")
    abs_da, abs_db = abs(raw.delta_a), abs(raw.delta_b)
    ratios = {
        "gamma3_over_delta_a": raw.gamma3 / abs_da,
        "gamma3_over_delta_b": raw.gamma3 / abs_db,
        "rabi_a_over_delta_a": abs(raw.omega_a_rabi) / abs_da,
        "rabi_b_over_delta_b": abs(raw.omega_b_rabi) / abs_db,
        "pumping_rate_time": abs(raw.omega_b_rabi) ** 2 * raw.gamma3 * t_interaction / raw.delta_b**2,
    }
    return AdiabaticityReport(ratios=ratios)


def transfer_function(
    eff: EffectiveParams, omega: float, z: float, gamma12: float, detuning: float = 0.0
) -> ComplexTransmission:
    """
    Bright-mode amplitude transmission over a depth z at sideband frequency ω:
    τ(ω, z) = exp(−κ z γ₁₂ / (γ₁₂ − i(ω − δ₁₂))). At ω = δ₁₂ this is plain
    Beer absorption e^{−κz}; far off resonance |τ| → 1 with a residual phase.
    """
    if z < 0:
        raise InvalidInputError("z must be >= 0")
    d = omega - detuning
    s = eff.kappa * z * gamma12 / (gamma12 * gamma12 + d * d)
    return ComplexTransmission(cmath.rect(math.exp(-s * gamma12), -s * d))


def propagate(
    state: GaussianState,
    eff: EffectiveParams,
    gamma12: float,
    grid: PropagationGrid,
    profile: DetuningProfile | None = None,
    sample_epsilon_inverted: bool = False,
) -> list[tuple[float, float, GaussianState]]:
    """
    March a two-mode Gaussian state through the sample, one snapshot per slice
    boundary and probe frequency.

    Per frequency the state is rotated to the bright/dark basis, the cumulative
    loss channel (exact per slice, detuning frozen at each slice midpoint) is
    applied to the bright mode — the dark mode when `sample_epsilon_inverted`
    marks a sample with exchanged coupling ratio — and the result is rotated
    back. Returns (z, omega, state) tuples ordered by z, then omega. The
    frequency sweep may run on a thread pool (capped by ODSIM_THREADS); results
    are identical to serial evaluation.
    """
    if state.n_modes != 2:
        raise InvalidInputError(f"propagate needs a two-mode state, got {state.n_modes} modes")
    if gamma12 <= 0:
        raise UnphysicalParameterError("gamma12 must be > 0")
    if profile is None:
        profile = DetuningProfile.none()
    n = grid.z_steps
    dz = grid.length / n
    z_edges = np.linspace(0.0, grid.length, n + 1)
    mid_detunings = np.ascontiguousarray(profile.values(z_edges[:-1] + 0.5 * dz))

    bogo = bogoliubov_symplectic(eff.epsilon, state.mode_labels)
    fwd = bogo.matrix
    back = bogo.inverse().matrix
    cov_bd = fwd @ state.cov @ fwd.T
    cov_bd = np.ascontiguousarray(0.5 * (cov_bd + cov_bd.T))
    mean_bd = np.ascontiguousarray(fwd @ state.mean)
    bright_first = not sample_epsilon_inverted

    def trajectory(omega: float) -> list[GaussianState]:
        taus = kernels.slice_transmissions(eff.kappa, gamma12, dz, omega, mid_detunings)
        covs, means = kernels.loss_snapshots(cov_bd, mean_bd, bright_first, taus)
        covs_ab = np.einsum("ij,njk,lk->nil", back, covs, back)
        covs_ab = 0.5 * (covs_ab + covs_ab.transpose(0, 2, 1))
        means_ab = means @ back.T
        return [GaussianState(state.mode_labels, means_ab[j], covs_ab[j]) for j in range(n + 1)]

    omegas = grid.omega_list
    workers = min(worker_count(), len(omegas))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trajectories = list(pool.map(trajectory, omegas))
    else:
        trajectories = [trajectory(w) for w in omegas]

    return [
        (float(z_edges[j]), omegas[k], trajectories[k][j])
        for j in range(n + 1)
        for k in range(len(omegas))
    ]


def swap_sample(state: GaussianState, light_mode: str, atom_mode: str) -> GaussianState:
    """
    Idealized infinite-optical-depth memory interaction: exchange the full
    phase-space content (block, correlations, mean) of two modes.
    """
    if light_mode == atom_mode:
        raise InvalidInputError("cannot swap a mode with itself")
    i = state.mode_index(light_mode)
    j = state.mode_index(atom_mode)
    perm = np.arange(2 * state.n_modes)
    perm[[2 * i, 2 * i + 1, 2 * j, 2 * j + 1]] = [2 * j, 2 * j + 1, 2 * i, 2 * i + 1]
    return GaussianState(state.mode_labels, state.mean[perm], state.cov[np.ix_(perm, perm)])
