"""
Closed-form expectations for the Raman-medium model, as standalone pure functions.

These are the independent formulas the propagation engine is checked against;
none of them share code with the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularInputError, UnphysicalParameterError


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon < 1.0:
        raise UnphysicalParameterError("epsilon must be in [0,1)")
    return epsilon


@dataclass(frozen=True)
class VariancePair:
    """Variances of X₁ + X₂ (sum_var) and X₁ − X₂ (diff_var)."""

    sum_var: float
    diff_var: float

    def __post_init__(self) -> None:
        if self.sum_var * self.diff_var < 1.0 - 1e-9:
            raise UnphysicalParameterError("sum_var * diff_var must be >= 1")


def od_variances(epsilon: float) -> VariancePair:
    """Sum/difference quadrature variances of the matched two-mode squeezed state: (1±ε)/(1∓ε)."""
    epsilon = _check_epsilon(epsilon)
    return VariancePair(
        sum_var=(1 + epsilon) / (1 - epsilon),
        diff_var=(1 - epsilon) / (1 + epsilon),
    )


def post_sample_variances(epsilon: float) -> VariancePair:
    """Sum/difference quadrature variances after one fully absorbing sample: (1±ε)⁻²."""
    epsilon = _check_epsilon(epsilon)
    return VariancePair(
        sum_var=(1 + epsilon) ** -2,
        diff_var=(1 - epsilon) ** -2,
    )


def post_sample_variances_hyperbolic(epsilon: float) -> VariancePair:
    """
    Same quantities as `post_sample_variances` in hyperbolic form,
    ½ e^{∓2r} (1 + cosh 2r) with r = squeezing_parameter(ε); upper signs pair
    (sum_var uses e^{−2r}). Kept separate so the two forms can be cross-checked.
    """
    r = squeezing_parameter(epsilon)
    common = 0.5 * (1.0 + math.cosh(2 * r))
    return VariancePair(
        sum_var=math.exp(-2 * r) * common,
        diff_var=math.exp(2 * r) * common,
    )


def thermal_dark_mean(epsilon: float) -> float:
    """Mean occupation of the dark mode once the bright mode has been absorbed: ε²/(1−ε²)."""
    epsilon = _check_epsilon(epsilon)
    return epsilon**2 / (1 - epsilon**2)


def bright_variance(epsilon: float, kappa_z: float, omega_over_gamma: float) -> float:
    """
    Bright-mode quadrature variance at optical depth κZ for vacuum input:
    1/2 + ε²/(1−ε²) · exp(−2κZ / (1 + (ω/γ₁₂)²)).
    """
    epsilon = _check_epsilon(epsilon)
    if kappa_z < 0:
        raise UnphysicalParameterError("kappa_z must be >= 0")
    decay = math.exp(-2.0 * kappa_z / (1.0 + omega_over_gamma**2))
    return 0.5 + epsilon**2 / (1 - epsilon**2) * decay


def squeezing_parameter(epsilon: float) -> float:
    """Squeezing parameter r = ½ ln((1+ε)/(1−ε)) ≥ 0, inverse of ε = tanh r."""
    epsilon = _check_epsilon(epsilon)
    return 0.5 * math.log((1 + epsilon) / (1 - epsilon))


def epsilon_from_squeezing(r: float) -> float:
    """Inverse of `squeezing_parameter`: ε = tanh r."""
    if r < 0:
        raise UnphysicalParameterError("squeezing parameter must be >= 0")
    return math.tanh(r)


def gem_phase(kappa: float, gamma12: float, dz: float, delta: float, omega: float) -> float:
    """
    Far-detuned phase shift acquired over a slice dz: φ = κ γ₁₂ dz / (δ₁₂ − ω).

    Valid large-detuning limit of the transfer-function argument; raises on
    exact two-photon resonance δ₁₂ = ω, where the full transfer function applies.
    """
    if delta == omega:
        raise SingularInputError("delta == omega: on resonance, use the full transfer function")
    return kappa * gamma12 * dz / (delta - omega)
