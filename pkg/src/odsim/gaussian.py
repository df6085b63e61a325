"""
Gaussian states over labeled bosonic modes and the linear optics acting on them.

Conventions: X = (a + a†)/√2, P = (a − a†)/(i√2) with ħ = 1, quadratures
ordered (X₁, P₁, X₂, P₂, ...), so the vacuum covariance is (1/2)·Identity and
Var(X₁ ± X₂) = 1 at vacuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import (
    InvalidInputError,
    NumericalDegeneracyError,
    PhysicalityError,
    UnphysicalParameterError,
)

VACUUM_VARIANCE = 0.5
SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form Ω for n modes in (X, P) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _symplectic_eigenvalues_of(cov: NDArray[np.float64]) -> NDArray[np.float64]:
    """Symplectic spectrum of a covariance matrix, ascending."""
    n = cov.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ cov)
    # eigenvalues come in ±iν pairs; keep one of each
    return np.sort(np.abs(ev.imag))[::2]


def _check_labels(labels: Sequence[str]) -> tuple[str, ...]:
    labels = tuple(labels)
    if not labels:
        raise InvalidInputError("at least one mode label is required")
    if len(set(labels)) != len(labels):
        raise InvalidInputError(f"duplicate mode labels: {labels}")
    return labels


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix over an ordered list of labeled modes."""

    mode_labels: tuple[str, ...]
    mean: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self) -> None:
        labels = _check_labels(self.mode_labels)
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        dim = 2 * len(labels)
        if mean.shape != (dim,):
            raise InvalidInputError(f"mean must have shape ({dim},), got {mean.shape}")
        if cov.shape != (dim, dim):
            raise InvalidInputError(f"cov must have shape ({dim}, {dim}), got {cov.shape}")
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise InvalidInputError("mean and cov must be finite")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if float(np.max(np.abs(cov - cov.T))) > SYMMETRY_TOL * scale:
            raise InvalidInputError("cov must be symmetric")
        if float(np.min(_symplectic_eigenvalues_of(cov))) < VACUUM_VARIANCE - PHYSICALITY_TOL:
            raise PhysicalityError("cov violates the uncertainty bound (symplectic eigenvalue < 1/2)")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mode_labels", labels)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    def mode_index(self, mode: str) -> int:
        try:
            return self.mode_labels.index(mode)
        except ValueError:
            raise InvalidInputError(f"unknown mode {mode!r}; have {self.mode_labels}") from None


@dataclass(frozen=True)
class SymplecticTransform:
    """Linear quadrature map S (with S Ω Sᵀ = Ω) acting on the listed target modes."""

    matrix: NDArray[np.float64]
    target_modes: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = _check_labels(self.target_modes)
        m = np.array(self.matrix, dtype=float)
        dim = 2 * len(labels)
        if m.shape != (dim, dim):
            raise InvalidInputError(f"matrix must have shape ({dim}, {dim}), got {m.shape}")
        omega = symplectic_form(len(labels))
        if float(np.max(np.abs(m @ omega @ m.T - omega))) > SYMPLECTIC_TOL:
            raise InvalidInputError("matrix is not symplectic")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "target_modes", labels)

    def inverse(self) -> "SymplecticTransform":
        """Exact symplectic inverse S⁻¹ = Ω Sᵀ Ωᵀ."""
        omega = symplectic_form(len(self.target_modes))
        return SymplecticTransform(omega @ self.matrix.T @ omega.T, self.target_modes)


@dataclass(frozen=True)
class ComplexTransmission:
    """Complex amplitude transmission τ of a one-mode loss channel, |τ| ≤ 1."""

    amplitude: complex

    def __post_init__(self) -> None:
        tau = complex(self.amplitude)
        if abs(tau) > 1.0 + 1e-12:
            raise UnphysicalParameterError(f"|tau| must be <= 1, got {abs(tau)}")
        object.__setattr__(self, "amplitude", tau)

    @property
    def magnitude(self) -> float:
        return abs(self.amplitude)

    @property
    def phase(self) -> float:
        return math.atan2(self.amplitude.imag, self.amplitude.real)


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------

def vacuum_state(mode_labels: Sequence[str]) -> GaussianState:
    """Vacuum over the given modes: zero mean, covariance (1/2)·Identity."""
    labels = _check_labels(mode_labels)
    dim = 2 * len(labels)
    return GaussianState(labels, np.zeros(dim), VACUUM_VARIANCE * np.eye(dim))


def thermal_state(mode_labels: Sequence[str], nbars: Sequence[float] | float) -> GaussianState:
    """Product of thermal modes with mean occupations `nbars`."""
    labels = _check_labels(mode_labels)
    if np.isscalar(nbars):
        nbars = [float(nbars)] * len(labels)
    nbars = [float(n) for n in nbars]
    if len(nbars) != len(labels):
        raise InvalidInputError("need one occupation per mode")
    if any(n < 0 for n in nbars):
        raise UnphysicalParameterError("thermal occupation must be >= 0")
    diag = np.repeat([n + VACUUM_VARIANCE for n in nbars], 2)
    return GaussianState(labels, np.zeros(2 * len(labels)), np.diag(diag))


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon < 1.0:
        raise UnphysicalParameterError("epsilon must be in [0,1)")
    return epsilon


def tmsv_state(epsilon: float, labels: Sequence[str] = ("a", "b")) -> GaussianState:
    """
    Two-mode squeezed vacuum with mixing ratio ε = tanh(r).

    The X quadratures are correlated: Var(X₁ − X₂) = (1−ε)/(1+ε) and
    Var(X₁ + X₂) = (1+ε)/(1−ε); pure for every ε in [0, 1).
    """
    epsilon = _check_epsilon(epsilon)
    labels = _check_labels(labels)
    if len(labels) != 2:
        raise InvalidInputError("tmsv_state needs exactly two mode labels")
    c2r = (1 + epsilon**2) / (1 - epsilon**2)
    s2r = 2 * epsilon / (1 - epsilon**2)
    cov = VACUUM_VARIANCE * np.array(
        [
            [c2r, 0.0, s2r, 0.0],
            [0.0, c2r, 0.0, -s2r],
            [s2r, 0.0, c2r, 0.0],
            [0.0, -s2r, 0.0, c2r],
        ]
    )
    return GaussianState(labels, np.zeros(4), cov)


# ---------------------------------------------------------------------------
# transform constructors
# ---------------------------------------------------------------------------

def identity_symplectic(modes: Sequence[str]) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2 * len(tuple(modes))), tuple(modes))


def rotation_symplectic(theta: float, mode: str) -> SymplecticTransform:
    """Phase-space rotation a → e^{iθ} a on one mode."""
    c, s = math.cos(theta), math.sin(theta)
    return SymplecticTransform(np.array([[c, -s], [s, c]]), (mode,))


def squeeze_symplectic(r: float, mode: str) -> SymplecticTransform:
    """Single-mode squeezer: X → e^{−r} X, P → e^{r} P."""
    return SymplecticTransform(np.diag([math.exp(-r), math.exp(r)]), (mode,))


def beamsplitter_symplectic(theta: float, modes: Sequence[str]) -> SymplecticTransform:
    """Beam splitter mixing two modes by angle θ (θ = π/4 is balanced)."""
    modes = tuple(modes)
    if len(modes) != 2:
        raise InvalidInputError("beamsplitter acts on exactly two modes")
    c, s = math.cos(theta), math.sin(theta)
    eye2 = np.eye(2)
    m = np.block([[c * eye2, s * eye2], [-s * eye2, c * eye2]])
    return SymplecticTransform(m, modes)


def two_mode_squeeze_symplectic(r: float, modes: Sequence[str]) -> SymplecticTransform:
    """Two-mode squeezer generated by r(a†b† − ab); maps vacuum to tmsv_state(tanh r)."""
    modes = tuple(modes)
    if len(modes) != 2:
        raise InvalidInputError("two-mode squeezer acts on exactly two modes")
    ch, sh = math.cosh(r), math.sinh(r)
    z = np.diag([1.0, -1.0])
    eye2 = np.eye(2)
    m = np.block([[ch * eye2, sh * z], [sh * z, ch * eye2]])
    return SymplecticTransform(m, modes)


def bogoliubov_symplectic(epsilon: float, modes: Sequence[str] = ("a", "b")) -> SymplecticTransform:
    """
    Quadrature map from the physical pair (a, b) to the bright/dark pair (B, D).

    B = (a − ε b†)/α₀ and D = (b − ε a†)/α₀ with α₀ = √(1−ε²); the mixing sign
    is fixed so that the correlated-X two-mode squeezed state tmsv_state(ε) maps
    to the (B, D) vacuum. On quadratures: X_B = (X_a − ε X_b)/α₀,
    P_B = (P_a + ε P_b)/α₀ and symmetrically for D.
    """
    epsilon = _check_epsilon(epsilon)
    modes = tuple(modes)
    if len(modes) != 2:
        raise InvalidInputError("bogoliubov transform acts on exactly two modes")
    a0i = 1.0 / math.sqrt(1.0 - epsilon**2)
    e = epsilon
    m = a0i * np.array(
        [
            [1.0, 0.0, -e, 0.0],
            [0.0, 1.0, 0.0, e],
            [-e, 0.0, 1.0, 0.0],
            [0.0, e, 0.0, 1.0],
        ]
    )
    return SymplecticTransform(m, modes)


def random_symplectic(
    modes: Sequence[str], rng: np.random.Generator, max_squeeze: float = 1.5
) -> SymplecticTransform:
    """Random symplectic built from rotations, beam splitters, and squeezers."""
    modes = tuple(modes)
    n = len(modes)
    full = np.eye(2 * n)

    def embed(t: SymplecticTransform) -> NDArray[np.float64]:
        f = np.eye(2 * n)
        idx = []
        for m in t.target_modes:
            k = modes.index(m)
            idx.extend([2 * k, 2 * k + 1])
        f[np.ix_(idx, idx)] = t.matrix
        return f

    for k in range(n):
        full = embed(rotation_symplectic(rng.uniform(0, 2 * math.pi), modes[k])) @ full
        full = embed(squeeze_symplectic(rng.uniform(-max_squeeze, max_squeeze), modes[k])) @ full
    for _ in range(n - 1):
        i, j = rng.choice(n, size=2, replace=False)
        full = embed(beamsplitter_symplectic(rng.uniform(0, 2 * math.pi), (modes[i], modes[j]))) @ full
        full = embed(rotation_symplectic(rng.uniform(0, 2 * math.pi), modes[i])) @ full
    return SymplecticTransform(full, modes)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _embedded_matrix(state: GaussianState, transform: SymplecticTransform) -> NDArray[np.float64]:
    idx = []
    for m in transform.target_modes:
        k = state.mode_index(m)
        idx.extend([2 * k, 2 * k + 1])
    full = np.eye(2 * state.n_modes)
    full[np.ix_(idx, idx)] = transform.matrix
    return full


def apply_symplectic(state: GaussianState, transform: SymplecticTransform) -> GaussianState:
    """Apply S to the addressed modes: mean → S·mean, cov → S·cov·Sᵀ."""
    full = _embedded_matrix(state, transform)
    cov = full @ state.cov @ full.T
    cov = 0.5 * (cov + cov.T)
    return GaussianState(state.mode_labels, full @ state.mean, cov)


def complex_transmission_channel(
    state: GaussianState, mode: str, tau: ComplexTransmission | complex
) -> GaussianState:
    """
    One-mode loss channel with complex amplitude transmission τ.

    Rotates the mode by arg(τ), scales its block by |τ| (cross blocks by |τ|),
    and adds (1 − |τ|²)·(1/2)·Identity of vacuum noise, so the vacuum is a
    fixed point for every admissible τ.
    """
    if not isinstance(tau, ComplexTransmission):
        tau = ComplexTransmission(tau)
    k = state.mode_index(mode)
    t = tau.amplitude
    block = np.array([[t.real, -t.imag], [t.imag, t.real]])
    full = np.eye(2 * state.n_modes)
    full[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = block
    cov = full @ state.cov @ full.T
    loss = 1.0 - (t.real * t.real + t.imag * t.imag)
    cov[2 * k, 2 * k] += VACUUM_VARIANCE * loss
    cov[2 * k + 1, 2 * k + 1] += VACUUM_VARIANCE * loss
    cov = 0.5 * (cov + cov.T)
    return GaussianState(state.mode_labels, full @ state.mean, cov)


def displace(state: GaussianState, mode: str, alpha: complex) -> GaussianState:
    """Displace one mode by the coherent amplitude α: X += √2 Re α, P += √2 Im α."""
    k = state.mode_index(mode)
    mean = state.mean.copy()
    mean[2 * k] += math.sqrt(2.0) * alpha.real
    mean[2 * k + 1] += math.sqrt(2.0) * alpha.imag
    return GaussianState(state.mode_labels, mean, state.cov)


def reduced_state(state: GaussianState, modes: Sequence[str]) -> GaussianState:
    """Marginal state of the selected modes (in the given order)."""
    modes = _check_labels(modes)
    idx = []
    for m in modes:
        k = state.mode_index(m)
        idx.extend([2 * k, 2 * k + 1])
    return GaussianState(modes, state.mean[idx], state.cov[np.ix_(idx, idx)])


def relabel(state: GaussianState, mapping: dict[str, str]) -> GaussianState:
    """Rename modes without touching the numbers."""
    labels = tuple(mapping.get(l, l) for l in state.mode_labels)
    return GaussianState(labels, state.mean, state.cov)


def quad_combo_variance(
    state: GaussianState, coeffs: Iterable[tuple[str, str, float]]
) -> float:
    """
    Variance of a weighted quadrature combination Σ wᵢ Qᵢ.

    `coeffs` lists (mode, quadrature, weight) with quadrature "x" or "p";
    repeated entries accumulate. Returns cᵀ·cov·c.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise InvalidInputError("coefficient list must be nonempty")
    c = np.zeros(2 * state.n_modes)
    for mode, quad, weight in coeffs:
        k = state.mode_index(mode)
        q = quad.lower()
        if q not in ("x", "p"):
            raise InvalidInputError(f"quadrature must be 'x' or 'p', got {quad!r}")
        c[2 * k + (0 if q == "x" else 1)] += float(weight)
    return float(c @ state.cov @ c)


def mean_photon_number(state: GaussianState, mode: str) -> float:
    """⟨a†a⟩ of one mode: (VarX + VarP)/2 + (⟨X⟩² + ⟨P⟩²)/2 − 1/2."""
    k = state.mode_index(mode)
    x, p = 2 * k, 2 * k + 1
    return float(
        0.5 * (state.cov[x, x] + state.cov[p, p])
        + 0.5 * (state.mean[x] ** 2 + state.mean[p] ** 2)
        - 0.5
    )


def _purity_of_cov(cov: NDArray[np.float64], n_modes: int) -> float:
    det = float(np.linalg.det(cov))
    if not np.isfinite(det) or det <= 0.0:
        raise NumericalDegeneracyError("covariance determinant is not positive")
    return float(2.0**-n_modes / math.sqrt(det))


def purity(state: GaussianState) -> float:
    """Tr ρ² = (1/2^N)/√det(cov); equal to 1 exactly for pure states."""
    return _purity_of_cov(state.cov, state.n_modes)


def symplectic_eigenvalues(state: GaussianState) -> NDArray[np.float64]:
    """Symplectic spectrum, ascending; all ≥ 1/2 for physical states."""
    return _symplectic_eigenvalues_of(state.cov)


def log_negativity(
    state: GaussianState, partition: tuple[Sequence[str], Sequence[str]]
) -> float:
    """
    Logarithmic negativity E_N across a bipartition of (a subset of) the modes.

    Computed from the partial-transpose symplectic spectrum:
    E_N = Σ max(0, −log₂(2ν̃)).
    """
    set_a, set_b = (tuple(partition[0]), tuple(partition[1]))
    if not set_a or not set_b:
        raise InvalidInputError("both parts of the partition must be nonempty")
    if set(set_a) & set(set_b):
        raise InvalidInputError("partition parts must be disjoint")
    for m in set_a + set_b:
        state.mode_index(m)
    keep = [l for l in state.mode_labels if l in set_a or l in set_b]
    sub = reduced_state(state, keep) if len(keep) < state.n_modes else state
    flip = np.ones(2 * sub.n_modes)
    for m in set_b:
        flip[2 * sub.mode_index(m) + 1] = -1.0
    cov_pt = sub.cov * np.outer(flip, flip)
    nus = _symplectic_eigenvalues_of(cov_pt)
    return float(np.sum(np.maximum(0.0, -np.log2(2.0 * np.clip(nus, 1e-300, None)))))
