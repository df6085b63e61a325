"""Pure-NumPy fallback for the slice-march kernels; same contract as the extension."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray


def slice_transmissions(
    kappa: float, gamma12: float, dz: float, omega: float, detunings: NDArray[np.float64]
) -> NDArray[np.complex128]:
    """Cumulative complex transmission at every slice boundary (entry 0 is the input face)."""
    d = omega - np.asarray(detunings, dtype=float)
    s = kappa * dz * gamma12 / (gamma12 * gamma12 + d * d)
    w_re = np.concatenate(([0.0], np.cumsum(s * gamma12)))
    w_im = np.concatenate(([0.0], np.cumsum(s * d)))
    mag = np.exp(-w_re)
    return mag * np.cos(w_im) - 1j * (mag * np.sin(w_im))


def loss_snapshots(
    cov: NDArray[np.float64],
    mean: NDArray[np.float64],
    bright_first: bool,
    taus: NDArray[np.complex128],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Loss channel with each cumulative τ applied to the bright block; see the extension."""
    cov = np.asarray(cov, dtype=float)
    mean = np.asarray(mean, dtype=float)
    taus = np.asarray(taus, dtype=complex)
    m = taus.shape[0]
    b = 0 if bright_first else 2
    d = 2 if bright_first else 0
    tr, ti = taus.real, taus.imag
    t = np.empty((m, 2, 2))
    t[:, 0, 0] = tr
    t[:, 0, 1] = -ti
    t[:, 1, 0] = ti
    t[:, 1, 1] = tr
    loss = 1.0 - (tr * tr + ti * ti)

    covs = np.broadcast_to(cov, (m, 4, 4)).copy()
    means = np.broadcast_to(mean, (m, 4)).copy()
    bb = cov[b : b + 2, b : b + 2]
    bd = cov[b : b + 2, d : d + 2]
    new_bb = t @ bb @ np.swapaxes(t, 1, 2) + (0.5 * loss)[:, None, None] * np.eye(2)
    new_bd = t @ bd
    covs[:, b : b + 2, b : b + 2] = new_bb
    covs[:, b : b + 2, d : d + 2] = new_bd
    covs[:, d : d + 2, b : b + 2] = np.swapaxes(new_bd, 1, 2)
    means[:, b : b + 2] = np.einsum("nij,j->ni", t, mean[b : b + 2])
    return covs, means
