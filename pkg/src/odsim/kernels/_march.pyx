# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled slice-march kernels for the frequency-domain propagation engine."""

from libc.math cimport cos, exp, sin

import numpy as np


cdef inline double complex _make(double re, double im) noexcept nogil:
    return re + 1j * im


def slice_transmissions(double kappa, double gamma12, double dz, double omega,
                        double[::1] detunings):
    """
    Cumulative complex transmission of the bright mode at every slice boundary.

    Slice i contributes the exponent κ·dz·γ₁₂ / (γ₁₂ − i(ω − δᵢ)) evaluated at
    the slice-midpoint detuning δᵢ; entry 0 of the result is the input face
    (τ = 1) and entry i+1 the boundary after slice i.
    """
    cdef Py_ssize_t n = detunings.shape[0]
    out = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    cdef double d, s, w_re = 0.0, w_im = 0.0, mag
    with nogil:
        o[0] = _make(1.0, 0.0)
        for i in range(n):
            d = omega - detunings[i]
            s = kappa * dz * gamma12 / (gamma12 * gamma12 + d * d)
            w_re += s * gamma12
            w_im += s * d
            mag = exp(-w_re)
            o[i + 1] = _make(mag * cos(w_im), -mag * sin(w_im))
    return out


def loss_snapshots(double[:, ::1] cov, double[::1] mean, bint bright_first,
                   double complex[::1] taus):
    """
    Apply the loss channel with each cumulative τ to the bright 2×2 block of a
    two-mode covariance matrix (bright/dark ordering) and its mean.

    Returns stacked covariances (m, 4, 4) and means (m, 4), one per τ. The
    dark block is untouched; cross blocks scale by the channel map; the bright
    block picks up (1 − |τ|²)/2 of vacuum noise.
    """
    cdef Py_ssize_t m = taus.shape[0]
    covs = np.empty((m, 4, 4), dtype=np.float64)
    means = np.empty((m, 4), dtype=np.float64)
    cdef double[:, :, ::1] C = covs
    cdef double[:, ::1] M = means
    cdef Py_ssize_t b = 0 if bright_first else 2
    cdef Py_ssize_t d = 2 if bright_first else 0
    cdef Py_ssize_t j
    cdef double tr, ti, loss
    cdef double b00, b01, b10, b11, q00, q01, q10, q11
    cdef double c00, c01, c10, c11, x00, x01, x10, x11
    with nogil:
        for j in range(m):
            tr = taus[j].real
            ti = taus[j].imag
            loss = 1.0 - (tr * tr + ti * ti)
            # bright block: T @ bb @ T.T + loss/2 * I, with T = [[tr, -ti], [ti, tr]]
            b00 = cov[b, b]
            b01 = cov[b, b + 1]
            b10 = cov[b + 1, b]
            b11 = cov[b + 1, b + 1]
            q00 = tr * b00 - ti * b10
            q01 = tr * b01 - ti * b11
            q10 = ti * b00 + tr * b10
            q11 = ti * b01 + tr * b11
            C[j, b, b] = q00 * tr - q01 * ti + 0.5 * loss
            C[j, b, b + 1] = q00 * ti + q01 * tr
            C[j, b + 1, b] = q10 * tr - q11 * ti
            C[j, b + 1, b + 1] = q10 * ti + q11 * tr + 0.5 * loss
            # cross block: T @ bd, mirrored into db
            c00 = cov[b, d]
            c01 = cov[b, d + 1]
            c10 = cov[b + 1, d]
            c11 = cov[b + 1, d + 1]
            x00 = tr * c00 - ti * c10
            x01 = tr * c01 - ti * c11
            x10 = ti * c00 + tr * c10
            x11 = ti * c01 + tr * c11
            C[j, b, d] = x00
            C[j, b, d + 1] = x01
            C[j, b + 1, d] = x10
            C[j, b + 1, d + 1] = x11
            C[j, d, b] = x00
            C[j, d + 1, b] = x01
            C[j, d, b + 1] = x10
            C[j, d + 1, b + 1] = x11
            # dark block unchanged
            C[j, d, d] = cov[d, d]
            C[j, d, d + 1] = cov[d, d + 1]
            C[j, d + 1, d] = cov[d + 1, d]
            C[j, d + 1, d + 1] = cov[d + 1, d + 1]
            M[j, b] = tr * mean[b] - ti * mean[b + 1]
            M[j, b + 1] = ti * mean[b] + tr * mean[b + 1]
            M[j, d] = mean[d]
            M[j, d + 1] = mean[d + 1]
    return covs, means
