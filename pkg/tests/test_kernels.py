"""Backend equivalence and correctness of the slice-march kernels."""

import cmath
import subprocess
import sys

import numpy as np
import pytest

from odsim import kernels
from odsim.kernels import march_py

compiled = kernels.get_backend("compiled")
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")


def _grid(n, kind, rng):
    if kind == "flat":
        return np.zeros(n)
    if kind == "linear":
        return np.linspace(-10.0, 10.0, n)
    return rng.normal(scale=3.0, size=n)


@needs_compiled
@pytest.mark.parametrize("kind", ["flat", "linear", "random"])
@pytest.mark.parametrize("omega", [0.0, 1.0, -2.5])
def test_backends_agree_on_transmissions(kind, omega):
    rng = np.random.default_rng(42)
    det = np.ascontiguousarray(_grid(400, kind, rng))
    ref = march_py.slice_transmissions(1.7, 0.9, 0.01, omega, det)
    got = compiled.slice_transmissions(1.7, 0.9, 0.01, omega, det)
    np.testing.assert_allclose(got, ref, rtol=1e-13, atol=1e-300)


@needs_compiled
def test_backends_agree_on_snapshots():
    rng = np.random.default_rng(43)
    det = np.ascontiguousarray(_grid(300, "linear", rng))
    taus = march_py.slice_transmissions(2.0, 1.0, 0.005, 0.5, det)
    # generic symmetric physical-looking 4x4
    a = rng.normal(size=(4, 4))
    cov = np.ascontiguousarray(0.5 * np.eye(4) + 0.1 * (a + a.T) + 0.5 * a @ a.T)
    mean = np.ascontiguousarray(rng.normal(size=4))
    for bright_first in (True, False):
        c_ref, m_ref = march_py.loss_snapshots(cov, mean, bright_first, taus)
        c_got, m_got = compiled.loss_snapshots(cov, mean, bright_first, taus)
        np.testing.assert_allclose(c_got, c_ref, rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(m_got, m_ref, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("backend", ["python", "compiled"])
def test_transmissions_match_closed_form(backend):
    mod = kernels.get_backend(backend)
    if mod is None:
        pytest.skip("compiled kernel not built")
    kappa, gamma, dz, omega, delta = 3.0, 0.7, 0.002, 1.3, -0.4
    n = 500
    det = np.full(n, delta)
    taus = mod.slice_transmissions(kappa, gamma, dz, omega, det)
    z = np.arange(n + 1) * dz
    want = np.array([cmath.exp(-kappa * zz * gamma / (gamma - 1j * (omega - delta))) for zz in z])
    np.testing.assert_allclose(taus, want, rtol=1e-11, atol=1e-14)


def test_snapshots_identity_and_full_absorption():
    rng = np.random.default_rng(44)
    a = rng.normal(size=(4, 4))
    cov = 0.5 * np.eye(4) + 0.5 * a @ a.T
    mean = rng.normal(size=4)
    taus = np.array([1.0 + 0.0j, 0.0 + 0.0j])
    covs, means = kernels.loss_snapshots(cov, mean, True, taus)
    np.testing.assert_allclose(covs[0], cov, atol=1e-15)
    np.testing.assert_allclose(means[0], mean, atol=1e-15)
    # full absorption: bright block reset to vacuum, correlations gone, dark intact
    np.testing.assert_allclose(covs[1][:2, :2], 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(covs[1][:2, 2:], 0.0, atol=1e-15)
    np.testing.assert_allclose(covs[1][2:, 2:], cov[2:, 2:], atol=1e-15)
    np.testing.assert_allclose(means[1], [0.0, 0.0, mean[2], mean[3]], atol=1e-15)


def test_bright_selection_flag():
    cov = np.diag([1.5, 1.5, 2.5, 2.5])
    mean = np.zeros(4)
    taus = np.array([0.0 + 0.0j])
    covs, _ = kernels.loss_snapshots(cov, mean, False, taus)
    # inverted coupling: the second block is the absorbed one
    np.testing.assert_allclose(covs[0][2:, 2:], 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(covs[0][:2, :2], cov[:2, :2], atol=1e-15)


def test_env_var_forces_python_backend():
    code = (
        "import odsim.kernels as k; "
        "assert k.ACTIVE_KERNEL == 'python', k.ACTIVE_KERNEL; "
        "print(k.ACTIVE_KERNEL)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "ODSIM_KERNEL": "python"},
        cwd="/",
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"


def test_active_kernel_is_reported():
    assert kernels.ACTIVE_KERNEL in ("python", "compiled")
