"""Kernel backends: the compiled and pure-array Jacobi evaluators must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.special

from qes.backends import BACKEND, jacobi_arrays, jacobi_numba, jacobi_numpy

X = np.linspace(-7.0, 7.0, 201)


def test_active_backend_is_known():
    assert BACKEND in ("numba", "numpy")


@pytest.mark.parametrize("k", [0.0, 0.2, 0.5, 0.8, 0.95])
def test_numpy_kernel_against_scipy(k):
    sn, cn, dn = jacobi_numpy(X, k)
    sn_r, cn_r, dn_r, _ = scipy.special.ellipj(X, k * k)
    np.testing.assert_allclose(sn, sn_r, atol=1e-12)
    np.testing.assert_allclose(cn, cn_r, atol=1e-12)
    np.testing.assert_allclose(dn, dn_r, atol=1e-12)


@pytest.mark.parametrize("k", [0.0, 0.3, 0.7, 0.99])
def test_backends_agree(k):
    if jacobi_numba is None:
        pytest.skip("numba unavailable")
    a = np.array(jacobi_numpy(X, k))
    b = np.array(jacobi_numba(X, k))
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_active_kernel_matches_numpy():
    a = np.array(jacobi_arrays(X, 0.6))
    b = np.array(jacobi_numpy(X, 0.6))
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_hyperbolic_edge():
    sn, cn, dn = jacobi_numpy(X, 1.0)
    np.testing.assert_allclose(sn, np.tanh(X), atol=1e-12)
    np.testing.assert_allclose(dn, 1.0 / np.cosh(X), atol=1e-12)


def _backend_in_subprocess(value):
    env = dict(os.environ, QES_BACKEND=value)
    return subprocess.run(
        [sys.executable, "-c", "import qes.backends as b; print(b.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )


def test_env_flag_forces_numpy():
    proc = _backend_in_subprocess("numpy")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"


def test_env_flag_rejects_unknown():
    proc = _backend_in_subprocess("fortran")
    assert proc.returncode != 0
    assert "QES_BACKEND" in proc.stderr
