import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

import adec
from adec import _core, _fallback

try:
    from adec import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")


def test_backend_name():
    assert adec.BACKEND in ("cython", "python")
    assert adec.BACKEND == _core.BACKEND


def test_env_override_selects_python():
    env = dict(os.environ, ADEC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import adec; print(adec.BACKEND)"], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
@pytest.mark.parametrize("r", [1, 2, 3, 5])
def test_sigma_delta_kernels_agree(r):
    y = np.random.default_rng(r).uniform(-4, 4, 500)
    a = _kernels.greedy_sd_real(y, r, 0.25, 8)
    b = _fallback.greedy_sd_real(y, r, 0.25, 8)
    assert np.array_equal(np.asarray(a[0]), np.asarray(b[0]))
    assert np.array_equal(np.asarray(a[1]), np.asarray(b[1]))
    assert bool(a[2]) == bool(b[2])


@needs_ext
@pytest.mark.parametrize("k", [1, 2, 5, 12])
def test_jacobi_kernels_agree(k):
    rng = np.random.default_rng(k)
    Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    M = np.ascontiguousarray((Z + Z.conj().T) / 2)
    d1, V1, s1 = _kernels.jacobi_eigh(M.copy(), 100, 1e-15)
    d2, V2, s2 = _fallback.jacobi_eigh(M.copy(), 100, 1e-15)
    assert s1 >= 0 and s2 >= 0
    assert np.allclose(np.sort(np.asarray(d1)), np.sort(np.asarray(d2)), atol=1e-12)
    for d, V in ((d1, V1), (d2, V2)):
        V = np.asarray(V)
        assert np.allclose(V @ np.diag(np.asarray(d)) @ V.conj().T, M, atol=1e-12)


def test_reload_is_idempotent():
    importlib.reload(_core)
    assert _core.BACKEND == adec.BACKEND
