"""Backend parity: the compiled kernels must match the pure-Python twins."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qfde import _kernels_py
from qfde._kernels import kernel_backend
from qfde.errors import NonConvergenceError, SingularKernelError

_kernels_cy = pytest.importorskip(
    "qfde._kernels_cy", reason="compiled kernel extension not built")


def _arg_grid():
    rng = np.random.default_rng(123)
    for _ in range(200):
        t = rng.uniform(0.1, 3.0)
        s = t * rng.uniform(0.0, 1.0)
        alpha = rng.uniform(-1.8, 0.9)
        if abs(alpha - round(alpha)) < 1e-3:
            alpha += 0.1
        q = rng.uniform(0.15, 0.9)
        yield t, s, alpha, q


def test_shifted_factorial_backends_bit_identical():
    for t, s, alpha, q in _arg_grid():
        a = _kernels_py.shifted_factorial_real(t, s, alpha, q, 1e-14, 10_000)
        b = _kernels_cy.shifted_factorial_real(t, s, alpha, q, 1e-14, 10_000)
        assert a == b, (t, s, alpha, q)


def test_b1_weight_backends_bit_identical():
    rng = np.random.default_rng(321)
    for _ in range(60):
        q = rng.uniform(0.2, 0.85)
        alpha = rng.uniform(0.05, 0.95)
        N = int(rng.integers(2, 12))
        n = int(rng.integers(1, N + 1))
        t_n = q ** (N - n)
        t_1 = q ** (N - 1)
        a = _kernels_py.b1_weight(t_n, t_1, alpha, q, 1e-14, 10_000)
        b = _kernels_cy.b1_weight(t_n, t_1, alpha, q, 1e-14, 10_000)
        assert a == b, (q, alpha, N, n)


@pytest.mark.parametrize("mod", [_kernels_py, _kernels_cy],
                         ids=["python", "cython"])
def test_kernel_error_paths(mod):
    with pytest.raises(NonConvergenceError):
        mod.shifted_factorial_real(1.0, 0.9, -0.5, 0.9, 1e-14, 3)
    # alpha = -2 puts q^(alpha+i) through 1 exactly at i=2, so with s = t
    # the denominator t - s vanishes
    with pytest.raises(SingularKernelError):
        mod.shifted_factorial_real(1.0, 1.0, -2.0, 0.5, 1e-14, 100)
    with pytest.raises(NonConvergenceError):
        mod.b1_weight(1.0, 0.5, 0.5, 0.5, 1e-14, 2)


def test_active_backend_reported():
    assert kernel_backend() in ("cython", "python")


def test_pure_python_env_override():
    code = ("import qfde; import sys; "
            "sys.exit(0 if qfde.kernel_backend() == 'python' else 1)")
    env = dict(os.environ, QFDE_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], env=env)
    assert proc.returncode == 0
