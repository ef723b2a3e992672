"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python twin when
the extension was not built.  Set ``QFDE_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and the backend-parity tests).
"""

import os

if os.environ.get("QFDE_PURE_PYTHON", "0") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

shifted_factorial_real = _impl.shifted_factorial_real
b1_weight = _impl.b1_weight


def kernel_backend():
    """Name of the active kernel backend: 'cython' or 'python'."""
    return BACKEND
