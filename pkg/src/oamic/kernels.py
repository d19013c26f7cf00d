"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built; the
numpy fallback is selected otherwise. Set ``OAMIC_PURE_PYTHON=1`` in the
environment to force the fallback (used by the benchmark and CI).
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("OAMIC_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl.__name__.endswith("_kernels_c") else "python"


def _as_c128(arr):
    return np.ascontiguousarray(arr, dtype=np.complex128)


def kraus_apply(ops, rho):
    """sum_k K_k rho K_k^dagger over stacked operators ops of shape (k, r, c)."""
    return _impl.kraus_apply(_as_c128(ops), _as_c128(rho))


def trace_product(a, b):
    """trace(a @ b) as a complex scalar."""
    return _impl.trace_product(_as_c128(a), _as_c128(b))
