"""Pure numpy kernels, API-identical to the compiled ``_kernels_c``."""

import numpy as np


def kraus_apply(ops, rho):
    """Return sum_k K_k rho K_k^dagger for stacked operators ops[k]."""
    if rho.shape[0] != ops.shape[2] or rho.shape[1] != ops.shape[2]:
        raise ValueError("state dimension does not match operator columns")
    return np.einsum("kij,jl,kml->im", ops, rho, ops.conj(), optimize=True)


def trace_product(a, b):
    """Return trace(a @ b) without forming the product."""
    if b.shape[0] != a.shape[1] or b.shape[1] != a.shape[0]:
        raise ValueError("operand shapes are not trace compatible")
    return complex(np.einsum("ij,ji->", a, b))
