# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled hot kernels: fused Kraus-sum application and trace products.

Matrices in this package are tiny (dimension a few dozen at most), so the
per-call overhead of chained numpy operations dominates. These fused loops
avoid temporaries and dispatch overhead; ``oamic._kernels_py`` provides the
drop-in numpy equivalents.
"""

import numpy as np


def kraus_apply(double complex[:, :, ::1] ops, double complex[:, ::1] rho):
    """Return sum_k K_k rho K_k^dagger for stacked operators ops[k]."""
    cdef Py_ssize_t n_ops = ops.shape[0]
    cdef Py_ssize_t nr = ops.shape[1]
    cdef Py_ssize_t nc = ops.shape[2]
    if rho.shape[0] != nc or rho.shape[1] != nc:
        raise ValueError("state dimension does not match operator columns")

    out_arr = np.zeros((nr, nr), dtype=np.complex128)
    tmp_arr = np.empty((nr, nc), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t k, i, j, t
    cdef double complex acc

    for k in range(n_ops):
        for i in range(nr):
            for j in range(nc):
                acc = 0
                for t in range(nc):
                    acc = acc + ops[k, i, t] * rho[t, j]
                tmp[i, j] = acc
        for i in range(nr):
            for j in range(nr):
                acc = 0
                for t in range(nc):
                    acc = acc + tmp[i, t] * ops[k, j, t].conjugate()
                out[i, j] = out[i, j] + acc
    return out_arr


def trace_product(double complex[:, ::1] a, double complex[:, ::1] b):
    """Return trace(a @ b) without forming the product."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = a.shape[1]
    if b.shape[0] != m or b.shape[1] != n:
        raise ValueError("operand shapes are not trace compatible")
    cdef double complex acc = 0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            acc = acc + a[i, j] * b[j, i]
    return complex(acc)
