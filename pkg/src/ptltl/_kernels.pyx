# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled truth-table kernels; same contracts as the numpy fallback."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def gather(const unsigned char[:] values, const cnp.intp_t[:] idx):
    cdef Py_ssize_t k, n = idx.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[:] o = out
    for k in range(n):
        if idx[k] >= 0:
            o[k] = values[idx[k]]
    return out


def since_scan(const unsigned char[:, :] a, const unsigned char[:, :] b):
    cdef Py_ssize_t n = b.shape[0], m = b.shape[1], r, c
    out = np.empty((n, m), dtype=np.uint8)
    cdef unsigned char[:, :] o = out
    if n == 0:
        return out
    for c in range(m):
        o[0, c] = b[0, c]
    for r in range(1, n):
        for c in range(m):
            o[r, c] = b[r, c] | (a[r, c] & o[r - 1, c])
    return out


def guard_reduce(unsigned char[:] out, const unsigned char[:] body,
                 const cnp.intp_t[:] pidx, const cnp.intp_t[:] bidx):
    cdef Py_ssize_t k, n = pidx.shape[0]
    for k in range(n):
        out[pidx[k]] &= body[bidx[k]]
