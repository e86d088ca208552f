"""Numpy implementations of the truth-table kernels (fallback backend)."""

import numpy as np


def gather(values, idx):
    """``out[k] = values[idx[k]]``, or 0 where ``idx[k] < 0``."""
    out = np.zeros(len(idx), dtype=np.uint8)
    mask = idx >= 0
    out[mask] = values[idx[mask]]
    return out


def since_scan(a, b):
    """Column-wise ``out[0] = b[0]``, ``out[r] = b[r] | (a[r] & out[r-1])``."""
    out = np.empty_like(b)
    if len(b):
        out[0] = b[0]
    for r in range(1, len(b)):
        np.bitwise_or(b[r], a[r] & out[r - 1], out=out[r])
    return out


def guard_reduce(out, body, pidx, bidx):
    """In place: ``out[pidx[k]] &= body[bidx[k]]`` for every k."""
    if len(pidx):
        np.minimum.at(out, pidx, body[bidx])
