"""Kernel backend selection.

The compiled extension is used when it was built and ``PTLTL_PURE_PYTHON`` is
unset; otherwise the numpy implementations are used.  ``BACKEND`` names the
active choice.
"""

import os

BACKEND = "numpy"

if not os.environ.get("PTLTL_PURE_PYTHON"):
    try:
        from ._kernels import gather, guard_reduce, since_scan
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "numpy":
    from ._pykernels import gather, guard_reduce, since_scan

__all__ = ["BACKEND", "gather", "guard_reduce", "since_scan"]
