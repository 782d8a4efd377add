"""Numba compilation plumbing for the hot kernels.

Kernels in :mod:`bernseg.kernels` are written as plain numpy loops and
compiled with ``numba.njit`` at import time.  Setting the environment
variable ``BERNSEG_NO_NUMBA=1`` (or numba being absent) selects the
uncompiled pure-Python/numpy path instead; results are identical, only
speed differs.  ``benchmarks/benchmark_kernels.py`` compares the two.
"""

import os

ENV_FLAG = "BERNSEG_NO_NUMBA"


def numba_requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes")


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = numba_requested() and numba_available()

if NUMBA_ENABLED:
    from numba import njit

    def maybe_njit(func):
        return njit(cache=True)(func)

else:

    def maybe_njit(func):
        # mirror numba's attribute so callers can always reach the fallback
        func.py_func = func
        return func
