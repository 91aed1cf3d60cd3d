"""Optional numba acceleration.

Hot kernels (dense LU log-determinants, patience-sorting batches, S_N
enumeration) are written as plain numpy code and decorated with ``njit``.
Setting the environment variable ``TOEPLITZ_ASY_NO_NUMBA=1`` (or numba being
absent) keeps the same functions as interpreted pure-numpy code, which is
slower but produces identical results.  ``benchmarks/bench_accel.py`` compares
the two paths.
"""

import os


def _flag_disabled() -> bool:
    v = os.environ.get("TOEPLITZ_ASY_NO_NUMBA", "").strip().lower()
    return v in ("1", "true", "yes", "on")


USING_NUMBA = False
if not _flag_disabled():
    try:
        from numba import njit as _numba_njit

        USING_NUMBA = True
    except ImportError:
        pass

if USING_NUMBA:
    njit = _numba_njit
else:

    def njit(*args, **kwargs):
        """Pass-through decorator used when the JIT path is disabled."""
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco
