"""Numba dispatch.

Set ``COMPNET_DISABLE_NUMBA=1`` to force the pure-numpy fallback kernels.
"""
import os

_FLAG = os.environ.get("COMPNET_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """Compile ``fn`` with numba when available, else return it untouched."""
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
