"""Numba switch.

Set ``WMAXSOL_DISABLE_JIT=1`` to force the pure-numpy kernels (useful for
debugging and for platforms without numba).
"""
import os

JIT_ENABLED = os.environ.get("WMAXSOL_DISABLE_JIT", "0").lower() not in ("1", "true", "yes")

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    HAVE_NUMBA = False
else:
    HAVE_NUMBA = True

USE_NUMBA = JIT_ENABLED and HAVE_NUMBA


def njit(func=None, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if not HAVE_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if func is not None:
        return _njit(**kwargs)(func)
    return _njit(**kwargs)
