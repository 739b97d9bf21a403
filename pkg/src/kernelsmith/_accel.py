"""Numba/numpy execution-path selection.

The hot numeric kernels in :mod:`kernelsmith._kernels` exist in two variants:
explicit loops compiled with numba's ``@njit``, and vectorized numpy
fallbacks. The environment variable ``KERNELSMITH_NUMBA`` picks the path:

* unset / ``auto`` -- use numba when importable, else fall back silently;
* ``0`` / ``false`` / ``off`` -- force the numpy fallback;
* ``1`` / ``true`` / ``on`` -- require numba, raise if it is missing.

The choice is made once at import time.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("KERNELSMITH_NUMBA", "auto").strip().lower()

if _FLAG in {"0", "false", "off", "no"}:
    NUMBA_AVAILABLE = False
    NUMBA_ENABLED = False
else:
    try:
        import numba  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False
    if _FLAG in {"1", "true", "on", "yes"} and not NUMBA_AVAILABLE:
        raise ImportError(
            "KERNELSMITH_NUMBA=1 requires numba, which is not importable"
        )
    NUMBA_ENABLED = NUMBA_AVAILABLE


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity."""
    if NUMBA_AVAILABLE:
        from numba import njit as _njit

        return _njit(cache=True)(func)
    return func
