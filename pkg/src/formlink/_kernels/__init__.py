"""Decode kernel selection: compiled extension when available, else Python.

Set ``FORMLINK_PURE_PYTHON=1`` to force the fallback. ``get_kernel`` exposes
both implementations for the differential tests and the kernel benchmark.
"""

from __future__ import annotations

import os

from . import _walk_py

try:
    from . import _walk as _walk_cy

    HAVE_COMPILED = True
except ImportError:
    _walk_cy = None
    HAVE_COMPILED = False

_FORCE_PY = os.environ.get("FORMLINK_PURE_PYTHON", "") == "1"


def get_kernel(pure_python: bool | None = None):
    """Return the decode kernel module. None = honor env var and availability."""
    if pure_python is None:
        pure_python = _FORCE_PY or not HAVE_COMPILED
    if pure_python:
        return _walk_py
    if _walk_cy is None:
        raise RuntimeError("compiled kernel requested but not built")
    return _walk_cy


active_kernel = get_kernel()
