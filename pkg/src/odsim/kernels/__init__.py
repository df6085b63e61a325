"""
Numeric backends for the propagation hot loop.

The compiled extension is preferred when built; a vectorized NumPy fallback
provides the same results. Set ODSIM_KERNEL=python or ODSIM_KERNEL=compiled
to force a backend (the latter raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import march_py as _python_impl

_requested = os.environ.get("ODSIM_KERNEL", "auto").strip().lower()
if _requested not in ("auto", "compiled", "python"):
    raise ValueError(f"ODSIM_KERNEL must be auto, compiled, or python, got {_requested!r}")

_impl = None
if _requested in ("auto", "compiled"):
    try:
        from . import _march as _compiled_impl

        _impl = _compiled_impl
    except ImportError:
        if _requested == "compiled":
            raise

if _impl is None:
    _impl = _python_impl
    ACTIVE_KERNEL = "python"
else:
    ACTIVE_KERNEL = "compiled"

slice_transmissions = _impl.slice_transmissions
loss_snapshots = _impl.loss_snapshots


def get_backend(name: str):
    """Return the named backend module ('python' or 'compiled'), or None if unavailable."""
    if name == "python":
        return _python_impl
    if name == "compiled":
        try:
            from . import _march

            return _march
        except ImportError:
            return None
    raise ValueError(f"unknown backend {name!r}")
