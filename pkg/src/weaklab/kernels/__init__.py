"""Kernel backend selection.

Imports the compiled extension when available, otherwise the numpy
fallback.  Set ``WEAKLAB_PURE=1`` to force the fallback (used by the
backend-agreement tests and the benchmark).
"""

import os

from . import pure

if os.environ.get("WEAKLAB_PURE", "") not in ("", "0"):
    _impl = pure
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND
cube_sums = _impl.cube_sums
cube_mins = _impl.cube_mins
cube_maxs = _impl.cube_maxs
cube_weak_norms = _impl.cube_weak_norms
paint_max = _impl.paint_max
sup_scan_rows = _impl.sup_scan_rows

__all__ = [
    "BACKEND",
    "cube_sums",
    "cube_mins",
    "cube_maxs",
    "cube_weak_norms",
    "paint_max",
    "sup_scan_rows",
    "pure",
]
