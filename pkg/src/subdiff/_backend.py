"""Kernel backend selection: compiled extension if available, numpy fallback.

Set SUBDIFF_PURE_PYTHON=1 to force the fallback (useful for benchmarking
and for testing backend equivalence).
"""

from __future__ import annotations

import os

if os.environ.get("SUBDIFF_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

l1_solve_mode = _impl.l1_solve_mode


def backend_name() -> str:
    """Which kernel implementation this process is running."""
    return BACKEND
