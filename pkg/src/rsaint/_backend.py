"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``RSAINT_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("RSAINT_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

# int64 guard for the compiled loops; larger products go through Python ints.
INT64_SAFE = 1 << 62

__all__ = ["kernels", "BACKEND", "INT64_SAFE"]
