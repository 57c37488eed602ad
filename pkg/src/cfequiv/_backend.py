"""Select the compiled core or its numpy fallback at import time.

``CFEQUIV_BACKEND`` forces the choice: ``compiled`` (raise if unavailable),
``python``, or ``auto`` (default: compiled when importable).
"""

from __future__ import annotations

import os

from . import _core_py

_requested = os.environ.get("CFEQUIV_BACKEND", "auto").lower()

if _requested not in ("auto", "compiled", "python"):
    raise ImportError(f"CFEQUIV_BACKEND must be auto, compiled or python, got {_requested!r}")

USING_COMPILED = False
_impl = _core_py
if _requested in ("auto", "compiled"):
    try:
        from . import _corex as _impl  # type: ignore[no-redef]

        USING_COMPILED = True
    except ImportError:
        if _requested == "compiled":
            raise

BACKEND_NAME = "compiled" if USING_COMPILED else "python"

STABLE = _core_py.STABLE
LAPLACE = _core_py.LAPLACE
ENERGY = _core_py.ENERGY

sqdist_diff_tri = _impl.sqdist_diff_tri
sqdist_sum_tri = _impl.sqdist_sum_tri
sqdist_cross = _impl.sqdist_cross
sqdist_cross_tri = _impl.sqdist_cross_tri
apply_kernel = _impl.apply_kernel
kernel_sums = _impl.kernel_sums
