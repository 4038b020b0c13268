"""Hot-kernel dispatch: compiled extension when importable, else pure Python.

``BACKEND`` records which implementation was selected at import time. Set
``FANOVOL_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_INT64_SAFE = 1 << 62

try:
    if os.environ.get("FANOVOL_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from . import _kernels_c  # type: ignore[attr-defined]
except ImportError:
    _kernels_c = None

BACKEND = "cython" if _kernels_c is not None else "python"


def _fits_int64(offsets, normals, lo, hi) -> bool:
    reach = [max(abs(a), abs(b)) for a, b in zip(lo, hi)]
    if any(r >= _INT64_SAFE for r in reach):
        return False
    for c, row in zip(offsets, normals):
        total = abs(c) + 1 + sum(abs(a) * r for a, r in zip(row, reach))
        if total >= _INT64_SAFE:
            return False
    return True


def box_scan(offsets, normals, strict, lo, hi, backend: str | None = None):
    """Integer points of the box [lo, hi] satisfying every row
    offsets[i] + normals[i] . x >= 0 (strictly where strict[i]), in
    lexicographic order."""
    use = backend or BACKEND
    if use == "cython" and _kernels_c is not None and _fits_int64(offsets, normals, lo, hi):
        return _kernels_c.box_scan(offsets, normals, strict, lo, hi)
    return _kernels_py.box_scan(offsets, normals, strict, lo, hi)
