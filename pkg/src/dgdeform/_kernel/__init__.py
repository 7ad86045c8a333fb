"""Elimination kernel selection: compiled extension if available, else the
pure-Python twin.  Set DGDEFORM_KERNEL=py to force the fallback."""

import os

if os.environ.get("DGDEFORM_KERNEL") == "py":
    from .rref_py import rref_int

    BACKEND = "py"
else:
    try:
        from ._rref_cy import rref_int  # type: ignore[no-redef]

        BACKEND = "cy"
    except ImportError:
        from .rref_py import rref_int  # type: ignore[no-redef]

        BACKEND = "py"

__all__ = ["rref_int", "BACKEND"]
