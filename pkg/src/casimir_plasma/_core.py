"""Kernel backend selection.

The compiled extension is used when it imports; ``CASIMIR_PLASMA_BACKEND=python``
forces the NumPy fallback.
"""
import os

from . import _fallback

if os.environ.get("CASIMIR_PLASMA_BACKEND", "").lower() == "python":
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _fallback
        BACKEND = "python"
    else:
        BACKEND = "cython"

STATUS_MESSAGES = {
    1: "panel budget exhausted",
    2: "series term cap reached",
    4: "roundoff limited subdivision",
}


def describe_status(status: int) -> str:
    return ", ".join(msg for bit, msg in STATUS_MESSAGES.items() if status & bit) or "ok"
