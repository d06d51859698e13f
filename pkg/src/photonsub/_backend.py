"""Kernel backend selection.

Hot loops are written twice: an explicit-loop version compiled with numba
and a vectorised numpy version. ``PHOTONSUB_BACKEND=numpy`` forces the numpy
path; otherwise numba is used when it imports cleanly.
"""

import os

_requested = os.environ.get("PHOTONSUB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"PHOTONSUB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, fastmath=False)(fn)
    return fn
