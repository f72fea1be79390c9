"""Kernel backend selection.

Hot loops (permanents, the double permutation sum) exist twice: as numba
``@njit`` kernels and as vectorized numpy code. ``COLLPHASE_BACKEND`` picks
one at import time; ``numba`` is the default when it can be imported.
"""

import os

_requested = os.environ.get("COLLPHASE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"COLLPHASE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"
