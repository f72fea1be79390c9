"""Hot numeric kernels with a numba and a pure-numpy implementation.

The active implementation is chosen by ``COLLPHASE_BACKEND`` (see
:mod:`collphase._backend`). Both modules stay importable so tests and the
benchmark can compare them directly.

All kernels take ``w`` as the ``N x N`` submatrix ``w[k, s] = U[in_k, out_s]``
(rows: particles, columns: detected output slots) and permutation tables as
``int64`` arrays of shape ``(P, N)``.
"""

from .._backend import BACKEND
from . import _numpy as numpy_kernels

if BACKEND == "numba":
    from . import _numba as active
else:
    active = numpy_kernels

permanent_naive = active.permanent_naive
permanent_ryser = active.permanent_ryser
direct_double_sum = active.direct_double_sum
hadamard_permanents = active.hadamard_permanents

__all__ = [
    "BACKEND",
    "active",
    "numpy_kernels",
    "permanent_naive",
    "permanent_ryser",
    "direct_double_sum",
    "hadamard_permanents",
]
