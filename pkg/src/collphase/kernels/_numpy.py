"""Vectorized numpy kernels, used when numba is disabled or unavailable."""

import numpy as np

_CHUNK = 1 << 20  # complex entries per batched Ryser block


def permanent_naive(a, perms):
    rows = np.arange(a.shape[0])
    return complex(a[rows, perms].prod(axis=1).sum())


def _subset_masks(n):
    masks = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    signs = np.where((n - masks.sum(axis=1)) % 2 == 0, 1.0, -1.0)
    return masks.astype(np.float64), signs


def permanent_ryser(a):
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    masks, signs = _subset_masks(n)
    rowsums = masks @ a.T
    return complex(signs @ rowsums.prod(axis=1))


def direct_double_sum(w, perms, x_rows, jvals):
    rows = np.arange(w.shape[0])
    amp_conj = np.conj(w[rows, perms].prod(axis=1))
    total = 0.0j
    for xi, j in zip(x_rows, jvals):
        composed = perms[:, perms[xi]]
        total += j * (amp_conj @ w[rows, composed].prod(axis=1))
    return complex(total)


def hadamard_permanents(w, sigmas):
    n = w.shape[0]
    if sigmas.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    masks, signs = _subset_masks(n)
    b = np.conj(w)[None, :, :] * w[sigmas]  # b[s, i, j] = conj(w[i, j]) w[sigma_s(i), j]
    step = max(1, _CHUNK // (masks.shape[0] * n))
    out = np.empty(sigmas.shape[0], dtype=np.complex128)
    for start in range(0, sigmas.shape[0], step):
        block = b[start:start + step]
        rowsums = np.einsum("mj,sij->smi", masks, block)
        out[start:start + step] = rowsums.prod(axis=2) @ signs
    return out
