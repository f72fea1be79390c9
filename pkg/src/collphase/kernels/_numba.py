"""Numba kernels. Signatures mirror :mod:`collphase.kernels._numpy`."""

import numpy as np
from numba import njit


@njit(cache=True)
def permanent_naive(a, perms):
    n = a.shape[0]
    total = 0.0 + 0.0j
    for p in range(perms.shape[0]):
        prod = 1.0 + 0.0j
        for k in range(n):
            prod *= a[k, perms[p, k]]
        total += prod
    return total


@njit(cache=True)
def permanent_ryser(a):
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    rowsum = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    # Gray-code walk over column subsets; sign tracks (-1)^|S|.
    sign = 1.0
    gray = 0
    for g in range(1, 1 << n):
        j = 0
        while not (g >> j) & 1:
            j += 1
        gray ^= 1 << j
        if (gray >> j) & 1:
            for i in range(n):
                rowsum[i] += a[i, j]
        else:
            for i in range(n):
                rowsum[i] -= a[i, j]
        sign = -sign
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= rowsum[i]
        total += sign * prod
    if n % 2 == 1:
        total = -total
    return total


@njit(cache=True)
def direct_double_sum(w, perms, x_rows, jvals):
    n = w.shape[0]
    n_perm = perms.shape[0]
    total = 0.0 + 0.0j
    for xi in range(x_rows.shape[0]):
        x = perms[x_rows[xi]]
        partial = 0.0 + 0.0j
        for t in range(n_perm):
            prod = 1.0 + 0.0j
            for k in range(n):
                tk = perms[t, k]
                prod *= np.conj(w[k, tk]) * w[k, perms[t, x[k]]]
            partial += prod
        total += jvals[xi] * partial
    return total


@njit(cache=True)
def hadamard_permanents(w, sigmas):
    n = w.shape[0]
    out = np.empty(sigmas.shape[0], dtype=np.complex128)
    b = np.empty((n, n), dtype=np.complex128)
    for s in range(sigmas.shape[0]):
        for i in range(n):
            si = sigmas[s, i]
            for j in range(n):
                b[i, j] = np.conj(w[i, j]) * w[si, j]
        out[s] = permanent_ryser(b)
    return out
