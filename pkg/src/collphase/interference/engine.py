"""Output probabilities of partially distinguishable particles.

Two independent routes are kept side by side and checked against each other:

* :func:`output_probability_direct` sums over pairs of permutations,
  ``p = (1/m!) sum_{tau, sigma} J(tau^-1 sigma) prod_k conj(U[k, l_tau(k)]) U[k, l_sigma(k)]``.
* :func:`output_probability_permanent` regroups the same sum by the relative
  permutation into permanents of Hadamard products of submatrices.

``J`` factorizes over the disjoint cycles of its argument; a cycle
``(k1, ..., kR)`` contributes ``(+-1)^(R-1) Tr(rho_kR ... rho_k1)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .. import kernels
from ..distinguishability import ZERO_OVERLAP_TOL, cycle_trace
from ..errors import ConsistencyError, DimensionError, SizeLimitError
from ..permgroup import (
    MAX_ENUMERATION_DEGREE,
    Permutation,
    canonical_cycle,
    cycle_decompose,
    permutation_table,
)
from .types import InputSpec, Multiport, OutputEvent, as_unitary

#: Largest matrix handled by :func:`permanent` (Ryser, O(2^n n)).
MAX_PERMANENT_SIZE = 20
IMAG_TOL = 1e-8
RANGE_TOL = 1e-8


def j_function(p: Permutation, inp: InputSpec) -> complex:
    """Distinguishability weight ``J(p)`` of a permutation for product states."""
    if p.degree != inp.n:
        raise DimensionError(f"permutation degree {p.degree} != {inp.n} particles")
    out = 1.0 + 0.0j
    for cycle in cycle_decompose(p):
        if len(cycle) == 1:
            continue
        out *= inp.sign ** (len(cycle) - 1) * cycle_trace(cycle, inp.states)
    return out


def _cycles_of_rows(table: np.ndarray):
    for row in table:
        yield cycle_decompose(Permutation(tuple(row))).nontrivial()


def j_table(inp: InputSpec) -> np.ndarray:
    """``J`` for every permutation, ordered as :func:`permutation_table`.

    Cycle factors are memoized on the canonical rotation of each cycle;
    factors with modulus below the orthogonality threshold are set to an
    exact zero so that permutations crossing a missing graph edge can be
    skipped downstream.
    """
    table = permutation_table(inp.n)
    cache: dict[tuple[int, ...], complex] = {}
    out = np.empty(table.shape[0], dtype=np.complex128)
    for idx, cycles in enumerate(_cycles_of_rows(table)):
        value = 1.0 + 0.0j
        for cycle in cycles:
            key = canonical_cycle(cycle)
            g = cache.get(key)
            if g is None:
                g = inp.sign ** (len(cycle) - 1) * cycle_trace(key, inp.states)
                if abs(g) <= ZERO_OVERLAP_TOL:
                    g = 0.0j
                cache[key] = g
            value *= g
            if value == 0:
                break
        out[idx] = value
    return out


@lru_cache(maxsize=None)
def inverse_rows(n: int) -> np.ndarray:
    """Row index of the inverse of each permutation in :func:`permutation_table`."""
    table = permutation_table(n)
    index = {tuple(row): i for i, row in enumerate(table.tolist())}
    inv = np.empty(table.shape[0], dtype=np.int64)
    for i, row in enumerate(table):
        images = np.empty(n, dtype=np.int64)
        images[row] = np.arange(n)
        inv[i] = index[tuple(images.tolist())]
    inv.setflags(write=False)
    return inv


def _prepare(u, inp: InputSpec, event: OutputEvent) -> np.ndarray:
    mat = as_unitary(u)
    m = mat.shape[0]
    inp.check_modes(m)
    event.check_modes(m)
    if event.n != inp.n:
        raise DimensionError(f"event has {event.n} particles, input has {inp.n}")
    if inp.n > MAX_ENUMERATION_DEGREE:
        raise SizeLimitError(f"{inp.n} particles exceeds the enumeration limit {MAX_ENUMERATION_DEGREE}")
    return np.ascontiguousarray(mat[np.ix_(inp.ports, event.ports)])


def finalize_probability(value: complex) -> float:
    """Check that a raw sum is a probability, then clamp to [0, 1]."""
    value = complex(value)
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(f"probability has imaginary residue {value.imag:.3e}")
    p = value.real
    if p < -RANGE_TOL or p > 1 + RANGE_TOL:
        raise ConsistencyError(f"probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def direct_sum(u, inp: InputSpec, event: OutputEvent, jvals: np.ndarray | None = None) -> complex:
    """Unnormalized, unclamped double permutation sum (times ``m!``)."""
    w = _prepare(u, inp, event)
    table = permutation_table(inp.n)
    jvals = j_table(inp) if jvals is None else jvals
    rows = np.flatnonzero(jvals)
    return kernels.direct_double_sum(w, table, rows.astype(np.int64), jvals[rows])


def output_probability_direct(u: Multiport | np.ndarray, inp: InputSpec, event: OutputEvent) -> float:
    """Probability of ``event`` from the double sum over ``S_N x S_N``.

    Relative permutations with ``J = 0`` are skipped.
    """
    return finalize_probability(direct_sum(u, inp, event) / event.multiplicity_factorial())


def hadamard_permanent(u, in_ports: Sequence[int], out_ports: Sequence[int], sigma: Permutation) -> complex:
    """``per(conj(W) o W_sigma)`` with ``W[a, b] = U[k_a, l_b]`` and ``W_sigma[a, b] = U[k_sigma(a), l_b]``."""
    mat = as_unitary(u)
    w = np.ascontiguousarray(mat[np.ix_(list(in_ports), list(out_ports))])
    sig = np.array([sigma.images], dtype=np.int64)
    return complex(kernels.hadamard_permanents(w, sig)[0])


def permanent_sum(u, inp: InputSpec, event: OutputEvent, jvals: np.ndarray | None = None) -> complex:
    w = _prepare(u, inp, event)
    table = permutation_table(inp.n)
    jvals = j_table(inp) if jvals is None else jvals
    # the Hadamard permanent at sigma pairs with J(sigma^-1)
    j_inv = jvals[inverse_rows(inp.n)]
    rows = np.flatnonzero(j_inv)
    pers = kernels.hadamard_permanents(w, np.ascontiguousarray(table[rows]))
    return complex(pers @ j_inv[rows])


def output_probability_permanent(u: Multiport | np.ndarray, inp: InputSpec, event: OutputEvent) -> float:
    """Probability of ``event`` as a single sum of Hadamard-product permanents."""
    return finalize_probability(permanent_sum(u, inp, event) / event.multiplicity_factorial())


output_probability = output_probability_permanent


def permanent(a) -> complex:
    """Matrix permanent via Ryser's inclusion-exclusion formula."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_PERMANENT_SIZE:
        raise SizeLimitError(f"permanent of size {a.shape[0]} exceeds limit {MAX_PERMANENT_SIZE}")
    return complex(kernels.permanent_ryser(a))


def permanent_naive(a) -> complex:
    """Permanent by summing over all permutations (reference path)."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(kernels.permanent_naive(a, permutation_table(a.shape[0])))


def classical_probability(u, inp: InputSpec, event: OutputEvent) -> float:
    """Probability for fully distinguishable particles: ``per(|W|^2) / m!``."""
    w = _prepare(u, inp, event)
    return permanent(np.abs(w) ** 2).real / event.multiplicity_factorial()

