"""Gram matrices of internal states and their weighted-graph picture.

For pure states the Gram matrix ``H[k, l] = <phi_k|phi_l>`` doubles as a
directed graph with complex edge weights ``w_kl = -ln <phi_l|phi_k>``: the
real part is a distance, the imaginary part the mutual phase ``theta_kl =
arg H[k, l]``. A cycle ``(k1, ..., kR)`` carries the collective phase
``theta_{k1 k2} + ... + theta_{kR k1}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DisconnectedError, RealizabilityError
from .states import InternalState, PureState, trace_product, wrap_phase

PSD_TOL = 1e-10
HERMITIAN_TOL = 1e-10
#: Overlap magnitudes at or below this count as exactly orthogonal.
ZERO_OVERLAP_TOL = 1e-14

#: Weight of a cycle whose trace product vanishes.
DISCONNECTED = complex(math.inf, 0.0)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian overlap matrix with unit diagonal.

    Construction does not require positive semidefiniteness; use
    :func:`is_positive_semidefinite` to certify realizability.
    """

    entries: np.ndarray

    def __post_init__(self):
        h = np.array(self.entries, dtype=np.complex128)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionError(f"Gram matrix must be square, got shape {h.shape}")
        if not np.allclose(h, h.conj().T, rtol=0, atol=HERMITIAN_TOL):
            raise ValueError("Gram matrix is not Hermitian")
        if not np.allclose(np.diag(h), 1.0, rtol=0, atol=HERMITIAN_TOL):
            raise ValueError("Gram matrix must have unit diagonal")
        h = 0.5 * (h + h.conj().T)
        np.fill_diagonal(h, 1.0)
        h.setflags(write=False)
        object.__setattr__(self, "entries", h)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]

    def graph(self) -> DistinguishabilityGraph:
        return DistinguishabilityGraph.from_gram(self)


@dataclass(frozen=True, eq=False)
class DistinguishabilityGraph:
    """Distances ``d_kl >= 0`` (``inf`` for orthogonal pairs) and phases ``theta_kl``."""

    distances: np.ndarray
    phases: np.ndarray

    @classmethod
    def from_gram(cls, gram: GramMatrix, zero_tol: float = ZERO_OVERLAP_TOL) -> DistinguishabilityGraph:
        h = gram.entries
        mag = np.abs(h)
        with np.errstate(divide="ignore"):
            d = np.where(mag > zero_tol, -np.log(np.maximum(mag, zero_tol)), np.inf)
        theta = np.where(mag > zero_tol, np.angle(h), 0.0)
        # angle() returns [-pi, pi]; move -pi to pi, keep antisymmetry exact
        theta = np.vectorize(wrap_phase)(theta) if theta.size else theta
        upper = np.triu(theta, 1)
        theta = upper - upper.T
        np.fill_diagonal(d, 0.0)
        return cls(d, theta)

    @property
    def n(self) -> int:
        return self.distances.shape[0]

    def has_edge(self, k: int, l: int) -> bool:
        return bool(np.isfinite(self.distances[k, l]))

    def weight(self, k: int, l: int) -> complex:
        """Complex edge weight ``w_kl = d_kl + i theta_kl``."""
        if not self.has_edge(k, l):
            return DISCONNECTED
        return complex(self.distances[k, l], self.phases[k, l])


def gram_from_states(states: Sequence[PureState]) -> GramMatrix:
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionError(f"states have different dimensions: {sorted(dims)}")
    phi = np.stack([s.amplitudes for s in states])
    return GramMatrix(phi.conj() @ phi.T)


def _as_matrix(h) -> np.ndarray:
    return h.entries if isinstance(h, GramMatrix) else np.asarray(h, dtype=np.complex128)


def is_positive_semidefinite(h: GramMatrix | np.ndarray, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Eigenvalue certificate. Returns ``(is_psd, min_eigenvalue)``."""
    m = _as_matrix(h)
    if not np.allclose(m, m.conj().T, rtol=0, atol=HERMITIAN_TOL):
        raise ValueError("matrix is not Hermitian")
    lam = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    return lam >= -tol, lam


def gershgorin_sufficient(h: GramMatrix | np.ndarray) -> bool:
    """True when every off-diagonal absolute row sum is at most 1.

    With a unit diagonal this confines all eigenvalues to [0, 2].
    """
    m = np.abs(_as_matrix(h))
    off = m.sum(axis=1) - np.diag(m)
    return bool(np.all(off <= 1.0 + 1e-12))


def n4_circle_sufficient(r12: float, r23: float, r34: float, r14: float) -> bool:
    """Sufficient PSD test for a 4-vertex circle Gram matrix: sum of r^2 <= 1."""
    return r12**2 + r23**2 + r34**2 + r14**2 <= 1.0 + 1e-12


def n4_circle_eigenvalues(r: Sequence[float], theta: Sequence[float]) -> np.ndarray:
    """Closed-form eigenvalues of the 4-vertex circle Gram matrix.

    ``r`` and ``theta`` are given on the edges (0,1), (1,2), (2,3), (3,0),
    with ``theta[3]`` the phase of ``H[3, 0]``.
    """
    r12, r23, r34, r41 = r
    t12, t23, t34, t41 = theta
    a2 = r12**2 + r23**2 + r34**2 + r41**2
    # H[0,3] = r41 exp(-i t41), H[2,1] = r23 exp(-i t23)
    a0 = abs(r12 * r34 * cmath.exp(1j * (t12 + t34)) - r41 * r23 * cmath.exp(-1j * (t41 + t23))) ** 2
    disc = math.sqrt(max(a2 * a2 - 4 * a0, 0.0))
    roots = []
    for s in (+1, -1):
        x = math.sqrt(max(0.5 * (a2 + s * disc), 0.0))
        roots += [1 - x, 1 + x]
    return np.sort(np.array(roots))


def factor_gram(h: GramMatrix | np.ndarray, tol: float = PSD_TOL) -> tuple[np.ndarray, int]:
    """Pivot-free Cholesky factorization ``H = L L^dagger``.

    Returns ``(phi, rank)`` where row ``k`` of ``phi = conj(L)`` holds the
    components of state ``k`` in an orthonormal basis, so that
    ``<phi_k|phi_l> = H[k, l]``. The diagonal is real and nonnegative. A
    pivot below ``tol`` is set to zero (linearly dependent state) provided
    the rest of its column vanishes too.
    """
    m = _as_matrix(h)
    ok, lam = is_positive_semidefinite(m, tol)
    if not ok:
        raise RealizabilityError("Gram matrix is not positive semidefinite", lam)
    n = m.shape[0]
    low = np.zeros((n, n), dtype=np.complex128)
    rank = 0
    for j in range(n):
        pivot = (m[j, j] - np.vdot(low[j, :j], low[j, :j])).real
        if pivot > tol:
            low[j, j] = math.sqrt(pivot)
            rank += 1
            for i in range(j + 1, n):
                low[i, j] = (m[i, j] - low[i, :j] @ low[j, :j].conj()) / low[j, j]
        else:
            if pivot < -tol:
                raise RealizabilityError("negative Cholesky pivot", lam)
            resid = np.array([m[i, j] - low[i, :j] @ low[j, :j].conj() for i in range(j + 1, n)])
            if resid.size and np.max(np.abs(resid)) > math.sqrt(tol):
                raise RealizabilityError("rank-deficient Gram matrix is inconsistent", lam)
    return low.conj(), rank


def states_from_gram(h: GramMatrix | np.ndarray) -> list[PureState]:
    """Pure states (dimension N) whose overlaps reproduce ``H``."""
    phi, _ = factor_gram(h)
    return [PureState.normalized(row) for row in phi]


def circle_dance_gram(n: int, r: Sequence[float], theta: Sequence[float]) -> GramMatrix:
    """Gram matrix where vertex ``k`` overlaps only ``k-1`` and ``k+1`` (mod n).

    ``r[k]`` and ``theta[k]`` describe ``H[k, k+1]``; ``H[n-1, 0]`` closes
    the circle.
    """
    if n < 4:
        raise ValueError("circle-dance graphs need at least 4 vertices")
    if len(r) != n or len(theta) != n:
        raise ValueError(f"need {n} moduli and {n} phases")
    if any(not 0.0 <= x <= 1.0 for x in r):
        raise ValueError("overlap moduli must lie in [0, 1]")
    h = np.eye(n, dtype=np.complex128)
    for k in range(n):
        l = (k + 1) % n
        h[k, l] = r[k] * cmath.exp(1j * theta[k])
        h[l, k] = np.conj(h[k, l])
    return GramMatrix(h)


def circle_dance_states(r: Sequence[float], theta: Sequence[float]) -> list[PureState]:
    """States realizing :func:`circle_dance_gram` (``len(r)`` vertices)."""
    return states_from_gram(circle_dance_gram(len(r), r, theta))


def cycle_trace(cycle: Sequence[int], states: Sequence[InternalState]) -> complex:
    """``Tr(rho_kR ... rho_k1)`` for the cycle ``(k1, ..., kR)``, without sign.

    For pure states this equals ``prod_a <phi_{k_{a+1}}|phi_{k_a}>``.
    """
    if all(isinstance(states[k], PureState) for k in cycle):
        out = 1.0 + 0.0j
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            out *= np.vdot(states[b].amplitudes, states[a].amplitudes)
        return complex(out)
    return trace_product([states[k] for k in reversed(cycle)])


def cycle_weight(cycle: Sequence[int], states: Sequence[InternalState]) -> complex:
    """Complex cycle weight ``-ln Tr(rho_kR ... rho_k1) = D + i theta``.

    Returns :data:`DISCONNECTED` when the trace product vanishes.
    """
    g = cycle_trace(cycle, states)
    if abs(g) <= ZERO_OVERLAP_TOL:
        return DISCONNECTED
    return complex(-math.log(abs(g)), wrap_phase(-cmath.phase(g)))


def _edges(cycle: Sequence[int]):
    return zip(cycle, list(cycle[1:]) + [cycle[0]])


def collective_phase(cycle: Sequence[int], graph: DistinguishabilityGraph) -> float:
    """Sum of mutual phases along the oriented cycle, in (-pi, pi]."""
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise ValueError(f"invalid cycle {tuple(cycle)}")
    total = 0.0
    for a, b in _edges(cycle):
        if not graph.has_edge(a, b):
            raise DisconnectedError(f"edge {a}->{b} has zero overlap")
        total += graph.phases[a, b]
    return wrap_phase(total)


def triad_basis(n: int) -> list[tuple[int, int, int]]:
    """Triads ``(0, k, l)`` with ``1 <= k < l < n``; ``(n-1)(n-2)/2`` of them."""
    return [(0, k, l) for k in range(1, n) for l in range(k + 1, n)]


def triad_basis_decompose(cycle: Sequence[int]) -> dict[tuple[int, int, int], int]:
    """Integer coefficients expressing a cycle phase in the triad basis.

    In the gauge where every ``theta_{0k}`` vanishes the triad phase
    ``theta_(0,k,l)`` equals ``theta_kl``, so each edge ``a -> b`` away from
    vertex 0 contributes ``+1`` to ``(0, a, b)`` when ``a < b`` and ``-1`` to
    ``(0, b, a)`` otherwise. Cycle phases are gauge invariant, so the
    identity holds for every phase assignment on a complete graph.
    """
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise ValueError(f"need a cycle of at least 3 distinct vertices, got {tuple(cycle)}")
    coeffs: dict[tuple[int, int, int], int] = {}
    for a, b in _edges(cycle):
        if a == 0 or b == 0:
            continue
        key, s = ((0, a, b), 1) if a < b else ((0, b, a), -1)
        coeffs[key] = coeffs.get(key, 0) + s
    return {k: v for k, v in coeffs.items() if v != 0}


def check_cycle_bound(cycle: Sequence[int], states: Sequence[InternalState], atol: float = 1e-12) -> bool:
    """Test ``|Tr(rho_k1 ... rho_kR)|^2 <= prod_a Tr(rho_ka rho_k(a+1))``."""
    lhs = abs(trace_product([states[k] for k in cycle])) ** 2
    rhs = 1.0
    for a, b in _edges(cycle):
        rhs *= trace_product([states[a], states[b]]).real
    return lhs <= rhs + atol


def cycle_bound_sides(cycle: Sequence[int], states: Sequence[InternalState]) -> tuple[float, float]:
    lhs = abs(trace_product([states[k] for k in cycle])) ** 2
    rhs = float(np.prod([trace_product([states[a], states[b]]).real for a, b in _edges(cycle)]))
    return lhs, rhs
