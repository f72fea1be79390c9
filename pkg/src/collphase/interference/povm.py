"""Detection that also measures internal states with a POVM."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import DimensionError, PovmError, SizeLimitError
from ..permgroup import permutation_table
from ..states import PureState
from .engine import _prepare, finalize_probability
from .types import InputSpec, OutputEvent

COMPLETENESS_TOL = 1e-8
PSD_TOL = 1e-10
MAX_RESOLVED_PARTICLES = 6


@dataclass(frozen=True, eq=False)
class PovmElement:
    operator: np.ndarray

    def __post_init__(self):
        op = np.array(self.operator, dtype=np.complex128)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise PovmError(f"POVM element must be square, got shape {op.shape}")
        if np.max(np.abs(op - op.conj().T), initial=0.0) > PSD_TOL:
            raise PovmError("POVM element is not Hermitian")
        op = 0.5 * (op + op.conj().T)
        low = np.linalg.eigvalsh(op)[0]
        if low < -PSD_TOL:
            raise PovmError(f"POVM element not PSD (min eigenvalue {low:.3e})")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)

    @property
    def dim(self) -> int:
        return self.operator.shape[0]


def check_povm(elements: Sequence[PovmElement | np.ndarray]) -> list[PovmElement]:
    """Validate a POVM and return it as elements; raises on incompleteness."""
    out = [e if isinstance(e, PovmElement) else PovmElement(e) for e in elements]
    if not out:
        raise PovmError("empty POVM")
    dim = out[0].dim
    if any(e.dim != dim for e in out):
        raise DimensionError("POVM elements have different dimensions")
    resid = np.max(np.abs(sum(e.operator for e in out) - np.eye(dim)))
    if resid > COMPLETENESS_TOL:
        raise PovmError(f"POVM elements do not sum to identity (max deviation {resid:.3e})")
    return out


def unambiguous_discrimination_povm(states: Sequence[PureState], p: Sequence[float]) -> list[PovmElement]:
    """``[Pi_0, Pi_1, ..., Pi_N]`` with ``Pi_k = p_k |d_k><d_k|`` and ``<d_k|phi_l> = delta_kl``.

    Element 0 is the inconclusive outcome ``I - sum_k Pi_k``.
    """
    if len(states) != len(p):
        raise ValueError("one success probability per state")
    if any(not 0.0 <= x <= 1.0 for x in p):
        raise ValueError("success probabilities must lie in [0, 1]")
    phi = np.column_stack([s.amplitudes for s in states])
    if np.linalg.matrix_rank(phi, tol=1e-10) < phi.shape[1]:
        raise PovmError("states are linearly dependent; unambiguous discrimination impossible")
    duals = phi @ np.linalg.inv(phi.conj().T @ phi)
    conclusive = [pk * np.outer(duals[:, k], duals[:, k].conj()) for k, pk in enumerate(p)]
    inconclusive = np.eye(phi.shape[0]) - sum(conclusive)
    inconclusive = 0.5 * (inconclusive + inconclusive.conj().T)
    low = np.linalg.eigvalsh(inconclusive)[0]
    if low < -PSD_TOL:
        raise PovmError(f"success probabilities infeasible: inconclusive element has eigenvalue {low:.3e}")
    return check_povm([inconclusive, *conclusive])


def _record_multiplicity(event: OutputEvent, outcomes: Sequence[int]) -> int:
    out = 1
    for k in Counter(zip(event.ports, outcomes)).values():
        out *= math.factorial(k)
    return out


def state_resolved_probability(
    u,
    inp: InputSpec,
    event: OutputEvent,
    povm: Sequence[PovmElement | np.ndarray],
    outcomes: Sequence[int],
) -> float:
    """Probability of ``event`` with POVM outcome ``outcomes[s]`` on the particle at ``event.ports[s]``.

    Double sum over ``(tau, sigma)``; each cycle ``(a1, ..., aR)`` of
    ``rho = sigma^-1 tau`` contributes
    ``Tr(Pi_{j(tau a1)} rho_a2 Pi_{j(tau a2)} rho_a3 ... Pi_{j(tau aR)} rho_a1)``.
    """
    elements = check_povm(povm)
    if len(outcomes) != event.n:
        raise DimensionError("one POVM outcome per detected particle required")
    if any(not 0 <= j < len(elements) for j in outcomes):
        raise ValueError("POVM outcome index out of range")
    if elements[0].dim != inp.dim:
        raise DimensionError("POVM dimension differs from the internal dimension")
    n = inp.n
    if n > MAX_RESOLVED_PARTICLES:
        raise SizeLimitError(f"state-resolved sums support at most {MAX_RESOLVED_PARTICLES} particles")
    w = _prepare(u, inp, event)
    rhos = [s.density() for s in inp.states]
    pis = [elements[j].operator for j in outcomes]
    table = permutation_table(n).tolist()
    # amplitude factors per permutation: prod_a W[a, perm(a)]
    amp = {tuple(t): np.prod([w[a, t[a]] for a in range(n)]) for t in table}
    # outcome slots are permuted together with the ports, so a pair (tau,
    # sigma) only matters through the cycles of rho and the labels j(tau a)
    cache: dict[tuple, complex] = {}
    total = 0.0 + 0.0j
    sign = inp.sign
    for tau in table:
        conj_amp = np.conj(amp[tuple(tau)])
        if conj_amp == 0:
            continue
        for sigma in table:
            sig_inv = [0] * n
            for a, b in enumerate(sigma):
                sig_inv[b] = a
            rho = [sig_inv[tau[a]] for a in range(n)]
            key = (tuple(rho), tuple(outcomes[tau[a]] for a in range(n)))
            jval = cache.get(key)
            if jval is None:
                jval = _resolved_j(rho, [pis[tau[a]] for a in range(n)], rhos, sign)
                cache[key] = jval
            total += jval * conj_amp * amp[tuple(sigma)]
    return finalize_probability(total / _record_multiplicity(event, outcomes))


def _resolved_j(rho: Sequence[int], labels: Sequence[np.ndarray], rhos, sign: int) -> complex:
    seen = [False] * len(rho)
    out = 1.0 + 0.0j
    for start in range(len(rho)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        nxt = rho[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = rho[nxt]
        prod = np.eye(rhos[0].shape[0], dtype=np.complex128)
        for i, a in enumerate(cyc):
            prod = prod @ labels[a] @ rhos[cyc[(i + 1) % len(cyc)]]
        out *= sign ** (len(cyc) - 1) * np.trace(prod)
        if out == 0:
            break
    return out


def resolved_outcome_records(event: OutputEvent, n_outcomes: int) -> Iterator[tuple[int, ...]]:
    """One outcome tuple per distinct detection record of ``event``.

    Tuples differing only by swapping outcomes between particles in the same
    output port describe the same record; only the sorted representative is
    yielded.
    """
    groups = [len(list(g)) for _, g in itertools.groupby(event.ports)]
    per_group = [itertools.combinations_with_replacement(range(n_outcomes), k) for k in groups]
    for parts in itertools.product(*per_group):
        yield tuple(j for part in parts for j in part)
