"""Brute-force first-quantized reference.

The N-particle state is a dense tensor with one slot per particle, each slot
indexing ``mode * D + internal``. Inputs are (anti)symmetrized by an explicit
signed sum over all slot permutations, evolved by applying ``U`` to the mode
factor of every slot, and measured by summing squared amplitudes. Nothing
here shares code with the permutation-sum engine, which is the point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, PauliExclusionError, SizeLimitError
from .interference.types import InputSpec, OutputEvent, all_output_events, as_unitary
from .states import PureState

MAX_PARTICLES = 4
MAX_SLOT_DIM = 20
_ZERO_NORM = 1e-12


@dataclass(frozen=True, eq=False)
class FirstQuantizedState:
    tensor: np.ndarray  # shape (M*D,) * N
    modes: int
    dim: int
    statistics: str

    @property
    def n(self) -> int:
        return self.tensor.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensor))


def _check_budget(n: int, modes: int, dim: int) -> None:
    if n > MAX_PARTICLES:
        raise SizeLimitError(f"oracle supports at most {MAX_PARTICLES} particles, got {n}")
    if modes * dim > MAX_SLOT_DIM:
        raise SizeLimitError(f"oracle slot dimension {modes * dim} exceeds {MAX_SLOT_DIM}")


def _sign(perm: Sequence[int]) -> int:
    # parity by counting inversions; kept local so the oracle stays independent
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _symmetrize(raw: np.ndarray, statistics: str, modes: int, dim: int) -> FirstQuantizedState:
    n = raw.ndim
    out = np.zeros_like(raw)
    for perm in itertools.permutations(range(n)):
        eps = 1 if statistics == "boson" else _sign(perm)
        out += eps * np.transpose(raw, perm)
    norm = np.linalg.norm(out)
    if norm < _ZERO_NORM:
        raise PauliExclusionError("antisymmetrized input state vanishes")
    return FirstQuantizedState(out / norm, modes, dim, statistics)


def build_input_state(inp: InputSpec, modes: int) -> FirstQuantizedState:
    """Symmetrized product state for pure internal states, one particle per port."""
    if not inp.is_pure:
        raise TypeError("build_input_state needs pure internal states; use oracle_probability for mixed")
    _check_budget(inp.n, modes, inp.dim)
    inp.check_modes(modes)
    vecs = []
    for port, state in zip(inp.ports, inp.states):
        e = np.zeros(modes, dtype=np.complex128)
        e[port] = 1.0
        vecs.append(np.kron(e, state.amplitudes))
    raw = vecs[0]
    for v in vecs[1:]:
        raw = np.multiply.outer(raw, v)
    return _symmetrize(np.asarray(raw), inp.statistics, modes, inp.dim)


def build_correlated_state(
    ports: Sequence[int], internal: np.ndarray, statistics: str, modes: int
) -> FirstQuantizedState:
    """Symmetrized state for a pure, possibly entangled, internal state.

    ``internal`` has shape ``(D,) * N``; its slot ``a`` belongs to the
    particle entering at ``ports[a]``.
    """
    internal = np.asarray(internal, dtype=np.complex128)
    n = len(ports)
    if internal.ndim != n:
        raise DimensionError(f"internal tensor has {internal.ndim} slots for {n} particles")
    dim = internal.shape[0]
    _check_budget(n, modes, dim)
    mode_part = np.zeros((modes,) * n, dtype=np.complex128)
    mode_part[tuple(ports)] = 1.0
    raw = np.multiply.outer(mode_part, internal)
    # interleave (m_1..m_N, j_1..j_N) -> (m_1, j_1, ..., m_N, j_N)
    order = [x for a in range(n) for x in (a, n + a)]
    raw = np.transpose(raw, order).reshape((modes * dim,) * n)
    return _symmetrize(raw, statistics, modes, dim)


def evolve(state: FirstQuantizedState, u) -> FirstQuantizedState:
    mat = as_unitary(u)
    if mat.shape[0] != state.modes:
        raise DimensionError("multiport size does not match the state")
    op = np.kron(mat.T, np.eye(state.dim))
    t = state.tensor
    for axis in range(t.ndim):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [axis])), 0, axis)
    return FirstQuantizedState(t, state.modes, state.dim, state.statistics)


def _split(state: FirstQuantizedState) -> np.ndarray:
    return state.tensor.reshape(sum(((state.modes, state.dim),) * state.n, ()))


def measure_configuration(state: FirstQuantizedState, event: OutputEvent) -> float:
    """Probability of detecting the port multiset ``event``, internal states ignored."""
    if event.n != state.n:
        raise DimensionError("event size does not match particle number")
    t = np.abs(_split(state)) ** 2
    per_modes = t.sum(axis=tuple(range(1, 2 * state.n, 2)))
    return float(sum(per_modes[order] for order in set(itertools.permutations(event.ports))))


def measure_resolved(
    state: FirstQuantizedState,
    event: OutputEvent,
    povm: Sequence[np.ndarray],
    outcomes: Sequence[int],
) -> float:
    """Probability of a detection record with POVM outcomes per detected particle.

    ``outcomes[s]`` is the POVM index recorded for the particle found at
    ``event.ports[s]``.
    """
    if len(outcomes) != event.n:
        raise DimensionError("one outcome per detected particle required")
    t = _split(state)
    records = set(itertools.permutations(zip(event.ports, outcomes)))
    total = 0.0
    for rec in records:
        amp = t[tuple(x for port, _ in rec for x in (port, slice(None)))]
        out = amp
        for axis, (_, j) in enumerate(rec):
            out = np.moveaxis(np.tensordot(np.asarray(povm[j]), out, axes=([1], [axis])), 0, axis)
        total += np.vdot(amp, out).real
    return float(total)


def _eigen_ensemble(state):
    if isinstance(state, PureState):
        return [(1.0, state)]
    lam, vec = np.linalg.eigh(state.matrix)
    return [(float(l), PureState.normalized(vec[:, i])) for i, l in enumerate(lam) if l > 1e-14]


def oracle_probability(u, inp: InputSpec, event: OutputEvent) -> float:
    """Event probability by explicit state evolution.

    Mixed product inputs are handled by averaging over the product of the
    eigen-ensembles of each density matrix, which is exact because the
    probability is linear in every single-particle state.
    """
    mat = as_unitary(u)
    modes = mat.shape[0]
    ensembles = [_eigen_ensemble(s) for s in inp.states]
    total = 0.0
    for combo in itertools.product(*ensembles):
        weight = math.prod(w for w, _ in combo)
        pure = InputSpec(inp.ports, tuple(s for _, s in combo), inp.statistics)
        # distinct input ports keep every branch at the same norm, so the
        # ensemble average needs no reweighting
        st = build_input_state(pure, modes)
        total += weight * measure_configuration(evolve(st, mat), event)
    return total


def oracle_distribution(u, inp: InputSpec) -> dict[tuple[int, ...], float]:
    mat = as_unitary(u)
    st = evolve(build_input_state(inp, mat.shape[0]), mat)
    return {ev.ports: measure_configuration(st, ev) for ev in all_output_events(inp.n, mat.shape[0])}

