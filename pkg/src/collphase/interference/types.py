"""Multiports, input specifications and output events."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import DimensionError, NotUnitaryError, SizeLimitError
from ..states import InternalState, MixedState, PureState

UNITARY_TOL = 1e-10
MAX_EVENTS = 10**6

STATISTICS = ("boson", "fermion")


@dataclass(frozen=True, eq=False)
class Multiport:
    """Unitary ``M x M`` network; input mode ``k`` maps to ``sum_l U[k, l] |l>``."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"multiport matrix must be square, got shape {u.shape}")
        resid = unitarity_residual(u)
        if resid > UNITARY_TOL:
            raise NotUnitaryError(f"matrix is not unitary (max |U^dag U - I| = {resid:.3e})")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0]


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def as_unitary(u: Multiport | np.ndarray) -> np.ndarray:
    return u.matrix if isinstance(u, Multiport) else Multiport(u).matrix


def symmetric_four_port(phi: float) -> Multiport:
    """Diamond of four balanced beamsplitters with a phase plate ``phi``."""
    e = cmath.exp(1j * phi)
    u = 0.5 * np.array(
        [
            [e, e, 1, 1],
            [-e, -e, 1, 1],
            [-1, 1, -1, 1],
            [1, -1, -1, 1],
        ],
        dtype=np.complex128,
    )
    return Multiport(u)


def balanced_beamsplitter() -> Multiport:
    return Multiport(np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2))


def random_unitary(m: int, seed: int | None = None, rng: np.random.Generator | None = None) -> Multiport:
    """Haar-random unitary from QR of a complex Ginibre matrix."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return Multiport(q * (d / np.abs(d)))


@dataclass(frozen=True, eq=False)
class InputSpec:
    """One particle per listed input port, each with its own internal state."""

    ports: tuple[int, ...]
    states: tuple[InternalState, ...]
    statistics: str = "boson"

    def __post_init__(self):
        ports = tuple(int(p) for p in self.ports)
        states = tuple(self.states)
        if len(ports) != len(states):
            raise ValueError(f"{len(ports)} ports but {len(states)} internal states")
        if not ports:
            raise ValueError("need at least one particle")
        if len(set(ports)) != len(ports):
            raise ValueError("input ports must be distinct (one particle per port)")
        if min(ports) < 0:
            raise ValueError("port indices are 0-based and nonnegative")
        if not all(isinstance(s, (PureState, MixedState)) for s in states):
            raise TypeError("internal states must be PureState or MixedState")
        if len({s.dim for s in states}) != 1:
            raise DimensionError("internal states have different dimensions")
        if self.statistics not in STATISTICS:
            raise ValueError(f"statistics must be one of {STATISTICS}, got {self.statistics!r}")
        object.__setattr__(self, "ports", ports)
        object.__setattr__(self, "states", states)

    @property
    def n(self) -> int:
        return len(self.ports)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def is_pure(self) -> bool:
        return all(isinstance(s, PureState) for s in self.states)

    @property
    def sign(self) -> int:
        return 1 if self.statistics == "boson" else -1

    def subset(self, particles: Sequence[int]) -> InputSpec:
        return InputSpec(
            tuple(self.ports[i] for i in particles),
            tuple(self.states[i] for i in particles),
            self.statistics,
        )

    def check_modes(self, m: int) -> None:
        if max(self.ports) >= m:
            raise DimensionError(f"input port {max(self.ports)} outside a {m}-mode multiport")


@dataclass(frozen=True)
class OutputEvent:
    """Multiset of detected output ports, stored sorted."""

    ports: tuple[int, ...]

    def __post_init__(self):
        ports = tuple(sorted(int(p) for p in self.ports))
        if ports and ports[0] < 0:
            raise ValueError("port indices are 0-based and nonnegative")
        object.__setattr__(self, "ports", ports)

    @property
    def n(self) -> int:
        return len(self.ports)

    def occupations(self, m: int) -> tuple[int, ...]:
        occ = [0] * m
        for p in self.ports:
            occ[p] += 1
        return tuple(occ)

    def multiplicity_factorial(self) -> int:
        """``m! = prod_l m_l!`` over the occupation numbers."""
        out = 1
        for _, group in itertools.groupby(self.ports):
            out *= math.factorial(len(list(group)))
        return out

    def check_modes(self, m: int) -> None:
        if self.ports and self.ports[-1] >= m:
            raise DimensionError(f"output port {self.ports[-1]} outside a {m}-mode multiport")

    def __str__(self) -> str:
        return " ".join(map(str, self.ports))


def all_output_events(n: int, m: int) -> Iterator[OutputEvent]:
    """All ``C(n+m-1, n)`` multisets of ``n`` ports out of ``m``."""
    count = math.comb(n + m - 1, n)
    if count > MAX_EVENTS:
        raise SizeLimitError(f"{count} output events exceeds the limit {MAX_EVENTS}")
    for ports in itertools.combinations_with_replacement(range(m), n):
        yield OutputEvent(ports)


def coincidence_event(ports: Sequence[int]) -> OutputEvent:
    return OutputEvent(tuple(ports))
