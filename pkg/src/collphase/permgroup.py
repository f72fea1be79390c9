"""Symmetric-group machinery: permutations, composition, signs and cycles.

Points are 0-based throughout. A permutation stores the image of each point,
so ``p(i) == p.images[i]``; composition follows function notation,
``compose(p, q)(i) == p(q(i))``. A cycle ``(k1, k2, ..., kR)`` sends
``k1 -> k2 -> ... -> kR -> k1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, SizeLimitError

#: Largest degree for which full enumeration of S_n is allowed.
MAX_ENUMERATION_DEGREE = 8

Cycle = tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> Permutation:
        """Build a permutation of degree ``n`` from disjoint cycles.

        Points not mentioned are fixed.
        """
        images = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"cycles are not disjoint within 0..{n - 1}: {cycles}")
                seen.add(a)
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> Permutation:
        return inverse(self)

    def cycles(self) -> CycleDecomposition:
        return cycle_decompose(self)

    def sign(self) -> int:
        return signature(self)

    def __str__(self) -> str:
        return str(cycle_decompose(self))


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles in canonical order, fixed points kept as 1-cycles.

    Each cycle starts at its smallest element; cycles are sorted by that
    element.
    """

    cycles: tuple[Cycle, ...]

    @property
    def degree(self) -> int:
        return sum(len(c) for c in self.cycles)

    def nontrivial(self) -> tuple[Cycle, ...]:
        return tuple(c for c in self.cycles if len(c) > 1)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles), reverse=True))

    def to_permutation(self) -> Permutation:
        return Permutation.from_cycles(self.cycles, self.degree)

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)


def canonical_cycle(cycle: Sequence[int]) -> Cycle:
    """Rotate a cycle so its smallest element comes first."""
    start = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[start:]) + tuple(cycle[:start])


def _check_degree(n: int) -> None:
    if n < 1:
        raise SizeLimitError(f"degree must be positive, got {n}")
    if n > MAX_ENUMERATION_DEGREE:
        raise SizeLimitError(
            f"degree {n} exceeds the enumeration limit {MAX_ENUMERATION_DEGREE}"
        )


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """Yield all ``n!`` permutations of ``0..n-1`` in lexicographic order."""
    _check_degree(n)
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


@lru_cache(maxsize=None)
def permutation_table(n: int) -> np.ndarray:
    """All permutations of degree ``n`` as a read-only ``(n!, n)`` int64 array.

    Row order matches :func:`enumerate_permutations`.
    """
    _check_degree(n)
    table = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    table.setflags(write=False)
    return table


def cycle_decompose(p: Permutation) -> CycleDecomposition:
    n = p.degree
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        k = start
        while not seen[k]:
            seen[k] = True
            cycle.append(k)
            k = p.images[k]
        cycles.append(tuple(cycle))
    # starts are visited in increasing order, so each cycle already begins
    # at its minimum and the list is sorted
    return CycleDecomposition(tuple(cycles))


def signature(p: Permutation) -> int:
    sgn = 1
    for cycle in cycle_decompose(p):
        if len(cycle) % 2 == 0:
            sgn = -sgn
    return sgn


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p o q``, i.e. apply ``q`` first."""
    if p.degree != q.degree:
        raise DimensionError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(p.images[i] for i in q.images))


def inverse(p: Permutation) -> Permutation:
    images = [0] * p.degree
    for i, j in enumerate(p.images):
        images[j] = i
    return Permutation(tuple(images))


def count_r_cycles(n: int, r: int) -> int:
    """Number of permutations of degree ``n`` that are a single ``r``-cycle."""
    if not 2 <= r <= n:
        raise ValueError(f"need 2 <= r <= n, got r={r}, n={n}")
    return math.factorial(n) // (r * math.factorial(n - r))
