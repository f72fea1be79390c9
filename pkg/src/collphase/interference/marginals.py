"""Marginals with particle loss and unnormalized correlation functions."""

from __future__ import annotations

import itertools
import math
from collections import Counter

from ..errors import DimensionError
from .engine import output_probability_permanent
from .types import InputSpec, OutputEvent, all_output_events, as_unitary


def _check_partial(inp: InputSpec, partial: OutputEvent, allow_full: bool) -> int:
    r = partial.n
    if r < 1:
        raise DimensionError("partial event must contain at least one particle")
    if r > inp.n or (r == inp.n and not allow_full):
        raise DimensionError(
            f"marginal needs fewer detected particles ({r}) than input particles ({inp.n}); "
            "use output_probability for the full event"
        )
    return r


def marginal_probability(u, inp: InputSpec, partial: OutputEvent) -> float:
    """Probability of detecting ``R < N`` particles at ``partial``.

    Averages the ``R``-particle probability over every ``R``-subset of the
    input particles, each computed by the full engine.
    """
    r = _check_partial(inp, partial, allow_full=False)
    total = 0.0
    for subset in itertools.combinations(range(inp.n), r):
        total += output_probability_permanent(u, inp.subset(subset), partial)
    return total / math.comb(inp.n, r)


def _containment_weight(event: OutputEvent, partial: OutputEvent) -> int:
    """``m!/(m'! m''!)`` if ``partial`` is a sub-multiset of ``event``, else 0."""
    full, part = Counter(event.ports), Counter(partial.ports)
    weight = 1
    for port, k in part.items():
        m = full.get(port, 0)
        if m < k:
            return 0
        weight *= math.comb(m, k)
    return weight


def marginal_probability_binned(u, inp: InputSpec, partial: OutputEvent) -> float:
    """Same marginal, binned from the full ``N``-particle distribution."""
    r = _check_partial(inp, partial, allow_full=False)
    m = as_unitary(u).shape[0]
    total = 0.0
    for event in all_output_events(inp.n, m):
        w = _containment_weight(event, partial)
        if w:
            total += w * output_probability_permanent(u, inp, event)
    return total / math.comb(inp.n, r)


def correlation_Q(u, inp: InputSpec, partial: OutputEvent) -> float:
    """Unnormalized ``R``-th order correlation ``<prod b^dag ... b>`` at ``partial``."""
    r = _check_partial(inp, partial, allow_full=True)
    if r == inp.n:
        return partial.multiplicity_factorial() * output_probability_permanent(u, inp, partial)
    return partial.multiplicity_factorial() * math.comb(inp.n, r) * marginal_probability(u, inp, partial)


def correlation_Q_from_counts(u, inp: InputSpec, partial: OutputEvent) -> float:
    """``Q_R`` as the expectation of falling factorials of the output counts."""
    _check_partial(inp, partial, allow_full=True)
    m = as_unitary(u).shape[0]
    need = Counter(partial.ports)
    total = 0.0
    for event in all_output_events(inp.n, m):
        have = Counter(event.ports)
        moment = 1
        for port, k in need.items():
            moment *= math.perm(have.get(port, 0), k)
        if moment:
            total += moment * output_probability_permanent(u, inp, event)
    return total
