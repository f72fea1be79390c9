"""Closed-form four-particle coincidence on the symmetric four-port."""

from __future__ import annotations

import math
from typing import Sequence


def coincidence_p4_closed_form(r: Sequence[float], theta_total: float, statistics: str = "boson") -> float:
    """Coincidence probability for circle-dance inputs on ``symmetric_four_port``.

    ``r`` holds the edge moduli ``(r01, r12, r23, r30)`` and ``theta_total``
    the collective phase of the cycle (0, 1, 2, 3). The value does not
    depend on the plate phase of the multiport.
    """
    if len(r) != 4:
        raise ValueError("need the four circle-edge moduli")
    if any(not 0.0 <= x <= 1.0 for x in r):
        raise ValueError("edge moduli must lie in [0, 1]")
    if statistics not in ("boson", "fermion"):
        raise ValueError(f"unknown statistics {statistics!r}")
    r12, r23, r34, r41 = r
    s = 1.0 if statistics == "boson" else -1.0
    pairs = r12**2 * r34**2 + r41**2 * r23**2
    squares = r12**2 + r23**2 + r34**2 + r41**2
    ring = 2 * r12 * r23 * r34 * r41 * math.cos(theta_total)
    return (3 * (1 + pairs) - s * (squares + ring)) / 32
