"""Turn scenarios into result records."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DimensionError, SizeLimitError
from ..interference.engine import output_probability_permanent
from ..interference.marginals import marginal_probability
from ..interference.types import InputSpec, all_output_events, random_unitary
from ..oracle import oracle_distribution, oracle_probability
from ..states import PureState
from .config import Scenario, build_events, build_input, build_multiport

VERIFY_TOL = 1e-8


@dataclass
class RunResult:
    records: list[dict]
    fields: list[str]
    metadata: dict
    max_delta: float = 0.0
    tolerance: float = VERIFY_TOL

    @property
    def verified(self) -> bool:
        return self.max_delta <= self.tolerance


def _oracle_marginal(dist: dict, partial, n: int) -> float:
    need = Counter(partial.ports)
    total = 0.0
    for ports, p in dist.items():
        have = Counter(ports)
        w = 1
        for port, k in need.items():
            w *= math.comb(have.get(port, 0), k)
        total += w * p
    return total / math.comb(n, partial.n)


def run_scenario(sc: Scenario, seed: int | None = None, verify: bool = False, marginals: int | None = None) -> RunResult:
    verify = verify or sc.verify
    marginals = marginals if marginals is not None else sc.marginals
    seed = seed if seed is not None else sc.raw.get("seed")
    param = sc.sweep.parameter if sc.sweep else None
    fields = ["sweep", "event", "detected", "method", "probability"]
    if verify:
        fields += ["oracle", "abs_delta"]
    records: list[dict] = []
    meta: dict = {"scenario": sc.name, "sweep_parameter": param}
    max_delta = 0.0
    for value, cfg in sc.points():
        u, mmeta = build_multiport(cfg["multiport"], seed)
        meta.update(mmeta)
        inp = build_input(cfg["input"])
        try:
            inp.check_modes(u.modes)
        except DimensionError as exc:
            raise ConfigError(str(exc)) from exc
        events = build_events(cfg.get("events", "coincidence"), inp.n, u.modes)
        dist = None
        if verify and marginals:
            dist = _checked_oracle(lambda: oracle_distribution(u, inp))
        for ev in events:
            rec = {"sweep": value, "event": str(ev), "detected": ev.n, "method": "permanent",
                   "probability": output_probability_permanent(u, inp, ev)}
            if verify:
                o = dist[ev.ports] if dist is not None else _checked_oracle(lambda: oracle_probability(u, inp, ev))
                rec["oracle"], rec["abs_delta"] = o, abs(o - rec["probability"])
                max_delta = max(max_delta, rec["abs_delta"])
            records.append(rec)
        if marginals:
            if not 1 <= marginals < inp.n:
                raise ConfigError(f"--marginals must lie in 1..{inp.n - 1} for {inp.n} particles")
            for ev in all_output_events(marginals, u.modes):
                rec = {"sweep": value, "event": str(ev), "detected": ev.n, "method": "marginal",
                       "probability": marginal_probability(u, inp, ev)}
                if verify:
                    o = _oracle_marginal(dist, ev, inp.n)
                    rec["oracle"], rec["abs_delta"] = o, abs(o - rec["probability"])
                    max_delta = max(max_delta, rec["abs_delta"])
                records.append(rec)
    return RunResult(records, fields, meta, max_delta)


def _checked_oracle(fn):
    try:
        return fn()
    except (SizeLimitError, TypeError) as exc:
        raise ConfigError(f"--verify unavailable for this scenario: {exc}") from exc


def normalize_check(seed: int, instances: int = 50, tol: float = 1e-10) -> RunResult:
    """Probability sums over all events for seeded random instances.

    ``max_delta`` of the result holds the worst deviation from one.
    """
    rng = np.random.default_rng(seed)
    fields = ["instance", "particles", "modes", "statistics", "total", "deviation"]
    records = []
    worst = 0.0
    for i in range(instances):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(n, 6))
        d = int(rng.integers(1, 5))
        stat = "boson" if i % 2 == 0 else "fermion"
        states = tuple(PureState.normalized(rng.normal(size=d) + 1j * rng.normal(size=d)) for _ in range(n))
        ports = tuple(int(p) for p in rng.choice(m, size=n, replace=False))
        u = random_unitary(m, rng=rng)
        inp = InputSpec(ports, states, stat)
        total = math.fsum(output_probability_permanent(u, inp, ev) for ev in all_output_events(n, m))
        worst = max(worst, abs(total - 1))
        records.append({"instance": i, "particles": n, "modes": m, "statistics": stat,
                        "total": total, "deviation": abs(total - 1)})
    return RunResult(records, fields, {"seed": seed, "instances": instances}, worst, tol)
