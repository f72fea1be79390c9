"""Scenario files: parsing, validation and parameter sweeps.

A scenario is a JSON object::

    {
      "multiport": {"type": "symmetric4", "phi": "pi/2"},
      "input": {
        "ports": [0, 1, 2, 3],
        "statistics": "boson",
        "states": {"type": "circle_dance", "r": 0.5, "theta_total": 0}
      },
      "events": "coincidence",
      "sweep": {"parameter": "input.states.theta_total", "start": 0, "stop": "2*pi", "step": "pi/8"}
    }

Complex numbers are written as ``[re, im]`` pairs or plain reals. Angles may
be strings such as ``"pi/2"`` or ``"-3*pi/4"``.
"""

from __future__ import annotations

import ast
import copy
import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..distinguishability import circle_dance_gram, states_from_gram
from ..errors import CertificateError, ConfigError
from ..interference.types import (
    STATISTICS,
    InputSpec,
    Multiport,
    OutputEvent,
    all_output_events,
    balanced_beamsplitter,
    random_unitary,
    symmetric_four_port,
)
from ..states import GaussianPhotonSpec, MixedState, PureState, circle_dance_photons, gaussian_overlap

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi}


def parse_angle(value: Any) -> float:
    """Radians from a number or an arithmetic string in ``pi``."""
    if isinstance(value, bool):
        raise ConfigError(f"expected an angle, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected an angle, got {value!r}")
    try:
        tree = ast.parse(value.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse angle {value!r}") from exc
    return float(_eval(tree.body, value))


def _eval(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, text), _eval(node.right, text))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval(node.operand, text))
    raise ConfigError(f"unsupported expression in angle {text!r}")


def parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"expected a real number or [re, im] pair, got {value!r}")


def parse_matrix(rows: Any) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError("matrix must be a nonempty list of rows")
    if len({len(r) for r in rows}) != 1:
        raise ConfigError("matrix rows have different lengths")
    return np.array([[parse_complex(x) for x in row] for row in rows], dtype=np.complex128)


def parse_vector(items: Any) -> np.ndarray:
    if not isinstance(items, list) or not items:
        raise ConfigError("vector must be a nonempty list")
    return np.array([parse_complex(x) for x in items], dtype=np.complex128)


def _require(section: dict, key: str, where: str):
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    if key not in section:
        raise ConfigError(f"{where} is missing {key!r}")
    return section[key]


# --- builders -----------------------------------------------------------------


def build_multiport(spec: dict, seed: int | None = None) -> tuple[Multiport, dict]:
    """Multiport and the metadata needed to reproduce it."""
    kind = _require(spec, "type", "multiport")
    if kind == "symmetric4":
        return symmetric_four_port(parse_angle(spec.get("phi", 0.0))), {}
    if kind == "beamsplitter":
        return balanced_beamsplitter(), {}
    if kind == "matrix":
        return Multiport(parse_matrix(_require(spec, "matrix", "multiport"))), {}
    if kind == "random":
        modes = int(_require(spec, "modes", "multiport"))
        if modes < 1:
            raise ConfigError("random multiport needs at least one mode")
        s = seed if seed is not None else spec.get("seed")
        if s is None:
            raise ConfigError("random multiport needs a seed (config 'seed' or --seed)")
        return random_unitary(modes, seed=int(s)), {"seed": int(s)}
    raise ConfigError(f"unknown multiport type {kind!r}")


def _per_edge(value, n: int, name: str, parse=float) -> list[float]:
    if isinstance(value, list):
        if len(value) != n:
            raise ConfigError(f"{name} needs {n} entries, got {len(value)}")
        return [parse(v) for v in value]
    return [parse(value)] * n


def build_states(spec: dict, n: int) -> list:
    kind = _require(spec, "type", "input.states")
    if kind == "vectors":
        vecs = _require(spec, "vectors", "input.states")
        return [PureState(parse_vector(v)) for v in vecs]
    if kind == "density":
        return [MixedState(parse_matrix(m)) for m in _require(spec, "matrices", "input.states")]
    if kind == "gram":
        return states_from_gram(parse_matrix(_require(spec, "matrix", "input.states")))
    if kind == "pair":
        # two particles with overlap r e^{i theta}
        if n != 2:
            raise ConfigError("'pair' states describe exactly two particles")
        r = float(_require(spec, "r", "input.states"))
        if not 0.0 <= r <= 1.0:
            raise ConfigError(f"pair overlap r must lie in [0, 1], got {r}")
        h = r * np.exp(1j * parse_angle(spec.get("theta", 0.0)))
        return states_from_gram(np.array([[1, h], [np.conj(h), 1]]))
    if kind == "circle_dance":
        r = _per_edge(_require(spec, "r", "input.states"), n, "r")
        if "theta_total" in spec:
            if "theta" in spec:
                raise ConfigError("give either 'theta' or 'theta_total', not both")
            theta = [0.0] * (n - 1) + [parse_angle(spec["theta_total"])]
        else:
            theta = _per_edge(spec.get("theta", 0.0), n, "theta", parse_angle)
        if n < 4:
            raise ConfigError("circle-dance states need at least 4 particles")
        return states_from_gram(circle_dance_gram(n, r, theta))
    if kind == "gaussian":
        photons = [_gaussian(p) for p in _require(spec, "photons", "input.states")]
        if "chi" in spec:
            photons = circle_dance_photons(photons, parse_angle(spec["chi"]))
        gram = np.array([[gaussian_overlap(a, b) for b in photons] for a in photons])
        return states_from_gram(gram)
    raise ConfigError(f"unknown state type {kind!r}")


def _gaussian(p: dict) -> GaussianPhotonSpec:
    pol = parse_vector(p.get("polarization", [1, 0]))
    return GaussianPhotonSpec(
        float(_require(p, "center_frequency", "photon")),
        float(_require(p, "width", "photon")),
        float(p.get("arrival_time", 0.0)),
        pol,
    )


def build_input(spec: dict) -> InputSpec:
    ports = _require(spec, "ports", "input")
    if not isinstance(ports, list) or not all(isinstance(p, int) for p in ports):
        raise ConfigError("input.ports must be a list of integers")
    statistics = spec.get("statistics", "boson")
    if statistics not in STATISTICS:
        raise ConfigError(f"statistics must be one of {STATISTICS}")
    try:
        states = build_states(_require(spec, "states", "input"), len(ports))
        return InputSpec(tuple(ports), tuple(states), statistics)
    except (CertificateError, ConfigError):
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid input: {exc}") from exc


def build_events(spec: Any, n: int, modes: int) -> list[OutputEvent]:
    if spec == "all":
        return list(all_output_events(n, modes))
    if spec == "coincidence":
        if n > modes:
            raise ConfigError("coincidence event needs at least as many modes as particles")
        return [OutputEvent(tuple(range(n)))]
    if isinstance(spec, list) and all(isinstance(e, list) for e in spec):
        events = [OutputEvent(tuple(int(p) for p in e)) for e in spec]
        for ev in events:
            if ev.n != n or (ev.ports and ev.ports[-1] >= modes) or (ev.ports and ev.ports[0] < 0):
                raise ConfigError(f"event {list(ev.ports)} does not fit {n} particles on {modes} modes")
        return events
    raise ConfigError("events must be 'all', 'coincidence' or a list of port lists")


# --- sweeps --------------------------------------------------------------------


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple[float, ...]


def parse_sweep(spec: dict | None) -> Sweep | None:
    if spec is None:
        return None
    param = _require(spec, "parameter", "sweep")
    if "values" in spec:
        values = tuple(parse_angle(v) for v in spec["values"])
    else:
        start = parse_angle(_require(spec, "start", "sweep"))
        stop = parse_angle(_require(spec, "stop", "sweep"))
        step = parse_angle(_require(spec, "step", "sweep"))
        if step <= 0:
            raise ConfigError("sweep step must be positive")
        count = math.ceil((stop - start) / step - 1e-9)
        # integer multiples avoid drift from repeated addition
        values = tuple(start + i * step for i in range(max(count, 0)))
    if not values:
        raise ConfigError("sweep has no points")
    return Sweep(param, values)


def set_path(cfg: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = cfg
    for key in keys[:-1]:
        node = _step(node, key, dotted)
    last = keys[-1]
    if isinstance(node, list):
        idx = _index(node, last, dotted)
        node[idx] = value
    elif isinstance(node, dict) and last in node:
        node[last] = value
    else:
        raise ConfigError(f"sweep parameter {dotted!r} does not exist in the scenario")


def _index(node: list, key: str, dotted: str) -> int:
    if not key.lstrip("-").isdigit() or not -len(node) <= int(key) < len(node):
        raise ConfigError(f"sweep parameter {dotted!r} does not exist in the scenario")
    return int(key)


def _step(node, key: str, dotted: str):
    if isinstance(node, list):
        return node[_index(node, key, dotted)]
    if isinstance(node, dict) and key in node:
        return node[key]
    raise ConfigError(f"sweep parameter {dotted!r} does not exist in the scenario")


# --- scenario ------------------------------------------------------------------


@dataclass
class Scenario:
    raw: dict
    sweep: Sweep | None = None
    marginals: int | None = None
    verify: bool = False
    name: str = "scenario"
    metadata: dict = field(default_factory=dict)

    def points(self):
        """``(sweep value, resolved config)`` for every sweep point."""
        if self.sweep is None:
            yield None, self.raw
            return
        for v in self.sweep.values:
            cfg = copy.deepcopy(self.raw)
            set_path(cfg, self.sweep.parameter, v)
            yield v, cfg


def scenario_from_dict(cfg: dict, name: str = "scenario") -> Scenario:
    if not isinstance(cfg, dict):
        raise ConfigError("scenario must be a JSON object")
    for key in ("multiport", "input"):
        _require(cfg, key, "scenario")
    unknown = set(cfg) - {"multiport", "input", "events", "sweep", "marginals", "verify", "name", "seed"}
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    sweep = parse_sweep(cfg.get("sweep"))
    if sweep is not None:
        # resolve the path once up front so a typo fails before any work
        set_path(copy.deepcopy(cfg), sweep.parameter, sweep.values[0])
    marg = cfg.get("marginals")
    if marg is not None and (not isinstance(marg, int) or marg < 1):
        raise ConfigError("marginals must be a positive integer")
    raw = {k: v for k, v in cfg.items() if k not in ("sweep", "marginals", "verify", "name")}
    raw.setdefault("events", "coincidence")
    return Scenario(raw, sweep, marg, bool(cfg.get("verify", False)), str(cfg.get("name", name)))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(cfg, name=path.stem)
