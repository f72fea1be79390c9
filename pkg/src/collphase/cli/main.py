"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 certificate failure
(non-unitary matrix, non-PSD Gram matrix, invalid POVM or state),
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import __version__
from .._backend import BACKEND
from ..errors import (
    CertificateError,
    ConfigError,
    ConsistencyError,
    DimensionError,
    PauliExclusionError,
    SizeLimitError,
)
from .config import load_scenario, scenario_from_dict
from .emit import emit
from .run import RunResult, normalize_check, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_VERIFY = 4


def hom_config(statistics: str = "boson") -> dict:
    return {
        "name": "hom",
        "multiport": {"type": "beamsplitter"},
        "input": {"ports": [0, 1], "statistics": statistics, "states": {"type": "pair", "r": 0.0}},
        "events": "coincidence",
        "sweep": {"parameter": "input.states.r", "values": [0.0, 0.5, 1.0]},
    }


def circle_dance_4_config(r: float = 0.5, phi: str | float = 0, statistics: str = "boson") -> dict:
    return {
        "name": "circle-dance-4",
        "multiport": {"type": "symmetric4", "phi": phi},
        "input": {
            "ports": [0, 1, 2, 3],
            "statistics": statistics,
            "states": {"type": "circle_dance", "r": r, "theta_total": 0},
        },
        "events": "coincidence",
        "sweep": {"parameter": "input.states.theta_total", "start": 0, "stop": "2*pi", "step": "pi/8"},
    }


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--verify", action="store_true", help="add brute-force oracle columns and fail on |delta| > 1e-8")
    p.add_argument("--marginals", type=int, metavar="R", help="also emit all R-particle marginals")
    p.add_argument("--seed", type=int, metavar="S", help="seed for random multiports")
    p.add_argument("--out", metavar="PATH", help="write records to PATH (metadata to PATH.meta.json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collphase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("hom", help="two-particle dip on a balanced beamsplitter, overlap sweep")
    p.add_argument("--statistics", choices=("boson", "fermion"), default="boson")
    _common(p)

    p = sub.add_parser("circle-dance-4", help="four-particle collective-phase sweep on the symmetric four-port")
    p.add_argument("--r", type=float, default=0.5, help="common edge modulus (default 0.5)")
    p.add_argument("--phi", default="0", help="plate phase of the four-port (default 0)")
    p.add_argument("--statistics", choices=("boson", "fermion"), default="boson")
    _common(p)

    p = sub.add_parser("normalize-check", help="check that probabilities sum to one on random instances")
    p.add_argument("--instances", type=int, default=50)
    _common(p)
    return parser


def _write(result: RunResult, args, extra_meta: dict) -> None:
    text = emit(result.records, args.format, result.fields)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        meta = {"version": __version__, "backend": BACKEND, **result.metadata, **extra_meta}
        Path(f"{out}.meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _dispatch(args) -> RunResult:
    if args.command == "normalize-check":
        return normalize_check(args.seed if args.seed is not None else 0, args.instances)
    if args.command == "run":
        sc = load_scenario(args.config)
    elif args.command == "hom":
        sc = scenario_from_dict(hom_config(args.statistics))
    else:
        sc = scenario_from_dict(circle_dance_4_config(args.r, args.phi, args.statistics))
    return run_scenario(sc, seed=args.seed, verify=args.verify, marginals=args.marginals)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = _dispatch(args)
        _write(result, args, {"command": args.command, "argv": sys.argv[1:] if argv is None else list(argv)})
    except (CertificateError, ConsistencyError) as exc:
        print(f"collphase: certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except (ConfigError, DimensionError, SizeLimitError, PauliExclusionError) as exc:
        print(f"collphase: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "normalize-check" or "oracle" in result.fields:
        if not result.verified:
            print(
                f"collphase: verification failed (max deviation {result.max_delta:.3e} > {result.tolerance:g})",
                file=sys.stderr,
            )
            return EXIT_VERIFY
    return EXIT_OK
