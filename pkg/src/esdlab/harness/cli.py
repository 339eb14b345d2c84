"""Command-line face of the laboratory.

    esdlab <circular|universality|hermitize|ds-solve|tails|lemmas>
           --config <file.json> [--out <dir>] [--seed <u64>] [--threads <k>]

Exit codes: 0 all assertions passed, 1 assertion failure,
2 configuration error, 3 numerical failure.
The ESDLAB_THREADS environment variable overrides --threads.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from ..errors import ConfigurationError, NumericalFailureError
from .config import load_config
from .experiments import run_experiment

_SUBCOMMANDS = {
    "circular": "circular",
    "universality": "universality",
    "hermitize": "hermitize",
    "ds-solve": "ds_solve",
    "tails": "tails",
    "lemmas": "lemmas",
}


def build_parser():
    parser = argparse.ArgumentParser(prog="esdlab",
                                     description="spectral distribution laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--threads", type=int, default=None, help="trial-level thread count")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        expected = _SUBCOMMANDS[args.command]
        if cfg.experiment != expected:
            raise ConfigurationError(
                f"config is for experiment {cfg.experiment!r}, subcommand wants {expected!r}")
        overrides = {}
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigurationError("--seed must be a 64-bit unsigned integer")
            overrides["master_seed"] = args.seed
        if args.out is not None:
            overrides["output_dir"] = args.out
        threads = os.environ.get("ESDLAB_THREADS")
        if threads is not None:
            overrides["threads"] = int(threads)
        elif args.threads is not None:
            overrides["threads"] = args.threads
        if overrides.get("threads", cfg.threads) < 1:
            raise ConfigurationError("threads must be at least 1")
        if overrides:
            cfg = dataclasses.replace(cfg, **overrides)
        result = run_experiment(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for gate in result.gates:
        print(f"GATE {gate.name}: {'PASS' if gate.passed else 'FAIL'} ({gate.detail})")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
