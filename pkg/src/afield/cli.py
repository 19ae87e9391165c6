"""Command line for the afield solvers and checks.

Exit status: 0 when every check passes, 1 when a tolerance is missed,
2 for configuration errors, 3 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError
from .scenarios import BUILTINS, EXAMPLES, PROFILES, builtin_config, run_scenario

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

COMMANDS = ("cauchy", "mono", "stationary", "shock-check", "oracle", "compare", "examples")

log = logging.getLogger("afield")


def _common(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, help="scenario config file (key = value text)")
    parser.add_argument("--scenario", default=d,
                        help=f"config file or built-in scenario ({', '.join(sorted(BUILTINS))})")
    parser.add_argument("--out-dir", default=argparse.SUPPRESS if suppress else "afield-out",
                        help="directory for the field table and report")
    parser.add_argument("--tolerance-profile", choices=sorted(PROFILES),
                        default=argparse.SUPPRESS if suppress else "default")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1,
                        help="worker threads for point evaluation (AFIELD_THREADS overrides)")


def build_parser():
    parser = argparse.ArgumentParser(prog="afield", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p, suppress=True)
        if name == "examples":
            p.add_argument("--which", default="all", choices=sorted(EXAMPLES) + ["all"])
        if name == "compare":
            p.add_argument("--reference", help="earlier report whose config hash must match")
    return parser


def _threads(args):
    env = os.environ.get("AFIELD_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"AFIELD_THREADS must be an integer, got {env!r}") from None
    else:
        n = args.threads
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def _load(args):
    source = args.config or args.scenario
    if source is None:
        raise ConfigError("one of --config or --scenario is required")
    if Path(source).is_file():
        return load_config(source)
    if args.config:
        raise ConfigError(f"config file not found: {args.config}")
    return builtin_config(source)


def _run_one(cfg, out_dir, args, threads, reference=None):
    report, _ = run_scenario(cfg, out_dir, args.tolerance_profile, threads, reference)
    for c in report.checks:
        mark = "PASS" if c["pass"] else "FAIL"
        print(f"{mark} {c['name']}: {c['value']:.3e} (tolerance {c['tolerance']:.1e})")
    return report


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = _threads(args)
        out = Path(args.out_dir)
        if args.command == "examples":
            names = [EXAMPLES[w] for w in (sorted(EXAMPLES) if args.which == "all" else [args.which])]
            reports = []
            for name in names:
                print(f"== {name}")
                reports.append(_run_one(builtin_config(name), out / name, args, threads))
            return EXIT_OK if all(r.passed for r in reports) else EXIT_TOLERANCE
        cfg = _load(args)
        if cfg.kind != args.command:
            raise ConfigError(f"config describes a {cfg.kind!r} scenario, not {args.command!r}", key="scenario")
        reference = None
        if getattr(args, "reference", None):
            try:
                reference = json.loads(Path(args.reference).read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read reference report: {exc}") from None
        report = _run_one(cfg, out, args, threads, reference)
        return EXIT_OK if report.passed else EXIT_TOLERANCE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - every other failure maps to the runtime status
        log.debug("runtime failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
