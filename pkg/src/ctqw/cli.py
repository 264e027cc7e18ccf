"""Command-line interface.

Subcommands: generate-graph, run, sweep, fit. Exit codes: 0 success,
2 configuration error, 3 numeric failure, 4 partial sweep failure. The
environment variable CTQW_SEED overrides the config seed for run and sweep.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .config import ExperimentConfig
from .errors import ConfigError, CtqwError, GraphGenerationError, IntegrationError, InvalidStateError
from .graphs import GENERATOR_FAMILIES, build_graph
from .runner import PRESET_NAMES, fit_csv, preset, run, sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_PARTIAL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctqw",
        description="Continuous-time quantum walks on graphs under decoherence")
    parser.add_argument("--version", action="version", version=f"ctqw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate-graph", help="write a graph JSON file")
    g.add_argument("--family", required=True, choices=GENERATOR_FAMILIES)
    g.add_argument("--n", required=True, type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--avg-degree", type=float, dest="avg_degree")
    g.add_argument("--k", type=int)
    g.add_argument("--p-rewire", type=float, dest="p_rewire")
    g.add_argument("--m", type=int)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("--config", required=True)
    r.add_argument("--out-dir", required=True, dest="out_dir")
    r.add_argument("--emit-occupations", action="store_true", dest="emit_occupations")
    r.add_argument("--snapshots", action="store_true")

    s = sub.add_parser("sweep", help="run a preset or a JSON list of configs")
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES)
    group.add_argument("--configs")
    s.add_argument("--out-dir", required=True, dest="out_dir")
    s.add_argument("--jobs", type=int, default=1)

    f = sub.add_parser("fit", help="fit a stretched exponential to a CSV column")
    f.add_argument("--input", required=True)
    f.add_argument("--column", default="l1_coherence")
    f.add_argument("--window", help="comma-separated t_min,t_max")
    f.add_argument("--from-peak", action="store_true", dest="from_peak",
                   help="fit the decay segment from the curve's global maximum")
    f.add_argument("--out")
    return parser


def _env_seed() -> int | None:
    raw = os.environ.get("CTQW_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"CTQW_SEED must be an integer, got {raw!r}") from exc


def _cmd_generate_graph(args: argparse.Namespace) -> int:
    graph = build_graph(args.family, args.n, avg_degree=args.avg_degree,
                        k=args.k, p_rewire=args.p_rewire, m=args.m, seed=args.seed)
    Path(args.out).write_text(graph.to_json())
    print(f"wrote {args.out}: {args.family} n={graph.n} edges={len(graph.edges)}")
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_json_file(args.config)
    env_seed = _env_seed()
    if env_seed is not None:
        config = config.with_seed(env_seed)
    if args.emit_occupations or args.snapshots:
        data = config.to_dict()
        data["emit_occupations"] = data["emit_occupations"] or args.emit_occupations
        data["snapshots"] = data["snapshots"] or args.snapshots
        config = ExperimentConfig.from_dict(data)
    manifest = run(config, args.out_dir)
    print(f"run complete: initial node {manifest.initial_node}, "
          f"artifacts in {args.out_dir}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.preset:
        configs = preset(args.preset)
    else:
        try:
            items = json.loads(Path(args.configs).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configs {args.configs}: {exc}") from exc
        if not isinstance(items, list):
            raise ConfigError("--configs file must hold a JSON list of configs")
        configs = [ExperimentConfig.from_dict(item) for item in items]
    env_seed = _env_seed()
    if env_seed is not None:
        configs = [cfg.with_seed(env_seed) for cfg in configs]
    result = sweep(configs, args.out_dir, jobs=args.jobs)
    print(f"sweep complete: {len(result.rows)} runs, {len(result.failures)} failures")
    for run_id, message in result.failures:
        print(f"  FAILED {run_id}: {message}", file=sys.stderr)
    return EXIT_PARTIAL if result.failures else EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    window = None
    if args.window:
        try:
            lo, hi = (float(x) for x in args.window.split(","))
        except ValueError as exc:
            raise ConfigError(f"--window expects 't_min,t_max', got {args.window!r}") from exc
        window = (lo, hi)
    result = fit_csv(args.input, args.column, window=window, from_peak=args.from_peak)
    text = result.to_json()
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    if not result.converged:
        print(f"warning: fit did not converge ({result.note or 'see rss'})",
              file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate-graph": _cmd_generate_graph,
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "fit": _cmd_fit,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, InvalidStateError, GraphGenerationError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CtqwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry_point() -> None:
    raise SystemExit(main())
