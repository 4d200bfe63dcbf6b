"""Command-line front end: scenario sweeps to CSV.

Subcommands::

    zenodrive filter   --preset fig1b [--variant solid-black] | --config FILE
    zenodrive rate     --preset fig3a [--variant ...]         | --config FILE
    zenodrive polaron  --preset polaron-fig-a [--variant ...] | --config FILE
    zenodrive regimes  --preset fig3a [--variant ...]         | --config FILE
    zenodrive presets

Common flags: ``--out PATH`` (default stdout), ``--threads N`` (default:
hardware parallelism), ``--tol REL`` (override the relative tolerance).
Exit codes: 0 success, 2 configuration error, 3 numeric convergence failure
(a partial CSV is still written, with the failure recorded per point).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from typing import Optional

from .. import __version__
from .config import ConfigError, ScenarioConfig, parse_config
from .presets import PRESETS, list_presets
from .runner import (
    SweepTable,
    merge_variant_tables,
    render_csv,
    run_filter_sweep,
    run_rate_sweep,
    run_regime_sweep,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenodrive",
        description=(
            "Filter functions, measurement-modified decay rates and regime "
            "classification for driven spin systems."
        ),
    )
    parser.add_argument("--version", action="version", version=f"zenodrive {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="scenario configuration file")
        p.add_argument("--preset", help="named figure preset")
        p.add_argument("--variant", help="preset variant (default: all variants)")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument(
            "--threads",
            type=int,
            default=os.cpu_count() or 1,
            help="worker pool size (default: hardware parallelism)",
        )
        p.add_argument("--tol", type=float, help="relative tolerance override")

    add_common(sub.add_parser("filter", help="filter value over a frequency grid"))
    add_common(sub.add_parser("rate", help="weak-coupling decay rate over a tau grid"))
    add_common(sub.add_parser("polaron", help="strong-coupling decay rate over a tau grid"))
    add_common(sub.add_parser("regimes", help="regime segmentation of a rate curve"))
    p = sub.add_parser("presets", help="list the named figure presets")
    p.add_argument("--out", help="output path (default: stdout)")
    return parser


def _load_scenarios(args) -> list[tuple[Optional[str], ScenarioConfig]]:
    """Resolve (label, config) pairs from --preset/--variant or --config."""
    if bool(args.config) == bool(args.preset):
        raise ConfigError("exactly one of --config or --preset is required")
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        return [(None, parse_config(text))]
    if args.preset not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {args.preset!r}; known presets: {known}")
    preset = PRESETS[args.preset]
    if args.variant is not None:
        try:
            cfg = preset.variant(args.variant)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        return [(f"preset {preset.name} variant {args.variant}", cfg)]
    return [
        (f"preset {preset.name} variant {variant}", cfg)
        for variant, cfg in preset.variants
    ]


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if args.tol is not None:
        if args.tol <= 0.0:
            raise ConfigError("--tol must be positive")
        cfg = cfg.with_numerics(replace(cfg.numerics, rel_tol=args.tol))
    return cfg


def _check_sweep_kind(command: str, cfg: ScenarioConfig) -> None:
    if command == "filter":
        if cfg.model_kind == "polaron":
            raise ConfigError("filter sweeps are not defined for the polaron model")
        if cfg.omega_grid is None:
            raise ConfigError("filter sweeps require [grid.omega]")
    elif command == "rate":
        if cfg.model_kind == "polaron":
            raise ConfigError("use the polaron subcommand for strong-coupling sweeps")
        if cfg.tau_grid is None:
            raise ConfigError("rate sweeps require [grid.tau]")
    elif command == "polaron":
        if cfg.model_kind != "polaron":
            raise ConfigError("the polaron subcommand requires model kind polaron")
        if cfg.tau_grid is None:
            raise ConfigError("polaron sweeps require [grid.tau]")
    elif command == "regimes":
        if cfg.tau_grid is None:
            raise ConfigError("regime classification requires [grid.tau]")


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "presets":
        _write_output(list_presets(__version__), args.out)
        return EXIT_OK

    try:
        scenarios = _load_scenarios(args)
        scenarios = [(label, _apply_overrides(cfg, args)) for label, cfg in scenarios]
        for _, cfg in scenarios:
            _check_sweep_kind(args.command, cfg)
    except ConfigError as exc:
        print(f"zenodrive: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    runner = {
        "filter": run_filter_sweep,
        "rate": run_rate_sweep,
        "polaron": run_rate_sweep,
        "regimes": run_regime_sweep,
    }[args.command]

    try:
        tables: list[tuple[str, SweepTable]] = []
        for label, cfg in scenarios:
            variant = label.rsplit(" ", 1)[-1] if label else "scenario"
            tables.append(
                (
                    variant,
                    runner(cfg, threads=args.threads, version=__version__, label=label),
                )
            )
        table = merge_variant_tables(tables)
    except (ConfigError, ValueError) as exc:
        print(f"zenodrive: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_path = args.out or next(
        (cfg.output_path for _, cfg in scenarios if cfg.output_path), None
    )
    _write_output(render_csv(table), out_path)
    if table.failed_points:
        print(
            f"zenodrive: {table.failed_points} grid point(s) did not converge; "
            "partial results written",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    return EXIT_OK
