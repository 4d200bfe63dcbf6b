"""Sweep execution and CSV rendering for the command-line front end.

Grid points are dispatched to a process pool and reassembled in grid order,
so the emitted CSV is byte-identical for any worker count.  Values are
printed with 17 significant digits; comment lines start with '#'.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from ..environment import OhmicSpectralDensity, Temperature
from ..filters import (
    Dephasing,
    FilterModel,
    FilterSweep,
    LargeSpin,
    PopulationDecayFull,
    PopulationDecayRWA,
)
from ..profiles import EulerDrive
from ..rates import PolaronModel, RateCurve, RateModel, classify_regimes, rate_curve
from .config import GridSpec, ScenarioConfig, serialize_config

__all__ = [
    "SweepTable",
    "grid_values",
    "build_model",
    "run_filter_sweep",
    "run_rate_sweep",
    "run_regime_sweep",
    "render_csv",
]

_FILTER_CHUNK = 16
_RATE_CHUNK = 4


@dataclass
class SweepTable:
    """CSV-ready sweep output: comments, header, rows, trailing comments."""

    comments: list[str]
    header: tuple[str, ...]
    rows: list[tuple]
    trailing_comments: list[str]
    failed_points: int = 0


def grid_values(spec: GridSpec) -> np.ndarray:
    if spec.spacing == "log":
        return np.geomspace(spec.min, spec.max, spec.count)
    return np.linspace(spec.min, spec.max, spec.count)


def build_model(cfg: ScenarioConfig) -> RateModel:
    """Instantiate the scenario's model from its drive profiles."""
    kind = cfg.model_kind
    if kind == "polaron":
        return PolaronModel(delta=cfg.delta, epsilon=cfg.drive("epsilon"))
    if kind == "dephasing":
        return Dephasing(
            alpha_tilde=cfg.drive("alpha_tilde"),
            beta=cfg.drive("beta"),
            gamma_tilde=cfg.drive("gamma_tilde"),
        )
    drive = EulerDrive(
        alpha=cfg.drive("alpha"), beta=cfg.drive("beta"), gamma=cfg.drive("gamma")
    )
    if kind == "population_decay_rwa":
        return PopulationDecayRWA(drive)
    if kind == "population_decay_full":
        return PopulationDecayFull(drive)
    if kind == "large_spin":
        return LargeSpin(drive, cfg.n_spins)
    raise ValueError(f"unsupported model kind {kind!r}")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _config_comments(cfg: ScenarioConfig, version: str, label: Optional[str]) -> list[str]:
    comments = [f"zenodrive {version}"]
    if label:
        comments.append(label)
    comments.extend(serialize_config(cfg).strip().splitlines())
    return comments


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _filter_chunk_worker(chunk: np.ndarray, model: FilterModel, tau: float, quad) -> list:
    sweep = FilterSweep(model, tau, quad)
    values = sweep.values(chunk)
    return list(values)


def run_filter_sweep(
    cfg: ScenarioConfig,
    threads: int = 1,
    *,
    version: str = "0",
    label: Optional[str] = None,
) -> SweepTable:
    """Filter value over the scenario's frequency grid at fixed tau."""
    if cfg.omega_grid is None or cfg.filter_tau is None:
        raise ValueError("filter sweep requires [grid.omega] with a fixed tau")
    if cfg.model_kind == "polaron":
        raise ValueError("filter sweeps are defined for the weak-coupling models")
    model = build_model(cfg)
    omegas = grid_values(cfg.omega_grid)
    quad = cfg.numerics.quadrature()

    chunks = [omegas[i : i + _FILTER_CHUNK] for i in range(0, len(omegas), _FILTER_CHUNK)]
    worker = partial(_filter_chunk_worker, model=model, tau=cfg.filter_tau, quad=quad)
    values = [v for chunk_vals in _pmap(worker, chunks, threads) for v in chunk_vals]

    rows = [(_fmt(w), _fmt(q), "") for w, q in zip(omegas, values)]
    return SweepTable(
        comments=_config_comments(cfg, version, label),
        header=("omega", "Q", "error"),
        rows=rows,
        trailing_comments=[],
    )


def _rate_chunk_worker(
    taus: list, model: RateModel, sd: OhmicSpectralDensity, temperature: Temperature,
    quad, cutoff_multiple: float
) -> RateCurve:
    return rate_curve(
        model, sd, temperature, taus, quad, cutoff_multiple=cutoff_multiple
    )


def _rate_sweep_curve(cfg: ScenarioConfig, threads: int) -> RateCurve:
    if cfg.tau_grid is None:
        raise ValueError("rate sweep requires [grid.tau]")
    model = build_model(cfg)
    taus = grid_values(cfg.tau_grid)
    quad = cfg.numerics.quadrature()
    chunks = [list(taus[i : i + _RATE_CHUNK]) for i in range(0, len(taus), _RATE_CHUNK)]
    worker = partial(
        _rate_chunk_worker,
        model=model,
        sd=cfg.spectral_density,
        temperature=cfg.temperature,
        quad=quad,
        cutoff_multiple=cfg.numerics.cutoff_multiple,
    )
    pieces = _pmap(worker, chunks, threads)
    gamma = [g for piece in pieces for g in piece.gamma]
    errors = [e for piece in pieces for e in piece.point_errors]
    return RateCurve(
        tau_grid=tuple(taus),
        gamma=tuple(gamma),
        model_label=pieces[0].model_label,
        metadata=pieces[0].metadata,
        point_errors=tuple(errors),
    )


def run_rate_sweep(
    cfg: ScenarioConfig,
    threads: int = 1,
    *,
    version: str = "0",
    label: Optional[str] = None,
) -> SweepTable:
    """Decay rate over the scenario's tau grid, with regime labels."""
    curve = _rate_sweep_curve(cfg, threads)
    segmentation = classify_regimes(curve)

    labels = _point_labels(curve, segmentation)
    rows = [
        (_fmt(t), _fmt(g), lab, err or "")
        for t, g, lab, err in zip(curve.tau_grid, curve.gamma, labels, curve.point_errors)
    ]
    trailing = [
        "crossovers: " + (", ".join(_fmt(x) for x in segmentation.crossovers) or "none")
    ]
    return SweepTable(
        comments=_config_comments(cfg, version, label),
        header=("tau", "gamma", "regime_label", "error"),
        rows=rows,
        trailing_comments=trailing,
        failed_points=sum(1 for e in curve.point_errors if e),
    )


def run_regime_sweep(
    cfg: ScenarioConfig,
    threads: int = 1,
    *,
    version: str = "0",
    label: Optional[str] = None,
) -> SweepTable:
    """Regime segmentation of the scenario's rate curve."""
    curve = _rate_sweep_curve(cfg, threads)
    segmentation = classify_regimes(curve)
    rows = [
        (_fmt(lo), _fmt(hi), lab)
        for (lo, hi), lab in segmentation.segments
    ]
    trailing = [
        "crossovers: " + (", ".join(_fmt(x) for x in segmentation.crossovers) or "none")
    ]
    return SweepTable(
        comments=_config_comments(cfg, version, label),
        header=("tau_start", "tau_end", "regime_label"),
        rows=rows,
        trailing_comments=trailing,
        failed_points=sum(1 for e in curve.point_errors if e),
    )


def _point_labels(curve: RateCurve, segmentation) -> list[str]:
    labels = []
    for tau in curve.tau_grid:
        chosen = segmentation.segments[-1][1]
        for (lo, hi), lab in segmentation.segments:
            if tau <= hi or math.isclose(tau, hi):
                chosen = lab
                break
        labels.append(chosen)
    return labels


def merge_variant_tables(tables: list[tuple[str, SweepTable]]) -> SweepTable:
    """Stack several variants into one long-format table."""
    if len(tables) == 1:
        return tables[0][1]
    first = tables[0][1]
    comments = list(first.comments[:1])
    rows = []
    trailing = []
    failed = 0
    for variant, table in tables:
        comments.append(f"variant {variant}:")
        comments.extend(f"  {line}" for line in table.comments[1:])
        rows.extend((variant,) + row for row in table.rows)
        trailing.extend(f"{variant}: {line}" for line in table.trailing_comments)
        failed += table.failed_points
    return SweepTable(
        comments=comments,
        header=("variant",) + first.header,
        rows=rows,
        trailing_comments=trailing,
        failed_points=failed,
    )


def render_csv(table: SweepTable) -> str:
    """UTF-8 CSV text: '#' comments, header row, data rows, '\\n' endings."""
    lines = [f"# {c}" if c else "#" for c in table.comments]
    lines.append(",".join(table.header))
    lines.extend(",".join(str(cell) for cell in row) for row in table.rows)
    lines.extend(f"# {c}" for c in table.trailing_comments)
    return "\n".join(lines) + "\n"
