"""Scenario configuration: INI-style text files describing one sweep.

A scenario file has flat sections ``[model]``, ``[drive.<role>]``,
``[spectral_density]``, ``[temperature]``, ``[grid.omega]``, ``[grid.tau]``,
``[numerics]`` and ``[output]``.  Drive profiles are lists of
``kind key=value ...`` records separated by semicolons, e.g.::

    [drive.alpha]
    terms = linear rate=1; sinusoid amplitude=5 frequency=1

Parsing and serialization round-trip exactly: ``parse(serialize(cfg))``
compares equal to ``cfg``.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from ..environment import FiniteTemperature, OhmicSpectralDensity, Temperature, ZeroTemperature
from ..numerics import QuadratureConfig
from ..profiles import AngleProfile, Constant, Cosine, Linear, SaturatingExp, Sinusoid

__all__ = [
    "ConfigError",
    "GridSpec",
    "NumericsOptions",
    "ScenarioConfig",
    "parse_config",
    "serialize_config",
    "format_profile",
    "parse_profile",
]

MODEL_KINDS = (
    "population_decay_rwa",
    "population_decay_full",
    "dephasing",
    "large_spin",
    "polaron",
)

DRIVE_ROLES = {
    "population_decay_rwa": ("alpha", "beta", "gamma"),
    "population_decay_full": ("alpha", "beta", "gamma"),
    "large_spin": ("alpha", "beta", "gamma"),
    "dephasing": ("alpha_tilde", "beta", "gamma_tilde"),
    "polaron": ("epsilon",),
}

_TERM_KINDS = {
    "constant": (Constant, ("value",)),
    "linear": (Linear, ("rate",)),
    "sinusoid": (Sinusoid, ("amplitude", "frequency")),
    "cosine": (Cosine, ("amplitude", "frequency")),
    "saturating_exp": (SaturatingExp, ("amplitude", "damping")),
}
_TERM_NAMES = {cls: (kind, fields) for kind, (cls, fields) in _TERM_KINDS.items()}


class ConfigError(ValueError):
    """Scenario file could not be parsed or validated."""


@dataclass(frozen=True)
class GridSpec:
    """Evenly or logarithmically spaced grid of count points on [min, max]."""

    min: float
    max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("grid bounds must be finite")
        if not self.min < self.max:
            raise ConfigError("grid requires min < max")
        if self.count < 2:
            raise ConfigError("grid requires count >= 2")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"unknown grid spacing {self.spacing!r}")
        if self.spacing == "log" and self.min <= 0.0:
            raise ConfigError("log spacing requires min > 0")


@dataclass(frozen=True)
class NumericsOptions:
    """Tolerances and truncation overrides for a scenario."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 4096
    cutoff_multiple: float = 40.0
    series_order: Optional[int] = None

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
            max_subdivisions=self.max_subdivisions,
        )


@dataclass(frozen=True)
class ScenarioConfig:
    """One sweep scenario: model, drives, environment, grids and numerics."""

    model_kind: str
    drives: tuple[tuple[str, AngleProfile], ...] = ()
    spectral_density: OhmicSpectralDensity = OhmicSpectralDensity(0.01, 10.0)
    temperature: Temperature = ZeroTemperature()
    n_spins: int = 1
    delta: float = 0.0
    omega_grid: Optional[GridSpec] = None
    filter_tau: Optional[float] = None
    tau_grid: Optional[GridSpec] = None
    numerics: NumericsOptions = NumericsOptions()
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.model_kind!r}")
        object.__setattr__(
            self, "drives", tuple(sorted(self.drives, key=lambda item: item[0]))
        )
        roles = DRIVE_ROLES[self.model_kind]
        seen = [name for name, _ in self.drives]
        for name in seen:
            if name not in roles:
                raise ConfigError(
                    f"drive role {name!r} not valid for model {self.model_kind}"
                )
        if len(set(seen)) != len(seen):
            raise ConfigError("duplicate drive role")
        if self.model_kind == "large_spin" and self.n_spins < 1:
            raise ConfigError("large_spin requires n_spins >= 1")
        if self.omega_grid is not None and self.filter_tau is None:
            raise ConfigError("[grid.omega] requires a fixed tau")
        if self.filter_tau is not None and self.filter_tau <= 0.0:
            raise ConfigError("filter tau must be positive")

    def drive(self, role: str) -> AngleProfile:
        for name, profile in self.drives:
            if name == role:
                return profile
        return AngleProfile.zero()

    def with_numerics(self, numerics: NumericsOptions) -> "ScenarioConfig":
        return replace(self, numerics=numerics)


def parse_profile(text: str, *, where: str = "profile") -> AngleProfile:
    """Parse a semicolon-separated list of ``kind key=value ...`` records."""
    terms = []
    for raw in text.split(";"):
        record = raw.strip()
        if not record:
            continue
        tokens = record.split()
        kind = tokens[0].lower()
        if kind not in _TERM_KINDS:
            raise ConfigError(f"{where}: unknown term kind {kind!r}")
        cls, names = _TERM_KINDS[kind]
        params = {}
        for tok in tokens[1:]:
            if "=" not in tok:
                raise ConfigError(f"{where}: expected key=value, got {tok!r}")
            key, _, value = tok.partition("=")
            if key not in names:
                raise ConfigError(f"{where}: term {kind!r} has no parameter {key!r}")
            try:
                params[key] = float(value)
            except ValueError as exc:
                raise ConfigError(f"{where}: bad number {value!r} for {key}") from exc
        missing = [n for n in names if n not in params]
        if missing:
            raise ConfigError(f"{where}: term {kind!r} missing {', '.join(missing)}")
        terms.append(cls(**params))
    return AngleProfile(tuple(terms))


def format_profile(profile: AngleProfile) -> str:
    parts = []
    for term in profile.terms:
        kind, names = _TERM_NAMES[type(term)]
        fields = " ".join(f"{n}={getattr(term, n)!r}" for n in names)
        parts.append(f"{kind} {fields}")
    return "; ".join(parts)


_REQUIRED = object()


def _get(section, key, where, convert=float, default=_REQUIRED):
    if key not in section:
        if default is _REQUIRED:
            raise ConfigError(f"[{where}] is missing required key {key!r}")
        return default
    raw = section[key].strip()
    try:
        return convert(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{where}] {key}: bad value {raw!r}") from exc


def _parse_grid(section, where: str) -> GridSpec:
    return GridSpec(
        min=_get(section, "min", where),
        max=_get(section, "max", where),
        count=_get(section, "count", where, convert=int),
        spacing=_get(section, "spacing", where, convert=str, default="linear"),
    )


def parse_config(text: str) -> ScenarioConfig:
    """Parse scenario text; raises ConfigError with section/key diagnostics."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    if "model" not in parser:
        raise ConfigError("missing [model] section")
    model_kind = _get(parser["model"], "kind", "model", convert=str)
    if model_kind not in MODEL_KINDS:
        raise ConfigError(
            f"[model] kind must be one of {', '.join(MODEL_KINDS)}; got {model_kind!r}"
        )
    n_spins = _get(parser["model"], "n_spins", "model", convert=int, default=1)
    delta = _get(parser["model"], "delta", "model", default=0.0)

    drives = []
    for section_name in parser.sections():
        if not section_name.startswith("drive."):
            continue
        role = section_name[len("drive."):]
        profile = parse_profile(
            parser[section_name].get("terms", ""), where=section_name
        )
        drives.append((role, profile))
    drives.sort(key=lambda item: item[0])

    sd = OhmicSpectralDensity(0.01, 10.0)
    if "spectral_density" in parser:
        section = parser["spectral_density"]
        family = _get(section, "family", "spectral_density", convert=str, default="ohmic")
        try:
            sd = OhmicSpectralDensity(
                G=_get(section, "G", "spectral_density"),
                omega_c=_get(section, "omega_c", "spectral_density"),
                family=family,
            )
        except ValueError as exc:
            raise ConfigError(f"[spectral_density] {exc}") from exc

    temperature: Temperature = ZeroTemperature()
    if "temperature" in parser:
        section = parser["temperature"]
        kind = _get(section, "kind", "temperature", convert=str, default="zero")
        if kind == "zero":
            temperature = ZeroTemperature()
        elif kind == "finite":
            try:
                temperature = FiniteTemperature(_get(section, "beta", "temperature"))
            except ValueError as exc:
                raise ConfigError(f"[temperature] {exc}") from exc
        else:
            raise ConfigError(f"[temperature] kind must be zero or finite, got {kind!r}")

    omega_grid = None
    filter_tau = None
    if "grid.omega" in parser:
        omega_grid = _parse_grid(parser["grid.omega"], "grid.omega")
        filter_tau = _get(parser["grid.omega"], "tau", "grid.omega")

    tau_grid = None
    if "grid.tau" in parser:
        tau_grid = _parse_grid(parser["grid.tau"], "grid.tau")

    numerics = NumericsOptions()
    if "numerics" in parser:
        section = parser["numerics"]
        series_raw = section.get("series_order", "").strip()
        try:
            numerics = NumericsOptions(
                abs_tol=_get(section, "abs_tol", "numerics", default=1e-10),
                rel_tol=_get(section, "rel_tol", "numerics", default=1e-8),
                max_subdivisions=_get(
                    section, "max_subdivisions", "numerics", convert=int, default=4096
                ),
                cutoff_multiple=_get(section, "cutoff_multiple", "numerics", default=40.0),
                series_order=int(series_raw) if series_raw else None,
            )
        except ValueError as exc:
            raise ConfigError(f"[numerics] {exc}") from exc

    output_path = None
    if "output" in parser:
        output_path = parser["output"].get("path", "").strip() or None

    try:
        return ScenarioConfig(
            model_kind=model_kind,
            drives=tuple(drives),
            spectral_density=sd,
            temperature=temperature,
            n_spins=n_spins,
            delta=delta,
            omega_grid=omega_grid,
            filter_tau=filter_tau,
            tau_grid=tau_grid,
            numerics=numerics,
            output_path=output_path,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(cfg: ScenarioConfig) -> str:
    """Render a scenario back to text that parses to an equal config."""
    out = io.StringIO()

    def emit(section: str, pairs):
        out.write(f"[{section}]\n")
        for key, value in pairs:
            out.write(f"{key} = {value}\n")
        out.write("\n")

    model_pairs = [("kind", cfg.model_kind)]
    if cfg.model_kind == "large_spin":
        model_pairs.append(("n_spins", cfg.n_spins))
    if cfg.model_kind == "polaron":
        model_pairs.append(("delta", repr(cfg.delta)))
    emit("model", model_pairs)

    for role, profile in cfg.drives:
        emit(f"drive.{role}", [("terms", format_profile(profile))])

    emit(
        "spectral_density",
        [
            ("family", cfg.spectral_density.family),
            ("G", repr(cfg.spectral_density.G)),
            ("omega_c", repr(cfg.spectral_density.omega_c)),
        ],
    )

    if isinstance(cfg.temperature, ZeroTemperature):
        emit("temperature", [("kind", "zero")])
    else:
        emit(
            "temperature",
            [("kind", "finite"), ("beta", repr(cfg.temperature.beta_th))],
        )

    if cfg.omega_grid is not None:
        grid = cfg.omega_grid
        emit(
            "grid.omega",
            [
                ("min", repr(grid.min)),
                ("max", repr(grid.max)),
                ("count", grid.count),
                ("spacing", grid.spacing),
                ("tau", repr(cfg.filter_tau)),
            ],
        )
    if cfg.tau_grid is not None:
        grid = cfg.tau_grid
        emit(
            "grid.tau",
            [
                ("min", repr(grid.min)),
                ("max", repr(grid.max)),
                ("count", grid.count),
                ("spacing", grid.spacing),
            ],
        )

    numerics_pairs = [
        ("abs_tol", repr(cfg.numerics.abs_tol)),
        ("rel_tol", repr(cfg.numerics.rel_tol)),
        ("max_subdivisions", cfg.numerics.max_subdivisions),
        ("cutoff_multiple", repr(cfg.numerics.cutoff_multiple)),
    ]
    if cfg.numerics.series_order is not None:
        numerics_pairs.append(("series_order", cfg.numerics.series_order))
    emit("numerics", numerics_pairs)

    if cfg.output_path:
        emit("output", [("path", cfg.output_path)])

    return out.getvalue()
