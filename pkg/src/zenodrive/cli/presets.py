"""Named figure presets: fully specified scenarios for the bundled curves.

Every preset is a panel with named curve variants (keyed by the line style
of the corresponding plot).  All presets use dimensionless units with the
bare level splitting set to one, coupling strengths and cutoffs as recorded
per preset, and the default sweep grids: 201 linear frequency points on
[0, 10] for filter panels, 120 logarithmic interval points on [0.05, 3]
(weak coupling) or [0.05, 5] (strong coupling) for rate panels.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..profiles import AngleProfile, Constant, Cosine, Linear, SaturatingExp, Sinusoid
from ..environment import OhmicSpectralDensity
from .config import GridSpec, ScenarioConfig, serialize_config

__all__ = ["Preset", "PRESETS", "preset_variant", "list_presets"]

_OMEGA_GRID = GridSpec(min=0.0, max=10.0, count=201, spacing="linear")
_TAU_GRID_WEAK = GridSpec(min=0.05, max=3.0, count=120, spacing="log")
_TAU_GRID_POLARON = GridSpec(min=0.05, max=5.0, count=120, spacing="log")

_EPS0 = 1.0


def _alpha_linear() -> AngleProfile:
    return AngleProfile((Linear(_EPS0),))


def _alpha_sinusoid(v0: float, freq: float) -> AngleProfile:
    return AngleProfile((Linear(_EPS0), Sinusoid(v0, freq)))


# Sinusoidally phase-modulated drives (and the undriven reference).
_SINUSOID_VARIANTS = (
    ("solid-black", (("alpha", _alpha_linear()),)),
    ("dashed-red", (("alpha", _alpha_sinusoid(1.0, 5.0)),)),
    ("long-dashed-magenta", (("alpha", _alpha_sinusoid(5.0, 1.0)),)),
    ("dot-dashed-green", (("alpha", _alpha_sinusoid(5.0, 5.0)),)),
)

# Tipping drives: a polar angle that saturates or grows linearly.
_BETA_VARIANTS = (
    ("solid-black", (("alpha", _alpha_linear()),)),
    (
        "dashed-blue",
        (
            ("alpha", _alpha_linear()),
            ("beta", AngleProfile((SaturatingExp(1.0, 0.2),))),
        ),
    ),
    (
        "dot-dashed-orange",
        (("alpha", _alpha_linear()), ("beta", AngleProfile((Linear(5.0),)))),
    ),
)

# Combined polar and axial rotations beta = upsilon*t, gamma = xi*t.
_GAMMA_VARIANTS = (
    ("solid-black", (("alpha", _alpha_linear()),)),
    (
        "dashed-red",
        (
            ("alpha", _alpha_linear()),
            ("beta", AngleProfile((Linear(5.0),))),
            ("gamma", AngleProfile((Linear(1.0),))),
        ),
    ),
    (
        "long-dashed-magenta",
        (
            ("alpha", _alpha_linear()),
            ("beta", AngleProfile((Linear(1.0),))),
            ("gamma", AngleProfile((Linear(5.0),))),
        ),
    ),
    (
        "dot-dashed-green",
        (
            ("alpha", _alpha_linear()),
            ("beta", AngleProfile((Linear(5.0),))),
            ("gamma", AngleProfile((Linear(5.0),))),
        ),
    ),
)

# Dephasing-frame control angles alpha_tilde; beta stays the bare splitting.
_DEPHASING_VARIANTS = (
    ("solid-black", (("beta", _alpha_linear()),)),
    (
        "dashed-red",
        (
            ("alpha_tilde", AngleProfile((Sinusoid(1.0, 5.0),))),
            ("beta", _alpha_linear()),
        ),
    ),
    (
        "long-dashed-magenta",
        (
            ("alpha_tilde", AngleProfile((Sinusoid(5.0, 1.0),))),
            ("beta", _alpha_linear()),
        ),
    ),
    (
        "dot-dashed-green",
        (
            ("alpha_tilde", AngleProfile((Sinusoid(5.0, 5.0),))),
            ("beta", _alpha_linear()),
        ),
    ),
)

# Modulated detunings epsilon(t) for the strong-coupling model.
_POLARON_VARIANTS = (
    ("solid-black", (("epsilon", AngleProfile((Constant(_EPS0),))),)),
    (
        "dashed-red",
        (("epsilon", AngleProfile((Constant(_EPS0), Cosine(1.0, 5.0)))),),
    ),
    (
        "long-dashed-magenta",
        (("epsilon", AngleProfile((Constant(_EPS0), Cosine(5.0, 1.0)))),),
    ),
    (
        "dot-dashed-green",
        (("epsilon", AngleProfile((Constant(_EPS0), Cosine(5.0, 5.0)))),),
    ),
)


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    variants: tuple[tuple[str, ScenarioConfig], ...]

    def variant(self, name: str) -> ScenarioConfig:
        for key, cfg in self.variants:
            if key == name:
                return cfg
        known = ", ".join(key for key, _ in self.variants)
        raise KeyError(f"preset {self.name!r} has no variant {name!r}; known: {known}")

    @property
    def variant_names(self) -> tuple[str, ...]:
        return tuple(key for key, _ in self.variants)


def _filter_preset(name, description, model_kind, variants, tau, sd):
    entries = []
    for key, drives in variants:
        entries.append(
            (
                key,
                ScenarioConfig(
                    model_kind=model_kind,
                    drives=drives,
                    spectral_density=sd,
                    omega_grid=_OMEGA_GRID,
                    filter_tau=tau,
                ),
            )
        )
    return Preset(name=name, description=description, variants=tuple(entries))


def _rate_preset(name, description, model_kind, variants, sd, *, delta=0.0):
    grid = _TAU_GRID_POLARON if model_kind == "polaron" else _TAU_GRID_WEAK
    entries = []
    for key, drives in variants:
        entries.append(
            (
                key,
                ScenarioConfig(
                    model_kind=model_kind,
                    drives=drives,
                    spectral_density=sd,
                    delta=delta,
                    tau_grid=grid,
                ),
            )
        )
    return Preset(name=name, description=description, variants=tuple(entries))


_SD_001 = OhmicSpectralDensity(0.01, 10.0)
_SD_005 = OhmicSpectralDensity(0.05, 10.0)
_SD_1 = OhmicSpectralDensity(1.0, 10.0)
_SD_2 = OhmicSpectralDensity(2.0, 10.0)


def _build_presets() -> dict[str, Preset]:
    presets = [
        _filter_preset(
            "fig1a",
            "RWA population-decay filter vs frequency; sinusoidal phase drives, tau=0.1",
            "population_decay_rwa",
            _SINUSOID_VARIANTS,
            0.1,
            _SD_001,
        ),
        _filter_preset(
            "fig1b",
            "RWA population-decay filter vs frequency; sinusoidal phase drives, tau=1",
            "population_decay_rwa",
            _SINUSOID_VARIANTS,
            1.0,
            _SD_001,
        ),
        _filter_preset(
            "fig2a",
            "RWA population-decay filter; saturating and linear tipping drives, tau=1",
            "population_decay_rwa",
            _BETA_VARIANTS,
            1.0,
            _SD_005,
        ),
        _filter_preset(
            "fig2b",
            "RWA population-decay filter; combined tipping and axial drives, tau=1",
            "population_decay_rwa",
            _GAMMA_VARIANTS,
            1.0,
            _SD_005,
        ),
        _rate_preset(
            "fig3a",
            "RWA decay rate vs measurement interval; sinusoidal phase drives, G=0.01",
            "population_decay_rwa",
            _SINUSOID_VARIANTS,
            _SD_001,
        ),
        _rate_preset(
            "fig3b",
            "RWA decay rate vs measurement interval; tipping drives, G=0.05",
            "population_decay_rwa",
            _BETA_VARIANTS,
            _SD_005,
        ),
        _filter_preset(
            "fig4a",
            "Non-RWA population-decay filter; tipping drives, tau=1",
            "population_decay_full",
            _BETA_VARIANTS,
            1.0,
            _SD_001,
        ),
        _rate_preset(
            "fig4b",
            "Non-RWA decay rate vs measurement interval; tipping drives, G=0.01",
            "population_decay_full",
            _BETA_VARIANTS,
            _SD_001,
        ),
        _filter_preset(
            "fig5a",
            "Dephasing filter vs frequency; sinusoidal frame drives, tau=1",
            "dephasing",
            _DEPHASING_VARIANTS,
            1.0,
            _SD_001,
        ),
        _rate_preset(
            "fig5b",
            "Dephasing decay rate vs measurement interval; sinusoidal frame drives, G=0.01",
            "dephasing",
            _DEPHASING_VARIANTS,
            _SD_001,
        ),
        _rate_preset(
            "polaron-fig-a",
            "Strong-coupling decay rate; modulated detunings, delta=0.05, G=1",
            "polaron",
            _POLARON_VARIANTS,
            _SD_1,
            delta=0.05,
        ),
        _rate_preset(
            "polaron-fig-b",
            "Strong-coupling decay rate; modulated detunings, delta=0.05, G=2",
            "polaron",
            _POLARON_VARIANTS,
            _SD_2,
            delta=0.05,
        ),
    ]
    return {p.name: p for p in presets}


PRESETS: dict[str, Preset] = _build_presets()


def preset_variant(preset_name: str, variant: str | None = None) -> ScenarioConfig:
    """Resolve a preset variant; ``variant=None`` selects the first one."""
    try:
        preset = PRESETS[preset_name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {preset_name!r}; known: {known}") from None
    if variant is None:
        return preset.variants[0][1]
    return preset.variant(variant)


def list_presets(version: str) -> str:
    """Stable, versioned listing of all presets with full parameter sets."""
    lines = [f"zenodrive {version} figure presets", ""]
    for name in sorted(PRESETS):
        preset = PRESETS[name]
        lines.append(f"{name}: {preset.description}")
        for variant, cfg in preset.variants:
            lines.append(f"  variant {variant}:")
            for row in serialize_config(cfg).strip().splitlines():
                lines.append(f"    {row}")
        lines.append("")
    return "\n".join(lines)
