"""Effective decay rates, survival probabilities and regime classification.

The weak-coupling rate is the overlap integral of a model's filter function
with the spectral density, truncated at a configurable multiple of the
cutoff (the neglected tail is bounded analytically and checked against the
absolute tolerance).  The strong-coupling rate is the displaced-frame double
time integral weighted by the bath correlation exp(-Phi_R) exp(-i*Phi_I).

Both rates factor their overall prefactors (coupling G, spin count, the
squared tunneling amplitude) out of the quadrature, so linearity in G,
multiplicativity in the spin count and quadratic scaling in the tunneling
amplitude hold exactly, not merely to quadrature tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .environment import (
    FiniteTemperature,
    OhmicSpectralDensity,
    Temperature,
    ZeroTemperature,
    phi_imag,
    phi_real,
)
from .filters import (
    Dephasing,
    FilterModel,
    FilterSweep,
    LargeSpin,
    PopulationDecayFull,
    PopulationDecayRWA,
)
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    QuadratureConvergenceError,
    integrate_1d,
    integrate_triangle,
)
from .profiles import AngleProfile

__all__ = [
    "PolaronModel",
    "RateModel",
    "RateCurve",
    "RegimeSegmentation",
    "PerturbativeRateWarning",
    "ZENO",
    "ANTI_ZENO",
    "decay_rate_weak",
    "decay_rate_polaron",
    "survival",
    "rate_curve",
    "classify_regimes",
]

ZENO = "zeno"
ANTI_ZENO = "anti_zeno"


class PerturbativeRateWarning(UserWarning):
    """A computed rate or survival input fell outside the perturbative range."""


@dataclass(frozen=True)
class PolaronModel:
    """Strong-coupling model: tunneling amplitude and detuning profile.

    ``epsilon`` is the time-dependent level splitting; its running integral
    (the accumulated phase) enters the rate kernel.
    """

    delta: float
    epsilon: AngleProfile

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")


RateModel = Union[PopulationDecayRWA, PopulationDecayFull, Dephasing, LargeSpin, PolaronModel]


def decay_rate_weak(
    model: FilterModel,
    sd: OhmicSpectralDensity,
    tau: float,
    cfg: QuadratureConfig | None = None,
    *,
    cutoff_multiple: float = 40.0,
) -> float:
    """Overlap integral of the model's filter with the spectral density.

    The frequency integral runs over [0, cutoff_multiple * omega_c]; the
    neglected tail is bounded by tau * integral of J over the tail and must
    fall below the absolute tolerance.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    tau = float(tau)
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    if sd.G == 0.0:
        return 0.0

    scale = sd.G
    inner_model = model
    if isinstance(model, LargeSpin):
        scale *= model.n_spins
        inner_model = PopulationDecayFull(model.drive)

    omega_max = float(cutoff_multiple) * sd.omega_c
    # |Q| <= tau since the amplitude has unit modulus bound.
    tail_bound = tau * sd.tail_weight(omega_max) / sd.G * scale
    if tail_bound > cfg.abs_tol:
        raise ValueError(
            f"tail bound {tail_bound:.3g} beyond omega = {omega_max:g} exceeds "
            f"abs_tol; increase cutoff_multiple"
        )

    sweep = FilterSweep(inner_model, tau, cfg)
    inv_wc = 1.0 / sd.omega_c

    def integrand(omegas: np.ndarray) -> np.ndarray:
        return sweep.values(omegas) * omegas * np.exp(-omegas * inv_wc)

    value = integrate_1d(integrand, 0.0, omega_max, cfg, freq_hint=tau)
    return scale * value


def survival(gamma: float, tau: float, measurements: int = 1) -> float:
    """Survival probability after ``measurements`` projective checks.

    Per-measurement probability exp(-gamma*tau), compounded independently:
    exp(-gamma * measurements * tau).  A negative rate (possible when the
    perturbative expansion breaks down) is flagged with a warning but the
    value is still returned.
    """
    gamma = float(gamma)
    tau = float(tau)
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    if int(measurements) != measurements or measurements < 1:
        raise ValueError("measurements must be a positive integer")
    if gamma < 0.0:
        warnings.warn(
            f"negative decay rate {gamma:g}; survival exceeds 1",
            PerturbativeRateWarning,
            stacklevel=2,
        )
    return math.exp(-gamma * tau * int(measurements))


def decay_rate_polaron(
    delta: float,
    epsilon: AngleProfile,
    sd: OhmicSpectralDensity,
    temperature: Temperature = ZeroTemperature(),
    tau: float = 1.0,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Strong-coupling decay rate in the displaced frame.

    (delta^2 / 2 tau) * double integral over the triangle of
    exp(-Phi_R(t')) * cos[zeta(t) - zeta(t - t') - Phi_I(t')], where zeta is
    the running integral of the detuning profile.  Quadratic in delta by
    construction; valid while delta stays small against the detuning scale.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    tau = float(tau)
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    delta = float(delta)
    if delta == 0.0:
        return 0.0

    def integrand(t, tp):
        dzeta = epsilon.integral_increment(t, tp)
        return np.exp(-phi_real(sd, tp, temperature, cfg)) * np.cos(
            dzeta - phi_imag(sd, tp)
        )

    eps_scale = epsilon.value_bound(tau) + epsilon.rate_bound()
    phase_rate = sd.G * sd.omega_c
    if isinstance(temperature, FiniteTemperature):
        phase_rate += 2.0 * sd.G / temperature.beta_th
    value = integrate_triangle(
        integrand,
        tau,
        cfg,
        freq_t=eps_scale + 1.0,
        freq_tp=eps_scale + phase_rate + 1.0,
    )
    return 0.5 * delta * delta * value / tau


@dataclass(frozen=True)
class RateCurve:
    """Decay rates over a grid of measurement intervals, with metadata."""

    tau_grid: tuple[float, ...]
    gamma: tuple[float, ...]
    model_label: str
    metadata: dict = field(default_factory=dict)
    point_errors: tuple[Optional[str], ...] = ()

    def __post_init__(self):
        taus = tuple(float(t) for t in self.tau_grid)
        if len(taus) == 0:
            raise ValueError("tau grid must be nonempty")
        if any(t <= 0.0 for t in taus):
            raise ValueError("all tau values must be positive")
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ValueError("tau grid must be strictly ascending")
        gammas = tuple(float(g) for g in self.gamma)
        if len(gammas) != len(taus):
            raise ValueError("gamma and tau grids must have equal length")
        errors = tuple(self.point_errors) if self.point_errors else (None,) * len(taus)
        if len(errors) != len(taus):
            raise ValueError("point_errors must match the grid length")
        object.__setattr__(self, "tau_grid", taus)
        object.__setattr__(self, "gamma", gammas)
        object.__setattr__(self, "point_errors", errors)

    @property
    def partial(self) -> bool:
        return any(e is not None for e in self.point_errors)


def _model_label(model: RateModel) -> str:
    if isinstance(model, PolaronModel):
        return f"polaron(delta={model.delta:g})"
    return type(model).__name__


def rate_point(
    model: RateModel,
    sd: OhmicSpectralDensity,
    temperature: Temperature,
    tau: float,
    cfg: QuadratureConfig,
    cutoff_multiple: float = 40.0,
) -> float:
    """Single decay-rate evaluation, dispatching on the model kind."""
    if isinstance(model, PolaronModel):
        return decay_rate_polaron(model.delta, model.epsilon, sd, temperature, tau, cfg)
    return decay_rate_weak(model, sd, tau, cfg, cutoff_multiple=cutoff_multiple)


def rate_curve(
    model: RateModel,
    sd: OhmicSpectralDensity,
    temperature: Temperature,
    tau_grid,
    cfg: QuadratureConfig | None = None,
    *,
    cutoff_multiple: float = 40.0,
) -> RateCurve:
    """Decay rates over a tau grid; points are computed independently.

    Convergence failures are recorded per point (keeping the best estimate)
    and mark the curve as partial instead of aborting the sweep.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    taus = [float(t) for t in tau_grid]
    gammas: list[float] = []
    errors: list[Optional[str]] = []
    for tau in taus:
        try:
            gammas.append(rate_point(model, sd, temperature, tau, cfg, cutoff_multiple))
            errors.append(None)
        except QuadratureConvergenceError as exc:
            gammas.append(exc.estimate)
            errors.append(str(exc))
    metadata = {
        "abs_tol": cfg.abs_tol,
        "rel_tol": cfg.rel_tol,
        "max_subdivisions": cfg.max_subdivisions,
        "cutoff_multiple": cutoff_multiple,
    }
    return RateCurve(
        tau_grid=tuple(taus),
        gamma=tuple(gammas),
        model_label=_model_label(model),
        metadata=metadata,
        point_errors=tuple(errors),
    )


@dataclass(frozen=True)
class RegimeSegmentation:
    """Partition of a tau range into alternating rate-trend segments.

    ``segments`` are ((tau_lo, tau_hi), label) pairs tiling the grid range;
    ``crossovers`` are the grid points where the trend of the decay rate
    reverses (local extrema of the curve).
    """

    segments: tuple[tuple[tuple[float, float], str], ...]
    crossovers: tuple[float, ...]


def classify_regimes(curve: RateCurve, *, dead_band: float = 1e-6) -> RegimeSegmentation:
    """Label each inter-point interval by the trend of the decay rate.

    Rising rate -> measurement slow-down (``zeno``), falling rate ->
    measurement speed-up (``anti_zeno``).  Interval slopes whose magnitude
    falls below dead_band * max|gamma| / dtau are merged into the adjacent
    segment so finite-difference noise cannot mint spurious crossovers.
    """
    taus = np.asarray(curve.tau_grid)
    gammas = np.asarray(curve.gamma)
    if len(taus) < 3:
        raise ValueError("regime classification needs at least 3 grid points")

    dtau = np.diff(taus)
    slopes = np.diff(gammas) / dtau
    scale = float(np.max(np.abs(gammas)))
    signs = np.sign(slopes)
    signs[np.abs(slopes) < dead_band * scale / dtau] = 0.0

    # Merge flat intervals into the preceding trend (or the following one
    # at the leading edge).
    filled = signs.copy()
    for i in range(1, len(filled)):
        if filled[i] == 0.0:
            filled[i] = filled[i - 1]
    for i in range(len(filled) - 2, -1, -1):
        if filled[i] == 0.0:
            filled[i] = filled[i + 1]
    if np.all(filled == 0.0):
        # Entirely flat curve: call it a single slow-down segment.
        filled[:] = 1.0

    segments = []
    crossovers = []
    start = taus[0]
    current = filled[0]
    for i in range(1, len(filled)):
        if filled[i] != current:
            segments.append(((float(start), float(taus[i])), _trend_label(current)))
            crossovers.append(float(taus[i]))
            start = taus[i]
            current = filled[i]
    segments.append(((float(start), float(taus[-1])), _trend_label(current)))
    return RegimeSegmentation(segments=tuple(segments), crossovers=tuple(crossovers))


def _trend_label(sign: float) -> str:
    return ZENO if sign > 0.0 else ANTI_ZENO
