"""Bosonic environment: spectral density and analytic decoherence kernels.

Only the Ohmic family J(w) = G * w * exp(-w/w_c) is implemented; the type
carries a family tag so other families can be added without changing the
interface.  The zero-temperature correlation phase is exp(-i*w*t).  The
displaced-frame decoherence exponents are

    Phi_I(t) = integral dw J(w) sin(w t) / w^2
    Phi_R(t) = integral dw J(w) (1 - cos(w t)) / w^2 * coth(beta*w/2)

with zero-temperature closed forms G*atan(w_c t) and (G/2)*ln(1 + w_c^2 t^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .numerics import (
    DEFAULT_QUADRATURE,
    GK_NODES,
    GK_WEIGHTS,
    GAUSS_WEIGHTS,
    QuadratureConfig,
    QuadratureConvergenceError,
)

__all__ = [
    "OhmicSpectralDensity",
    "ZeroTemperature",
    "FiniteTemperature",
    "Temperature",
    "correlation_phase",
    "phi_imag",
    "phi_real",
    "polaron_correlation",
]

OMEGA_CUTOFF_MULTIPLE = 40.0


@dataclass(frozen=True)
class OhmicSpectralDensity:
    """J(w) = G * w * exp(-w / omega_c) for w >= 0."""

    G: float
    omega_c: float
    family: str = "ohmic"

    def __post_init__(self):
        if not (self.G >= 0.0 and math.isfinite(self.G)):
            raise ValueError("coupling G must be nonnegative and finite")
        if not (self.omega_c > 0.0 and math.isfinite(self.omega_c)):
            raise ValueError("cutoff omega_c must be positive and finite")
        if self.family != "ohmic":
            raise ValueError(f"unsupported spectral-density family {self.family!r}")

    def value(self, omega):
        """Spectral weight at frequency omega >= 0."""
        w = np.asarray(omega, dtype=float)
        if np.any(w < 0.0):
            raise ValueError("spectral density is defined for omega >= 0")
        out = self.G * w * np.exp(-w / self.omega_c)
        return out if out.ndim else float(out)

    def total_weight(self) -> float:
        """integral of J over [0, inf); equals G * omega_c**2."""
        return self.G * self.omega_c**2

    def tail_weight(self, omega_max: float) -> float:
        """integral of J over [omega_max, inf), exact for the Ohmic form."""
        wc = self.omega_c
        return self.G * wc * (omega_max + wc) * math.exp(-omega_max / wc)


@dataclass(frozen=True)
class ZeroTemperature:
    pass


@dataclass(frozen=True)
class FiniteTemperature:
    """Thermal environment with inverse temperature beta_th (units of time)."""

    beta_th: float

    def __post_init__(self):
        if not (self.beta_th > 0.0 and math.isfinite(self.beta_th)):
            raise ValueError("beta_th must be positive and finite")


Temperature = Union[ZeroTemperature, FiniteTemperature]


def correlation_phase(omega, t):
    """Zero-temperature correlation phase exp(-i*omega*t); unit modulus."""
    phase = np.exp(-1j * np.asarray(omega, dtype=float) * np.asarray(t, dtype=float))
    return phase if phase.ndim else complex(phase)


def phi_imag(sd: OhmicSpectralDensity, t):
    """Imaginary decoherence exponent, G * atan(omega_c * t) for t >= 0."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ValueError("t must be nonnegative")
    out = sd.G * np.arctan(sd.omega_c * t_arr)
    return out if out.ndim else float(out)


def phi_real(
    sd: OhmicSpectralDensity,
    t,
    temperature: Temperature = ZeroTemperature(),
    cfg: QuadratureConfig | None = None,
):
    """Real decoherence exponent; closed form at T = 0, quadrature otherwise.

    Accepts a scalar or an array of times.  The finite-temperature integrand
    has a removable 0/0 at w = 0; below w < 1e-3/beta_th it is replaced by
    its Taylor limit G * t**2 * exp(-w/omega_c) / beta_th.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0.0):
        raise ValueError("t must be nonnegative")
    if isinstance(temperature, ZeroTemperature):
        out = 0.5 * sd.G * np.log1p((sd.omega_c * t_arr) ** 2)
    elif isinstance(temperature, FiniteTemperature):
        flat = _phi_real_thermal(sd, t_arr.ravel(), temperature.beta_th, cfg)
        out = flat.reshape(t_arr.shape)
    else:
        raise TypeError(f"unsupported temperature {temperature!r}")
    return out if np.ndim(t) else float(out[0])


def _phi_real_thermal(
    sd: OhmicSpectralDensity, times: np.ndarray, beta_th: float, cfg: QuadratureConfig
) -> np.ndarray:
    # Shared composite Kronrod rule in w for all requested times, seeded by
    # the fastest oscillation max(t)*w and doubled until the embedded error
    # estimate meets the tolerance.
    w_max = OMEGA_CUTOFF_MULTIPLE * sd.omega_c
    t_max = float(times.max(initial=0.0))
    w_small = 1e-3 / beta_th

    def integrand(w: np.ndarray) -> np.ndarray:
        # rows: times, cols: frequencies
        w_row = w[None, :]
        t_col = times[:, None]
        smooth = sd.G * np.exp(-w_row / sd.omega_c)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            full = (
                smooth
                * (1.0 - np.cos(w_row * t_col))
                / w_row
                / np.tanh(0.5 * beta_th * w_row)
            )
        taylor = smooth * t_col**2 / beta_th
        return np.where(w_row < w_small, taylor, full)

    # Seed for the cosine oscillation; the doubling loop below also resolves
    # the thermal knee of coth at w ~ 1/beta_th.
    n_panels = max(4, int(math.ceil(w_max * max(t_max, 1.0 / sd.omega_c) / math.pi)))
    n_panels = min(n_panels, 1 << 15)
    for _ in range(14):
        edges = np.linspace(0.0, w_max, n_panels + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * w_max / n_panels
        nodes = (centers[:, None] + half * GK_NODES[None, :]).ravel()
        vals = integrand(nodes)
        wk = np.tile(half * GK_WEIGHTS, n_panels)
        wd = np.tile(half * (GK_WEIGHTS - GAUSS_WEIGHTS), n_panels)
        result = vals @ wk
        err = float(np.max(np.abs(vals @ wd), initial=0.0))
        tol = max(cfg.abs_tol, cfg.rel_tol * float(np.max(result, initial=0.0)))
        if err <= tol:
            return result
        if n_panels >= (1 << 15):
            break
        n_panels = min(2 * n_panels, 1 << 15)
    raise QuadratureConvergenceError(
        "thermal decoherence exponent did not converge",
        estimate=float(result[0]),
        error_bound=err,
    )


def polaron_correlation(
    sd: OhmicSpectralDensity,
    t,
    temperature: Temperature = ZeroTemperature(),
    cfg: QuadratureConfig | None = None,
):
    """Displaced-frame bath correlation exp(-Phi_R(t)) * exp(-i*Phi_I(t))."""
    out = np.exp(-phi_real(sd, t, temperature, cfg) - 1j * phi_imag(sd, t))
    out = np.asarray(out)
    return out if out.ndim else complex(out)
