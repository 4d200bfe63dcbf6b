"""Closed-form time profiles for drive angles and detunings.

An :class:`AngleProfile` is a finite sum of primitive terms, each carrying
exact expressions for its value, derivative, antiderivative and increments.
Nothing here is ever differentiated or integrated numerically; increments
``p(t) - p(t - dt)`` are evaluated per-primitive in a form that avoids
catastrophic cancellation for small ``dt``.

The same profile type serves both angle-like quantities (value in radians,
zero at t = 0 apart from constants) and rate-like quantities such as a
time-dependent detuning, for which the cosine primitive is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "Constant",
    "Linear",
    "Sinusoid",
    "Cosine",
    "SaturatingExp",
    "ProfileTerm",
    "AngleProfile",
    "EulerDrive",
]

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


@dataclass(frozen=True)
class Constant:
    """Fixed offset: value = c."""

    value: float

    def __post_init__(self):
        _check_finite("value", self.value)

    def eval(self, t):
        return self.value * np.ones_like(np.asarray(t, dtype=float))

    def derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def increment(self, t, dt):
        return np.zeros(np.broadcast_shapes(np.shape(t), np.shape(dt)))

    def integral(self, t):
        return self.value * np.asarray(t, dtype=float)

    def integral_increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        return self.value * dt

    def rate_bound(self) -> float:
        return 0.0

    def value_bound(self, horizon: float) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class Linear:
    """Linear ramp: value = rate * t."""

    rate: float

    def __post_init__(self):
        _check_finite("rate", self.rate)

    def eval(self, t):
        return self.rate * np.asarray(t, dtype=float)

    def derivative(self, t):
        return self.rate * np.ones_like(np.asarray(t, dtype=float))

    def increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        return self.rate * dt

    def integral(self, t):
        t = np.asarray(t, dtype=float)
        return 0.5 * self.rate * t * t

    def integral_increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        return self.rate * dt * (t - 0.5 * dt)

    def rate_bound(self) -> float:
        return abs(self.rate)

    def value_bound(self, horizon: float) -> float:
        return abs(self.rate) * horizon


@dataclass(frozen=True)
class Sinusoid:
    """Integrated cosine drive: value = (amplitude/frequency) * sin(frequency*t).

    ``amplitude`` is the peak of the value's time derivative
    amplitude*cos(frequency*t), in radians/time.
    """

    amplitude: float
    frequency: float

    def __post_init__(self):
        _check_finite("amplitude", self.amplitude)
        _check_finite("frequency", self.frequency)
        if self.frequency <= 0.0:
            raise ValueError("frequency must be positive")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return (self.amplitude / self.frequency) * np.sin(self.frequency * t)

    def derivative(self, t):
        return self.amplitude * np.cos(self.frequency * np.asarray(t, dtype=float))

    def increment(self, t, dt):
        # sin(w t) - sin(w (t - dt)) = 2 cos(w (t - dt/2)) sin(w dt / 2)
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        w = self.frequency
        return (2.0 * self.amplitude / w) * np.cos(w * (t - 0.5 * dt)) * np.sin(0.5 * w * dt)

    def integral(self, t):
        t = np.asarray(t, dtype=float)
        w = self.frequency
        return (self.amplitude / w) * (1.0 - np.cos(w * t)) / w

    def integral_increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        w = self.frequency
        return (2.0 * self.amplitude / w**2) * np.sin(w * (t - 0.5 * dt)) * np.sin(0.5 * w * dt)

    def rate_bound(self) -> float:
        return max(abs(self.amplitude), self.frequency)

    def value_bound(self, horizon: float) -> float:
        return abs(self.amplitude) / self.frequency


@dataclass(frozen=True)
class Cosine:
    """Cosine-valued term: value = amplitude * cos(frequency*t).

    Nonzero at t = 0, so it suits rate-like profiles (e.g. a modulated
    detuning) rather than Euler angles.
    """

    amplitude: float
    frequency: float

    def __post_init__(self):
        _check_finite("amplitude", self.amplitude)
        _check_finite("frequency", self.frequency)
        if self.frequency <= 0.0:
            raise ValueError("frequency must be positive")

    def eval(self, t):
        return self.amplitude * np.cos(self.frequency * np.asarray(t, dtype=float))

    def derivative(self, t):
        w = self.frequency
        return -self.amplitude * w * np.sin(w * np.asarray(t, dtype=float))

    def increment(self, t, dt):
        # cos(w t) - cos(w (t - dt)) = -2 sin(w (t - dt/2)) sin(w dt / 2)
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        w = self.frequency
        return -2.0 * self.amplitude * np.sin(w * (t - 0.5 * dt)) * np.sin(0.5 * w * dt)

    def integral(self, t):
        w = self.frequency
        return (self.amplitude / w) * np.sin(w * np.asarray(t, dtype=float))

    def integral_increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        w = self.frequency
        return (2.0 * self.amplitude / w) * np.cos(w * (t - 0.5 * dt)) * np.sin(0.5 * w * dt)

    def rate_bound(self) -> float:
        return max(abs(self.amplitude) * self.frequency, self.frequency)

    def value_bound(self, horizon: float) -> float:
        return abs(self.amplitude)


@dataclass(frozen=True)
class SaturatingExp:
    """Damped ramp: value = amplitude * (1 - exp(-damping*t)) / damping."""

    amplitude: float
    damping: float

    def __post_init__(self):
        _check_finite("amplitude", self.amplitude)
        _check_finite("damping", self.damping)
        if self.damping <= 0.0:
            raise ValueError("damping must be positive")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return (self.amplitude / self.damping) * -np.expm1(-self.damping * t)

    def derivative(self, t):
        return self.amplitude * np.exp(-self.damping * np.asarray(t, dtype=float))

    def increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        chi = self.damping
        return (self.amplitude / chi) * np.exp(-chi * (t - dt)) * -np.expm1(-chi * dt)

    def integral(self, t):
        t = np.asarray(t, dtype=float)
        chi = self.damping
        return (self.amplitude / chi) * (t + np.expm1(-chi * t) / chi)

    def integral_increment(self, t, dt):
        t, dt = np.broadcast_arrays(np.asarray(t, float), np.asarray(dt, float))
        chi = self.damping
        tail = np.exp(-chi * (t - dt)) * -np.expm1(-chi * dt) / chi
        return (self.amplitude / chi) * (dt - tail)

    def rate_bound(self) -> float:
        return max(abs(self.amplitude), self.damping)

    def value_bound(self, horizon: float) -> float:
        return abs(self.amplitude) / self.damping


ProfileTerm = Union[Constant, Linear, Sinusoid, Cosine, SaturatingExp]


@dataclass(frozen=True)
class AngleProfile:
    """Sum of primitive closed-form terms; accepts scalars or ndarrays of t."""

    terms: tuple[ProfileTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if not isinstance(term, (Constant, Linear, Sinusoid, Cosine, SaturatingExp)):
                raise TypeError(f"unsupported profile term {term!r}")

    @staticmethod
    def zero() -> "AngleProfile":
        return AngleProfile(())

    def _sum(self, fn, *args):
        out = None
        for term in self.terms:
            contrib = fn(term, *args)
            out = contrib if out is None else out + contrib
        if out is None:
            shape = np.broadcast_shapes(*(np.shape(a) for a in args))
            out = np.zeros(shape)
        return out if out.ndim else float(out)

    def value(self, t):
        """Profile value at time t (exact closed form)."""
        return self._sum(lambda term, t: term.eval(t), t)

    def derivative(self, t):
        """Analytic time derivative at time t."""
        return self._sum(lambda term, t: term.derivative(t), t)

    def increment(self, t, dt):
        """p(t) - p(t - dt) evaluated per-primitive, cancellation-free.

        Requires 0 <= dt <= t elementwise.
        """
        t_arr = np.asarray(t, dtype=float)
        dt_arr = np.asarray(dt, dtype=float)
        if np.any(dt_arr < 0.0) or np.any(dt_arr > t_arr + 1e-15 * np.abs(t_arr)):
            raise ValueError("increment requires 0 <= dt <= t")
        return self._sum(lambda term, t, dt: term.increment(t, dt), t, dt)

    def integral(self, t):
        """Antiderivative from 0 to t, per-primitive closed form."""
        return self._sum(lambda term, t: term.integral(t), t)

    def integral_increment(self, t, dt):
        """integral(t) - integral(t - dt) in cancellation-free form."""
        t_arr = np.asarray(t, dtype=float)
        dt_arr = np.asarray(dt, dtype=float)
        if np.any(dt_arr < 0.0) or np.any(dt_arr > t_arr + 1e-15 * np.abs(t_arr)):
            raise ValueError("integral_increment requires 0 <= dt <= t")
        return self._sum(lambda term, t, dt: term.integral_increment(t, dt), t, dt)

    def rate_bound(self) -> float:
        """Upper bound on the oscillation rate of the profile's value.

        Used to seed quadrature panels; combines derivative amplitudes and
        structural frequencies of all terms.
        """
        return float(sum(term.rate_bound() for term in self.terms))

    def value_bound(self, horizon: float) -> float:
        """Upper bound on |value| over [0, horizon]."""
        return float(sum(term.value_bound(float(horizon)) for term in self.terms))


def _rotation_z(angle: float) -> np.ndarray:
    phase = np.exp(-0.5j * angle)
    return np.array([[phase, 0.0], [0.0, np.conj(phase)]], dtype=complex)


def _rotation_y(angle: float) -> np.ndarray:
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class EulerDrive:
    """Drive described by three Euler-angle profiles (z-y-z convention).

    The propagator is U(t) = Rz(alpha(t)) Ry(beta(t)) Rz(gamma(t)).  At
    construction, beta(0) = 0 and alpha(0) + gamma(0) = 0 (mod 4*pi) are
    enforced so that U(0) is the identity.
    """

    alpha: AngleProfile = field(default_factory=AngleProfile.zero)
    beta: AngleProfile = field(default_factory=AngleProfile.zero)
    gamma: AngleProfile = field(default_factory=AngleProfile.zero)

    def __post_init__(self):
        beta0 = float(self.beta.value(0.0))
        if abs(beta0) > 1e-12:
            raise ValueError(f"beta(0) must vanish, got {beta0:g}")
        phase0 = float(self.alpha.value(0.0)) + float(self.gamma.value(0.0))
        residue = math.remainder(phase0, 4.0 * math.pi)
        if abs(residue) > 1e-9:
            raise ValueError(
                f"alpha(0) + gamma(0) must be 0 mod 4*pi, got {phase0:g}"
            )

    def unitary(self, t: float) -> np.ndarray:
        """2x2 propagator at time t; unitary to machine precision."""
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        a = float(self.alpha.value(t))
        b = float(self.beta.value(t))
        g = float(self.gamma.value(t))
        return _rotation_z(a) @ _rotation_y(b) @ _rotation_z(g)

    def hamiltonian_coefficients(self, t: float) -> tuple[float, float, float]:
        """Coefficients (h_x, h_y, h_z) with H(t) = h_x sx + h_y sy + h_z sz.

        Reconstructed from the Schroedinger equation for the z-y-z propagator
        using the analytic derivatives of the angle profiles.
        """
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        a = float(self.alpha.value(t))
        b = float(self.beta.value(t))
        da = float(self.alpha.derivative(t))
        db = float(self.beta.derivative(t))
        dg = float(self.gamma.derivative(t))
        h_x = -0.5 * db * math.sin(a) + 0.5 * dg * math.sin(b) * math.cos(a)
        h_y = 0.5 * db * math.cos(a) + 0.5 * dg * math.sin(b) * math.sin(a)
        h_z = 0.5 * da + 0.5 * dg * math.cos(b)
        return (h_x, h_y, h_z)

    def hamiltonian(self, t: float) -> np.ndarray:
        """2x2 Hamiltonian matrix at time t."""
        h_x, h_y, h_z = self.hamiltonian_coefficients(t)
        return h_x * _PAULI_X + h_y * _PAULI_Y + h_z * _PAULI_Z
