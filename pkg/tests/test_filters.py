"""Filter-function tests: closed forms, oracles, series and sweep paths."""

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import dblquad

from zenodrive.filters import (
    Dephasing,
    FilterSweep,
    LargeSpin,
    PopulationDecayFull,
    PopulationDecayRWA,
    TruncationWarning,
    q_dephasing,
    q_dephasing_closed,
    q_full,
    q_grid,
    q_large_spin,
    q_rwa,
    q_rwa_sinusoidal_series,
    q_value,
)
from zenodrive.numerics import QuadratureConfig
from zenodrive.profiles import (
    AngleProfile,
    Constant,
    EulerDrive,
    Linear,
    SaturatingExp,
    Sinusoid,
)

TIGHT = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)


def sinc(x: float) -> float:
    return 1.0 if x == 0.0 else math.sin(x) / x


def linear_drive(rate: float = 1.0) -> EulerDrive:
    return EulerDrive(alpha=AngleProfile((Linear(rate),)))


def modulated_drive(v0: float, freq: float, eps0: float = 1.0) -> EulerDrive:
    return EulerDrive(alpha=AngleProfile((Linear(eps0), Sinusoid(v0, freq))))


def random_angle_profile(rng) -> AngleProfile:
    terms = []
    for _ in range(rng.integers(1, 3)):
        kind = rng.choice(["linear", "sinusoid", "satexp"])
        if kind == "linear":
            terms.append(Linear(rng.uniform(-2.0, 2.0)))
        elif kind == "sinusoid":
            terms.append(Sinusoid(rng.uniform(-4.0, 4.0), rng.uniform(0.5, 5.0)))
        else:
            terms.append(SaturatingExp(rng.uniform(-2.0, 2.0), rng.uniform(0.1, 1.5)))
    return AngleProfile(tuple(terms))


class TestRWAClosedForm:
    def test_resonance(self):
        assert q_rwa(linear_drive(), 1.0, 2.0) == pytest.approx(2.0, abs=1e-10)

    def test_first_zero(self):
        tau = 1.0
        assert q_rwa(linear_drive(), 1.0 + 2.0 * math.pi / tau, tau) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_sinc_squared_grid(self):
        drive = linear_drive()
        for tau in (0.1, 1.0, 2.0):
            for omega in np.linspace(0.0, 10.0, 21):
                expected = tau * sinc((1.0 - omega) * tau / 2.0) ** 2
                assert q_rwa(drive, float(omega), tau) == pytest.approx(
                    expected, abs=1e-9
                )

    def test_driven_peak_near_shifted_splitting(self):
        # Strong slow modulation moves the filter peak toward rate + amplitude.
        omegas = np.linspace(0.0, 10.0, 201)
        values = q_grid(PopulationDecayRWA(modulated_drive(5.0, 1.0)), omegas, 1.0)
        peak = omegas[np.argmax(values)]
        assert abs(peak - 5.6) <= 0.3

    def test_validation(self):
        with pytest.raises(ValueError):
            q_rwa(linear_drive(), 1.0, 0.0)
        with pytest.raises(ValueError):
            q_rwa(linear_drive(), -1.0, 1.0)


class TestMatrixElementOracles:
    """Brute-force evaluations from the coupling-operator matrix elements."""

    @staticmethod
    def _dblquad_re_im(kernel, tau):
        re = dblquad(
            lambda tp, t: kernel(t, tp).real, 0.0, tau, 0.0, lambda t: t,
            epsabs=1e-12, epsrel=1e-10,
        )[0]
        im = dblquad(
            lambda tp, t: kernel(t, tp).imag, 0.0, tau, 0.0, lambda t: t,
            epsabs=1e-12, epsrel=1e-10,
        )[0]
        return re, im

    def test_rwa_from_raising_lowering_elements(self):
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0), Sinusoid(2.0, 3.0))),
            beta=AngleProfile((Linear(1.5),)),
            gamma=AngleProfile((SaturatingExp(1.0, 0.5),)),
        )
        alpha, beta, gamma = drive.alpha, drive.beta, drive.gamma

        def g_up(t):
            return np.exp(1j * (alpha.value(t) + gamma.value(t))) * np.cos(
                0.5 * beta.value(t)
            ) ** 2

        for omega, tau in [(0.7, 0.9), (3.0, 1.4)]:
            kernel = lambda t, tp: np.exp(-1j * omega * tp) * g_up(t) * np.conj(
                g_up(t - tp)
            )
            re, _ = self._dblquad_re_im(kernel, tau)
            assert q_rwa(drive, omega, tau, TIGHT) == pytest.approx(
                2.0 * re / tau, abs=1e-9
            )

    def test_full_model_from_sigma_x_elements(self):
        # Transverse coupling: both matrix elements of sigma_x contribute.
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)),
            beta=AngleProfile((Linear(5.0),)),
        )
        alpha, beta, gamma = drive.alpha, drive.beta, drive.gamma

        def g_factor(t):
            return np.exp(1j * (alpha.value(t) + gamma.value(t))) * np.cos(
                0.5 * beta.value(t)
            ) ** 2 - np.exp(-1j * (alpha.value(t) - gamma.value(t))) * np.sin(
                0.5 * beta.value(t)
            ) ** 2

        def gbar_factor(t):
            return np.exp(-1j * (alpha.value(t) + gamma.value(t))) * np.cos(
                0.5 * beta.value(t)
            ) ** 2 - np.exp(1j * (alpha.value(t) - gamma.value(t))) * np.sin(
                0.5 * beta.value(t)
            ) ** 2

        for omega, tau in [(1.0, 1.0), (4.5, 0.7)]:
            kernel = lambda t, tp: np.exp(-1j * omega * tp) * g_factor(t) * gbar_factor(
                t - tp
            )
            re, _ = self._dblquad_re_im(kernel, tau)
            assert q_full(drive, omega, tau, TIGHT) == pytest.approx(
                2.0 * re / tau, abs=1e-9
            )

    def test_dephasing_from_rotated_frame_propagator(self):
        # Heisenberg-picture matrix elements of the rotated-frame coupling,
        # via the closed-form propagator.
        at = AngleProfile((Sinusoid(5.0, 1.0),))
        beta = AngleProfile((Linear(1.0),))
        gt = AngleProfile.zero()
        drive = EulerDrive(
            alpha=AngleProfile((Constant(math.pi / 2),) + at.terms),
            beta=beta,
            gamma=AngleProfile((Constant(-math.pi / 2),) + gt.terms),
        )
        sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

        def heisenberg_elements(t):
            u = drive.unitary(float(t))
            f = u.conj().T @ (-sigma_x) @ u
            return f[0, 1], f[1, 0]  # <e|F|g>, <g|F|e>

        omega, tau = 2.0, 1.0

        def kernel(t, tp):
            upper, _ = heisenberg_elements(t)
            _, lower = heisenberg_elements(t - tp)
            return np.exp(-1j * omega * tp) * lower * upper

        re, _ = self._dblquad_re_im(kernel, tau)
        value = q_dephasing(at, beta, gt, omega, tau, TIGHT)
        assert value == pytest.approx(2.0 * re / tau, abs=1e-9)

    def test_complex_assembly_is_real(self):
        # The squared amplitude transform carries no imaginary residue.
        sweep = FilterSweep(PopulationDecayRWA(modulated_drive(5.0, 5.0)), 1.0)
        psi = sweep.amplitude_transform(np.linspace(0.0, 10.0, 41))
        residue = np.abs((psi * np.conj(psi)).imag)
        assert np.max(residue) < 1e-10


class TestFullModel:
    def test_reduces_to_rwa_without_tipping(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            drive = EulerDrive(
                alpha=random_angle_profile(rng), gamma=random_angle_profile(rng)
            )
            omega = float(rng.uniform(0.0, 10.0))
            tau = float(rng.choice([0.1, 1.0, 2.0]))
            a = q_rwa(drive, omega, tau)
            b = q_full(drive, omega, tau)
            assert abs(a - b) < 1e-8

    def test_differs_from_rwa_with_tipping(self):
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)), beta=AngleProfile((Linear(5.0),))
        )
        a = q_rwa(drive, 1.0, 1.0)
        b = q_full(drive, 1.0, 1.0)
        assert abs(a - b) > 1e-3


class TestDephasing:
    def test_closed_form_values(self):
        assert q_dephasing_closed(2.0 * math.pi, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert q_dephasing_closed(math.pi, 1.0) == pytest.approx(
            4.0 / math.pi**2, abs=1e-12
        )
        assert q_dephasing_closed(1e-6, 1.0) == pytest.approx(
            1.0 - 8.3333e-14, abs=1e-16
        )

    def test_reduction_to_closed_form(self):
        zero = AngleProfile.zero()
        beta = AngleProfile((Linear(1.0),))
        for tau in (0.5, 1.0, 2.0):
            for omega in np.linspace(0.25, 20.0, 18):
                value = q_dephasing(zero, beta, zero, float(omega), tau)
                assert abs(value - q_dephasing_closed(float(omega), tau)) < 1e-8

    def test_zero_frequency_limit(self):
        zero = AngleProfile.zero()
        beta = AngleProfile((Linear(1.0),))
        assert q_dephasing(zero, beta, zero, 0.0, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_driven_departs_from_closed_form(self):
        at = AngleProfile((Sinusoid(5.0, 1.0),))
        beta = AngleProfile((Linear(1.0),))
        value = q_dephasing(at, beta, AngleProfile.zero(), 2.0, 1.0)
        assert abs(value - q_dephasing_closed(2.0, 1.0)) > 1e-2


class TestLargeSpin:
    def test_single_spin_reduces(self):
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)), beta=AngleProfile((Linear(5.0),))
        )
        assert q_large_spin(drive, 2.0, 1.0, 1) == q_full(drive, 2.0, 1.0)

    def test_multiplicative_factor(self):
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)), beta=AngleProfile((Linear(2.0),))
        )
        single = q_full(drive, 3.0, 1.5)
        assert q_large_spin(drive, 3.0, 1.5, 10) == pytest.approx(
            10.0 * single, rel=1e-15
        )

    def test_undriven_resonance_with_factor(self):
        assert q_large_spin(linear_drive(), 1.0, 2.0, 4) == pytest.approx(
            8.0, abs=1e-9
        )

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            q_large_spin(linear_drive(), 1.0, 1.0, 0)


class TestSinusoidalSeries:
    def test_undriven_degeneracy(self):
        for omega in (0.3, 1.0, 4.2):
            for tau in (0.5, 1.0):
                expected = tau * sinc((1.0 - omega) * tau / 2.0) ** 2
                assert q_rwa_sinusoidal_series(1.0, 0.0, 5.0, omega, tau) == pytest.approx(
                    expected, abs=1e-14
                )

    def test_matches_quadrature(self):
        for v0, freq in [(1.0, 5.0), (5.0, 1.0), (5.0, 5.0)]:
            drive = modulated_drive(v0, freq)
            for omega in (0.0, 0.9, 2.7, 6.0, 9.3):
                for tau in (0.1, 1.0):
                    series = q_rwa_sinusoidal_series(1.0, v0, freq, omega, tau)
                    quad = q_rwa(drive, omega, tau, TIGHT)
                    assert abs(series - quad) <= max(
                        1e-6 * max(abs(series), abs(quad)), 1e-10
                    )

    def test_removable_singularities(self):
        # omega = eps0 + m*freq makes one denominator vanish exactly.
        for v0, freq, omega in [(1.0, 5.0, 6.0), (5.0, 5.0, 6.0), (5.0, 1.0, 3.0)]:
            drive = modulated_drive(v0, freq)
            series = q_rwa_sinusoidal_series(1.0, v0, freq, omega, 1.0)
            quad = q_rwa(drive, omega, 1.0, TIGHT)
            assert math.isfinite(series)
            assert abs(series - quad) <= max(1e-6 * abs(quad), 1e-10)

    def test_truncation_warning(self):
        with pytest.warns(TruncationWarning):
            q_rwa_sinusoidal_series(1.0, 5.0, 1.0, 2.0, 1.0, order=10)

    def test_default_order_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            q_rwa_sinusoidal_series(1.0, 5.0, 1.0, 2.0, 1.0)

    def test_scaling_invariance(self):
        # Dimensional consistency: scaling all frequencies by s and tau by
        # 1/s multiplies the filter value by 1/s.
        for s in (2.0, 5.0):
            for omega, tau in [(0.8, 1.0), (3.1, 0.5)]:
                base = q_rwa_sinusoidal_series(1.0, 5.0, 5.0, omega, tau)
                scaled = q_rwa_sinusoidal_series(s, 5.0 * s, 5.0 * s, s * omega, tau / s)
                assert s * scaled == pytest.approx(base, rel=1e-12)
                base_sinc = q_rwa(linear_drive(1.0), omega, tau, TIGHT)
                scaled_sinc = q_rwa(linear_drive(s), s * omega, tau / s, TIGHT)
                assert s * scaled_sinc == pytest.approx(base_sinc, abs=1e-9)


class TestSweepPath:
    def test_matches_pointwise_ops_for_all_models(self):
        drive_a = modulated_drive(5.0, 1.0)
        drive_b = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)),
            beta=AngleProfile((SaturatingExp(1.0, 0.2),)),
        )
        models = [
            PopulationDecayRWA(drive_a),
            PopulationDecayFull(drive_b),
            Dephasing(alpha_tilde=AngleProfile((Sinusoid(5.0, 5.0),))),
            LargeSpin(drive_b, 5),
        ]
        omegas = np.linspace(0.0, 12.0, 25)
        for model in models:
            for tau in (0.1, 1.0):
                grid = q_grid(model, omegas, tau)
                point = np.array([q_value(model, float(w), tau) for w in omegas])
                np.testing.assert_allclose(grid, point, atol=1e-9)

    def test_high_frequency_escalation(self):
        # Far beyond the drive rate the filter is tiny but must stay accurate.
        sweep = FilterSweep(PopulationDecayRWA(linear_drive()), 2.0)
        for omega in (40.0, 123.4, 400.0):
            expected = 2.0 * sinc((1.0 - omega)) ** 2
            assert sweep.values([omega])[0] == pytest.approx(expected, abs=1e-10)

    def test_values_nonnegative(self):
        omegas = np.linspace(0.0, 10.0, 101)
        values = q_grid(PopulationDecayRWA(modulated_drive(5.0, 5.0)), omegas, 1.0)
        assert np.all(values >= 0.0)
