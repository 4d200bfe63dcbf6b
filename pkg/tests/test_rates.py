"""Decay-rate, survival and regime-classification tests."""

import math

import numpy as np
import pytest

from zenodrive.environment import FiniteTemperature, OhmicSpectralDensity, ZeroTemperature
from zenodrive.filters import LargeSpin, PopulationDecayFull, PopulationDecayRWA
from zenodrive.numerics import QuadratureConfig
from zenodrive.profiles import AngleProfile, Constant, Cosine, EulerDrive, Linear, Sinusoid
from zenodrive.rates import (
    ANTI_ZENO,
    ZENO,
    PerturbativeRateWarning,
    PolaronModel,
    RateCurve,
    classify_regimes,
    decay_rate_polaron,
    decay_rate_weak,
    rate_curve,
    survival,
)

SD_WEAK = OhmicSpectralDensity(0.01, 10.0)


def undriven() -> EulerDrive:
    return EulerDrive(alpha=AngleProfile((Linear(1.0),)))


# Regression fixture: undriven weak-coupling rates on a 12-point log grid
# over [0.05, 3], generated by this package's quadrature at tightened
# tolerances (abs 1e-12, rel 1e-10) and frozen.
GOLDEN_UNDRIVEN = (
    (0.05, 0.04496800204264343),
    (0.07254711025452343, 0.05916308910916739),
    (0.10526166412563961, 0.07286335337794339),
    (0.1527285910579479, 0.08283428176205632),
    (0.22160035868997938, 0.0870848321510373),
    (0.3215293130864775, 0.08597124845841789),
    (0.4665204505309175, 0.08133401333479476),
    (0.6768942112131286, 0.07519210447118214),
    (0.9821343794305504, 0.0690940147440143),
    (1.4250202221861221, 0.06403124275091447),
    (2.067621983477242, 0.060537700729307246),
    (3.0, 0.05872705616571949),
)


class TestDecayRateWeak:
    def test_zero_coupling(self):
        sd = OhmicSpectralDensity(0.0, 10.0)
        assert decay_rate_weak(PopulationDecayRWA(undriven()), sd, 1.0) == 0.0

    def test_zeno_asymptote(self):
        gamma = decay_rate_weak(PopulationDecayRWA(undriven()), SD_WEAK, 0.01)
        assert gamma == pytest.approx(0.01 * SD_WEAK.total_weight(), rel=0.1)

    def test_linearity_in_coupling(self):
        drive = EulerDrive(alpha=AngleProfile((Linear(1.0), Sinusoid(5.0, 1.0))))
        model = PopulationDecayRWA(drive)
        for tau in (0.3, 1.0, 3.0):
            g1 = decay_rate_weak(model, OhmicSpectralDensity(0.01, 10.0), tau)
            g5 = decay_rate_weak(model, OhmicSpectralDensity(0.05, 10.0), tau)
            assert abs(g5 - 5.0 * g1) <= 1e-10 * abs(g5)

    def test_large_spin_multiplicativity(self):
        drive = EulerDrive(
            alpha=AngleProfile((Linear(1.0),)), beta=AngleProfile((Linear(5.0),))
        )
        single = decay_rate_weak(PopulationDecayFull(drive), SD_WEAK, 0.8)
        for n in (2, 5, 10):
            collective = decay_rate_weak(LargeSpin(drive, n), SD_WEAK, 0.8)
            assert abs(collective - n * single) <= 1e-12 * abs(collective)

    def test_tail_bound_guard(self):
        with pytest.raises(ValueError):
            decay_rate_weak(
                PopulationDecayRWA(undriven()), SD_WEAK, 1.0, cutoff_multiple=2.0
            )

    def test_golden_regression(self):
        model = PopulationDecayRWA(undriven())
        for tau, expected in GOLDEN_UNDRIVEN:
            gamma = decay_rate_weak(model, SD_WEAK, tau)
            assert gamma == pytest.approx(expected, rel=1e-7)


class TestSurvival:
    def test_zero_rate(self):
        assert survival(0.0, 1.0, 7) == 1.0

    def test_single_measurement(self):
        assert survival(1.0, 1.0, 1) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_exponent_additivity(self):
        assert survival(0.5, 2.0, 3) == pytest.approx(math.exp(-3.0), rel=1e-15)

    def test_compounding_identity(self):
        for m in (1, 3, 10, 100):
            assert survival(0.37, 0.9, m) == pytest.approx(
                survival(0.37, 0.9, 1) ** m, rel=1e-14
            )

    def test_negative_rate_flagged(self):
        with pytest.warns(PerturbativeRateWarning):
            value = survival(-0.2, 1.0, 1)
        assert value > 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            survival(1.0, 0.0, 1)
        with pytest.raises(ValueError):
            survival(1.0, 1.0, 0)


class TestDecayRatePolaron:
    def test_zero_tunneling(self):
        sd = OhmicSpectralDensity(1.0, 10.0)
        eps = AngleProfile((Constant(1.0),))
        assert decay_rate_polaron(0.0, eps, sd, ZeroTemperature(), 1.0) == 0.0

    def test_decoupled_closed_form(self):
        sd = OhmicSpectralDensity(0.0, 10.0)
        eps = AngleProfile((Constant(1.0),))
        gamma = decay_rate_polaron(0.05, eps, sd, ZeroTemperature(), 1.0)
        expected = 0.05**2 * (1.0 - math.cos(1.0)) / 2.0
        assert gamma == pytest.approx(expected, abs=1e-8)

    def test_quadratic_in_tunneling(self):
        sd = OhmicSpectralDensity(1.0, 10.0)
        eps = AngleProfile((Constant(1.0), Cosine(5.0, 5.0)))
        small = decay_rate_polaron(0.05, eps, sd, ZeroTemperature(), 2.0)
        large = decay_rate_polaron(0.10, eps, sd, ZeroTemperature(), 2.0)
        assert abs(large - 4.0 * small) <= 1e-12 * abs(large)

    def test_stronger_coupling_slows_decay(self):
        eps = AngleProfile((Constant(1.0), Cosine(5.0, 5.0)))
        taus = np.geomspace(0.05, 5.0, 16)
        for tau in taus:
            g1 = decay_rate_polaron(
                0.05, eps, OhmicSpectralDensity(1.0, 10.0), ZeroTemperature(), float(tau)
            )
            g2 = decay_rate_polaron(
                0.05, eps, OhmicSpectralDensity(2.0, 10.0), ZeroTemperature(), float(tau)
            )
            assert g2 < g1

    def test_finite_temperature_runs(self):
        sd = OhmicSpectralDensity(1.0, 10.0)
        eps = AngleProfile((Constant(1.0),))
        cold = decay_rate_polaron(0.05, eps, sd, ZeroTemperature(), 1.0)
        warm = decay_rate_polaron(0.05, eps, sd, FiniteTemperature(50.0), 1.0)
        assert math.isfinite(warm)
        assert warm == pytest.approx(cold, rel=0.05)


class TestRateCurve:
    def test_single_point_matches_direct(self):
        model = PopulationDecayRWA(undriven())
        curve = rate_curve(model, SD_WEAK, ZeroTemperature(), [1.0])
        assert curve.gamma[0] == decay_rate_weak(model, SD_WEAK, 1.0)
        assert not curve.partial
        assert curve.metadata["cutoff_multiple"] == 40.0

    def test_positive_rates_on_scenario_grids(self):
        eps = AngleProfile((Constant(1.0), Cosine(1.0, 5.0)))
        model = PolaronModel(delta=0.05, epsilon=eps)
        sd = OhmicSpectralDensity(1.0, 10.0)
        curve = rate_curve(model, sd, ZeroTemperature(), np.geomspace(0.05, 5.0, 24))
        assert all(g > 0.0 for g in curve.gamma)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            RateCurve(tau_grid=(1.0, 0.5), gamma=(0.1, 0.2), model_label="x")
        with pytest.raises(ValueError):
            RateCurve(tau_grid=(0.5, 1.0), gamma=(0.1,), model_label="x")


class TestClassifyRegimes:
    def test_monotone_increasing(self):
        curve = RateCurve(
            tau_grid=tuple(np.linspace(0.1, 1.0, 10)),
            gamma=tuple(np.linspace(0.1, 1.0, 10)),
            model_label="synthetic",
        )
        seg = classify_regimes(curve)
        assert seg.segments == (((0.1, 1.0), ZENO),)
        assert seg.crossovers == ()

    def test_single_peak(self):
        taus = np.linspace(0.1, 2.0, 21)
        gammas = np.exp(-((taus - 1.0) ** 2))
        curve = RateCurve(tuple(taus), tuple(gammas), "synthetic")
        seg = classify_regimes(curve)
        assert len(seg.crossovers) == 1
        assert seg.segments[0][1] == ZENO and seg.segments[1][1] == ANTI_ZENO

    def test_dead_band_suppresses_noise(self):
        taus = np.linspace(0.1, 2.0, 40)
        gammas = taus + 1e-9 * np.sin(40.0 * taus)  # monotone with tiny wiggles
        curve = RateCurve(tuple(taus), tuple(gammas), "synthetic")
        seg = classify_regimes(curve)
        assert len(seg.crossovers) == 0

    def test_too_few_points(self):
        curve = RateCurve((0.5, 1.0), (0.1, 0.2), "synthetic")
        with pytest.raises(ValueError):
            classify_regimes(curve)

    def test_labels_alternate_and_tile(self):
        taus = np.linspace(0.1, 4.0, 60)
        gammas = np.sin(taus) + 2.0
        curve = RateCurve(tuple(taus), tuple(gammas), "synthetic")
        seg = classify_regimes(curve)
        for (a, b), (c, d) in zip(seg.segments, seg.segments[1:]):
            assert a[1] == c[0]  # contiguous
        labels = [lab for _, lab in seg.segments]
        assert all(x != y for x, y in zip(labels, labels[1:]))

    def test_grid_refinement_stability_polaron(self):
        eps = AngleProfile((Constant(1.0), Cosine(5.0, 5.0)))
        model = PolaronModel(delta=0.05, epsilon=eps)
        sd = OhmicSpectralDensity(1.0, 10.0)
        coarse_grid = np.geomspace(0.05, 5.0, 60)
        fine_grid = np.geomspace(0.05, 5.0, 120)
        coarse = classify_regimes(rate_curve(model, sd, ZeroTemperature(), coarse_grid))
        fine = classify_regimes(rate_curve(model, sd, ZeroTemperature(), fine_grid))
        assert len(coarse.crossovers) == len(fine.crossovers)
        spacing = np.diff(coarse_grid).max()
        for a, b in zip(coarse.crossovers, fine.crossovers):
            assert abs(a - b) <= spacing
