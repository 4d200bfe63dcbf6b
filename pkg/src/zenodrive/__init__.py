"""Filter functions and measurement-modified decay rates for driven spins.

Numerical engine for two-level and collective-spin systems subject to
repeated projective measurements and coherent driving, covering both the
weak-coupling overlap-integral regime and the strong-coupling displaced
frame.  See the ``zenodrive`` command-line tool for scenario sweeps.
"""

from .environment import (
    FiniteTemperature,
    OhmicSpectralDensity,
    Temperature,
    ZeroTemperature,
    correlation_phase,
    phi_imag,
    phi_real,
    polaron_correlation,
)
from .filters import (
    Dephasing,
    FilterModel,
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
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    QuadratureConvergenceError,
    bessel_j,
    integrate_1d,
    integrate_triangle,
)
from .profiles import (
    AngleProfile,
    Constant,
    Cosine,
    EulerDrive,
    Linear,
    SaturatingExp,
    Sinusoid,
)
from .rates import (
    ANTI_ZENO,
    ZENO,
    PerturbativeRateWarning,
    PolaronModel,
    RateCurve,
    RegimeSegmentation,
    classify_regimes,
    decay_rate_polaron,
    decay_rate_weak,
    rate_curve,
    survival,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # numerics
    "QuadratureConfig",
    "QuadratureConvergenceError",
    "DEFAULT_QUADRATURE",
    "integrate_1d",
    "integrate_triangle",
    "bessel_j",
    # profiles
    "AngleProfile",
    "Constant",
    "Linear",
    "Sinusoid",
    "Cosine",
    "SaturatingExp",
    "EulerDrive",
    # environment
    "OhmicSpectralDensity",
    "ZeroTemperature",
    "FiniteTemperature",
    "Temperature",
    "correlation_phase",
    "phi_imag",
    "phi_real",
    "polaron_correlation",
    # filters
    "PopulationDecayRWA",
    "PopulationDecayFull",
    "Dephasing",
    "LargeSpin",
    "FilterModel",
    "FilterSweep",
    "TruncationWarning",
    "q_rwa",
    "q_full",
    "q_dephasing",
    "q_dephasing_closed",
    "q_large_spin",
    "q_rwa_sinusoidal_series",
    "q_value",
    "q_grid",
    # rates
    "PolaronModel",
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
