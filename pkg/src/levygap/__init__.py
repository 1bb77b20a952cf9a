"""Explicit ergodicity bounds for time-changed symmetric Levy processes on the line."""

from .bounds import (
    BoundsConfig,
    compute_delta,
    compute_I_and_kappa,
    green_X0,
    green_Y0_apply,
    lambda0_bracket,
    lambda1_lower,
    variational_lower_certificate,
    wlsc_bounds,
)
from .errors import (
    DomainError,
    ExtrapolationError,
    InfiniteMassError,
    LevyGapError,
    NonConvergenceError,
    NoSignalError,
    UnsupportedFamilyError,
)
from .harmonic import HarmonicEvaluator, QuadConfig, omega, stable_H, wlsc_H_upper
from .report import ErgodicityReport, analyze
from .simulator import (
    SimConfig,
    estimate_decay_rate,
    estimate_return_time,
    sample_base_path,
    simulate_ensemble,
    time_change,
)
from .speed import SpeedFunction, mu_integral, mu_tail, mu_total
from .symbol import CharacteristicExponent, check_conditions, fit_wlsc, psi_star, verify_wlsc

__version__ = "0.1.0"
