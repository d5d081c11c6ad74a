"""Temperature-dependent geometric phase of a two-center one-electron molecule."""

from .config import (
    CONSTANTS,
    K_B,
    ConfigError,
    LambdaMode,
    ModelConfig,
    NormConvention,
    Parity,
    QuadratureSettings,
    default_config,
    load_config,
    validate,
)
from .errors import (
    DomainError,
    ForbiddenRegionError,
    NoMinimumError,
    NonConvergenceError,
    ThermophaseError,
    TurningPointError,
)
from .h2plus import (
    effective_potential,
    energy,
    gauge_potential,
    geometric_phase,
    metric_term,
    minimize_bond,
    phase_endpoint_identity,
)
from .integrals import OrbitalPair, coulomb_pi, exchange_sigma, overlap_y
from .thermal import boltzmann_amplitude, calibrate, lambda_of_t, lambda_self_consistent, resolve_lambda
from .wkb import RadialGrid, WkbProblem, WkbSolution, solve

__all__ = [
    "CONSTANTS", "K_B", "ConfigError", "LambdaMode", "ModelConfig", "NormConvention", "Parity",
    "QuadratureSettings", "default_config", "load_config", "validate",
    "DomainError", "ForbiddenRegionError", "NoMinimumError", "NonConvergenceError",
    "ThermophaseError", "TurningPointError",
    "effective_potential", "energy", "gauge_potential", "geometric_phase", "metric_term",
    "minimize_bond", "phase_endpoint_identity",
    "OrbitalPair", "coulomb_pi", "exchange_sigma", "overlap_y",
    "boltzmann_amplitude", "calibrate", "lambda_of_t", "lambda_self_consistent", "resolve_lambda",
    "RadialGrid", "WkbProblem", "WkbSolution", "solve",
]
