"""Temperature dependence of the orbital exponent.

The electron density follows a Boltzmann factor, so the orbital exponent
obeys lam^3 = pi n0 exp(-eps / k_B T). The energy eps is negative and its
magnitude is expressed as the temperature scale ``theta_th = |eps| / k_B``,
giving lam(T) = (pi n0 exp(theta_th / T))^(1/3). The free constant n0 is
fixed by anchoring lam(t_ref) = lambda_ref.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .config import K_B, LambdaMode, ModelConfig
from .errors import DomainError, NonConvergenceError
from .integrals import coulomb_pi, exchange_sigma, overlap_y

DAMPING = 0.5
MAX_ITERATIONS = 200
STEP_TOL = 1e-10


@dataclass(frozen=True)
class CalibrationLedger:
    n0: float
    theta_th: float
    t_ref: float
    lambda_ref: float

    @property
    def pi_n0(self) -> float:
        return math.pi * self.n0

    @property
    def log_pi_n0(self) -> float:
        """ln(pi n0), exact even when pi n0 itself under- or overflows."""
        return 3.0 * math.log(self.lambda_ref) - self.theta_th / self.t_ref


@dataclass(frozen=True)
class ThermalState:
    temperature: float
    lam: float
    mode: LambdaMode
    iterations: int = 0
    converged: bool = True


def calibrate(config: ModelConfig) -> CalibrationLedger:
    """Choose n0 so that lam(t_ref) = lambda_ref."""
    pi_n0 = config.lambda_ref**3 * math.exp(-config.theta_th / config.t_ref)
    return CalibrationLedger(
        n0=pi_n0 / math.pi,
        theta_th=config.theta_th,
        t_ref=config.t_ref,
        lambda_ref=config.lambda_ref,
    )


def lambda_of_t(t: float, ledger: CalibrationLedger) -> ThermalState:
    if not t > 0:
        raise DomainError(f"temperature must be positive, got {t}")
    # lambda_ref * exp(theta (1/T - 1/t_ref) / 3), written via n0 as documented
    lam = math.exp((ledger.log_pi_n0 + ledger.theta_th / t) / 3.0)
    return ThermalState(temperature=t, lam=lam, mode=LambdaMode("fixed_epsilon"))


def electronic_energy(lam, r_sep):
    """E_+(lam, R) - 1/R: the even-parity LCAO energy without nuclear repulsion."""
    y = overlap_y(lam, r_sep)
    return -0.5 * lam * lam + (
        lam * (lam - 1.0) - coulomb_pi(lam, r_sep) + (lam - 2.0) * exchange_sigma(lam, r_sep)
    ) / (1.0 + y)


def self_consistent_map(lam, r_sep, t, config: ModelConfig, ledger=None):
    """The right-hand side f(lam) of the self-consistency condition lam = f(lam).

    The electronic energy is mapped onto the thermal scale so that the
    reference exponent reproduces the fixed-epsilon exponent:
    eps_scaled = -theta_th k_B E(lam, R) / E(lambda_ref, R).
    """
    ledger = ledger or calibrate(config)
    ratio = electronic_energy(lam, r_sep) / electronic_energy(config.lambda_ref, r_sep)
    eps_scaled = -config.theta_th * K_B * ratio
    return np.exp((ledger.log_pi_n0 - eps_scaled / (K_B * t)) / 3.0)


def lambda_self_consistent(r_sep: float, t: float, config: ModelConfig) -> ThermalState:
    """Damped fixed-point iteration for lam at separation ``r_sep``.

    Configs not in self-consistent mode fall back to their own rule.
    """
    if config.mode.kind != "self_consistent":
        return resolve_lambda(r_sep, t, config)
    if not t > 0:
        raise DomainError(f"temperature must be positive, got {t}")
    if not r_sep > 0:
        raise DomainError(f"self-consistent lambda needs R > 0, got {r_sep}")
    ledger = calibrate(config)
    lam = lambda_of_t(t, ledger).lam
    history = [lam]
    for it in range(1, MAX_ITERATIONS + 1):
        new = (1.0 - DAMPING) * lam + DAMPING * float(self_consistent_map(lam, r_sep, t, config, ledger))
        history.append(new)
        if not (math.isfinite(new) and new > 0):
            break
        if abs(new - lam) < STEP_TOL:
            return ThermalState(temperature=t, lam=new, mode=config.mode, iterations=it)
        lam = new
    raise NonConvergenceError(
        f"self-consistent lambda did not converge at R={r_sep}, T={t}",
        best_estimate=history[-1],
        history=history,
    )


def resolve_lambda(r_sep: float, t: float, config: ModelConfig) -> ThermalState:
    """lam at (R, T) under the configured mode."""
    kind = config.mode.kind
    if kind == "fixed_lambda":
        if not t > 0:
            raise DomainError(f"temperature must be positive, got {t}")
        return ThermalState(temperature=t, lam=config.mode.value, mode=config.mode)
    if kind == "fixed_epsilon":
        return lambda_of_t(t, calibrate(config))
    return lambda_self_consistent(r_sep, t, config)


def lambda_depends_on_r(config: ModelConfig) -> bool:
    return config.mode.kind == "self_consistent"


def boltzmann_amplitude(grid, t_profile, epsilon, n0):
    """Amplitude sqrt(n0 exp(-eps / k_B T(r))) at each grid node.

    Pass ``n0="normalize"`` to choose n0 so that the Simpson integral of A^2
    over the grid equals 1. Returns ``(amplitude, n0)``.
    """
    r = np.asarray(grid, dtype=float)
    t = np.broadcast_to(np.asarray(t_profile, dtype=float), r.shape)
    bad = np.flatnonzero(~(t > 0))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"non-positive temperature {t[i]} at node {i} (r={r[i]})")
    log_w = -epsilon / (K_B * t)
    if isinstance(n0, str):
        if n0 != "normalize":
            raise ValueError(f"n0 must be a number or 'normalize', got {n0!r}")
        shift = log_w.max()
        w = np.exp(log_w - shift)
        norm = simpson(w, x=r)
        amp = np.sqrt(w / norm)
        with np.errstate(over="ignore", under="ignore"):
            n0 = float(np.exp(-shift) / norm)
        return amp, n0
    if not n0 > 0:
        raise DomainError(f"n0 must be positive, got {n0}")
    with np.errstate(over="ignore"):
        amp = np.exp(0.5 * (math.log(n0) + log_w))
    if not np.all(np.isfinite(amp)):
        raise DomainError("Boltzmann amplitude overflows; use n0='normalize'")
    return amp, float(n0)
