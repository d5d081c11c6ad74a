"""Closed-form two-center integrals over scaled hydrogenic 1s orbitals.

Orbitals are ``lam**1.5 / sqrt(pi) * exp(-lam * r)`` centered on nuclei at
-R/2 and +R/2. All functions broadcast over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class OrbitalPair:
    lam: float
    r_sep: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"orbital exponent must be positive, got {self.lam}")
        if not self.r_sep >= 0:
            raise DomainError(f"internuclear distance must be nonnegative, got {self.r_sep}")

    def integrals(self) -> IntegralSet:
        return IntegralSet(
            y=float(overlap_y(self.lam, self.r_sep)),
            pi_c=float(coulomb_pi(self.lam, self.r_sep)),
            sigma_x=float(exchange_sigma(self.lam, self.r_sep)),
            r_limit=self.r_sep == 0,
        )


@dataclass(frozen=True)
class IntegralSet:
    """Overlap Y, Coulomb Pi and exchange Sigma at one (lambda, R).

    ``r_limit`` is set when R = 0 and Pi is the analytic limit value.
    """

    y: float
    pi_c: float
    sigma_x: float
    r_limit: bool = False


def overlap_y(lam, r_sep):
    """<psi_a|psi_b> = exp(-x) (1 + x + x^2/3) with x = lam R."""
    x = np.multiply(lam, r_sep)
    return np.exp(-x) * (1.0 + x + x * x / 3.0)


def overlap_dy(lam, r_sep):
    """dY/dR at fixed lambda."""
    x = np.multiply(lam, r_sep)
    return -lam * (x / 3.0) * (1.0 + x) * np.exp(-x)


def overlap_d2y(lam, r_sep):
    """d^2Y/dR^2 at fixed lambda."""
    x = np.multiply(lam, r_sep)
    return lam * lam * (x * x - x - 1.0) / 3.0 * np.exp(-x)


def overlap_dy_dlam(lam, r_sep):
    """dY/dlambda at fixed R."""
    x = np.multiply(lam, r_sep)
    return -r_sep * (x / 3.0) * (1.0 + x) * np.exp(-x)


def coulomb_pi(lam, r_sep):
    """<psi_a|1/r_b|psi_a> = (1/R) [1 - (1 + x) exp(-2x)]; equals lam at R = 0."""
    lam = np.asarray(lam, dtype=float)
    r = np.asarray(r_sep, dtype=float)
    if np.any(r < 0):
        raise DomainError("internuclear distance must be nonnegative")
    x = lam * r
    safe_r = np.where(r > 0, r, 1.0)
    # -expm1 keeps the leading 2x exact for small x
    val = (-np.expm1(-2.0 * x) - x * np.exp(-2.0 * x)) / safe_r
    out = np.where(r > 0, val, lam)
    return out if out.ndim else float(out)


def coulomb_pi_printed(lam, r_sep):
    """Coulomb term with the growing exponential exp(+2 lam R).

    Kept only so the verification suite can show it disagrees with
    quadrature; not used by the model.
    """
    x = np.multiply(lam, r_sep)
    with np.errstate(over="ignore"):
        return (1.0 - (1.0 + x) * np.exp(2.0 * x)) / r_sep


def exchange_sigma(lam, r_sep):
    """<psi_a|1/r_a|psi_b> = lam (1 + x) exp(-x)."""
    x = np.multiply(lam, r_sep)
    return lam * (1.0 + x) * np.exp(-x)
