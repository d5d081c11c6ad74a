"""H2+ worked example: parity energies, gauge potential, geometric phase,
effective potential and equilibrium bond length.

The electronic state is psi = C (psi_a +/- psi_b) built from 1s orbitals
with a temperature-dependent exponent. Nuclei sit at -R/2 and +R/2 and
derivatives with respect to R follow the symmetric stretch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import thermal
from .config import ModelConfig, NormConvention, Parity
from .errors import DomainError, NoMinimumError
from .integrals import (
    coulomb_pi,
    exchange_sigma,
    overlap_d2y,
    overlap_dy,
    overlap_dy_dlam,
    overlap_y,
)
from .numerics import adaptive_simpson, golden_section

ODD_MIN_SEPARATION = 1e-3
PHASE_TOL = 1e-9
BOND_BRACKET = (1.0, 6.0)
SCAN_POINTS = 200
BOND_TOL = 1e-5


@dataclass(frozen=True)
class ParityState:
    parity: Parity
    lam: float
    r_sep: float
    norm_factor: float
    squared_norm: float


@dataclass(frozen=True)
class GaugeSample:
    r_sep: float
    temperature: float
    gauge: float


@dataclass(frozen=True)
class PhaseResult:
    temperature: float
    r_m: float
    theta: float
    error_estimate: float = 0.0


@dataclass(frozen=True)
class EffectivePotentialSample:
    r_sep: float
    temperature: float
    v_eff: float
    epsilon_r: float
    metric_term: float
    gauge_sq_term: float


@dataclass(frozen=True)
class BondMinimum:
    r_min: float
    v_min: float


def _parity(p) -> Parity:
    return p if isinstance(p, Parity) else Parity(p)


def energy(parity, lam, r_sep):
    """E_+/- = 1/R - lam^2/2 + [lam(lam-1) - Pi +/- (lam-2) Sigma] / (1 +/- Y)."""
    s = _parity(parity).sign
    r = np.asarray(r_sep, dtype=float)
    if np.any(r <= 0):
        raise DomainError("energy needs R > 0")
    if s < 0 and np.any(r < ODD_MIN_SEPARATION):
        raise DomainError(f"odd-parity energy is singular as R -> 0 (R < {ODD_MIN_SEPARATION})")
    y = overlap_y(lam, r)
    e = 1.0 / r - 0.5 * lam * lam + (
        lam * (lam - 1.0) - coulomb_pi(lam, r) + s * (lam - 2.0) * exchange_sigma(lam, r)
    ) / (1.0 + s * y)
    return e if np.ndim(e) else float(e)


def _prefactor(s, convention, y, dy):
    """C and dC/dR given Y and dY/dR."""
    g = 2.0 + 2.0 * s * y
    if convention is NormConvention.UNNORMALIZED:
        return g, 2.0 * s * dy
    return g**-0.5, -s * dy * g**-1.5


def _squared_norm_slope(s, convention, y):
    """d<psi|psi>/dY."""
    if convention is NormConvention.UNNORMALIZED:
        return 6.0 * s * (2.0 + 2.0 * s * y) ** 2
    return np.zeros_like(np.asarray(y, dtype=float))


def parity_state(parity, lam, r_sep, convention=NormConvention.UNNORMALIZED) -> ParityState:
    parity = _parity(parity)
    s = parity.sign
    y = float(overlap_y(lam, r_sep))
    g = 2.0 + 2.0 * s * y
    if not g > 0:
        raise DomainError("odd combination vanishes at R = 0")
    c, _ = _prefactor(s, convention, y, 0.0)
    return ParityState(parity, lam, r_sep, norm_factor=float(c), squared_norm=float(c * c * g))


def _dlambda_dr(r_sep, t, config):
    """dlam/dR along the self-consistent branch, by implicit differentiation."""
    lam = thermal.resolve_lambda(r_sep, t, config).lam
    h = config.quadrature.fd_step
    ledger = thermal.calibrate(config)

    def f(l, r):
        return float(thermal.self_consistent_map(l, r, t, config, ledger))

    hr = min(h, 0.5 * r_sep)
    f_r = (f(lam, r_sep + hr) - f(lam, r_sep - hr)) / (2.0 * hr)
    f_l = (f(lam + h, r_sep) - f(lam - h, r_sep)) / (2.0 * h)
    return lam, f_r / (1.0 - f_l)


def connection(r_sep, t, config: ModelConfig) -> float:
    """Signed <psi|d/dR psi> = (1/2) d<psi|psi>/dR, total derivative in R."""
    if r_sep < 0:
        raise DomainError(f"R must be nonnegative, got {r_sep}")
    if not t > 0:
        raise DomainError(f"temperature must be positive, got {t}")
    if r_sep == 0:
        # dY/dR and dY/dlam both vanish at R = 0
        return 0.0
    if thermal.lambda_depends_on_r(config):
        lam, dlam = _dlambda_dr(r_sep, t, config)
        dy = overlap_dy(lam, r_sep) + overlap_dy_dlam(lam, r_sep) * dlam
    else:
        lam = thermal.resolve_lambda(r_sep, t, config).lam
        dy = overlap_dy(lam, r_sep)
    y = overlap_y(lam, r_sep)
    return float(0.5 * _squared_norm_slope(config.parity.sign, config.norm_convention, y) * dy)


def gauge_potential(r_sep, t, config: ModelConfig) -> GaugeSample:
    """Magnitude of the Berry connection i<psi|d/dR psi> of the parity state."""
    return GaugeSample(r_sep=r_sep, temperature=t, gauge=abs(connection(r_sep, t, config)))


def gauge_curve(r, t, config: ModelConfig):
    """Vectorized gauge potential for modes where lambda does not depend on R."""
    if thermal.lambda_depends_on_r(config):
        return np.array([gauge_potential(float(x), t, config).gauge for x in np.asarray(r)])
    r = np.asarray(r, dtype=float)
    lam = thermal.resolve_lambda(1.0, t, config).lam
    s = config.parity.sign
    y = overlap_y(lam, r)
    return np.abs(0.5 * _squared_norm_slope(s, config.norm_convention, y) * overlap_dy(lam, r))


def geometric_phase(t, r_m=None, config: ModelConfig | None = None, r_start=0.0) -> PhaseResult:
    """Integral of the gauge potential along R from ``r_start`` to ``r_m``."""
    config = config or ModelConfig()
    r_m = config.r_m if r_m is None else r_m
    if not t > 0:
        raise DomainError(f"temperature must be positive, got {t}")
    if r_m < 0:
        raise DomainError(f"r_m must be nonnegative, got {r_m}")
    if r_m == r_start:
        return PhaseResult(t, r_m, 0.0, 0.0)
    theta, err = adaptive_simpson(
        lambda x: gauge_potential(x, t, config).gauge,
        r_start,
        r_m,
        tol=PHASE_TOL,
        max_depth=config.quadrature.max_subdivisions,
    )
    return PhaseResult(t, r_m, theta, err)


def phase_endpoint_identity(lam, r_m, r_start=0.0, parity=Parity.EVEN):
    """Closed-form phase for R-independent lambda: half the drop of (2 +/- 2Y)^3."""
    s = _parity(parity).sign
    n = lambda r: (2.0 + 2.0 * s * float(overlap_y(lam, r))) ** 3  # noqa: E731
    return 0.5 * abs(n(r_start) - n(r_m))


def metric_inner(lam, r_sep, parity, convention):
    """<d/dR psi | d/dR psi> at frozen lambda.

    Mixed partial at R' = R of the kernel <psi(R)|psi(R')> =
    C(R) C(R') [2 S(|R - R'|/2) +/- 2 S((R + R')/2)], with S the 1s overlap
    as a function of center distance.
    """
    s = _parity(parity).sign
    y = overlap_y(lam, r_sep)
    dy = overlap_dy(lam, r_sep)
    d2y = overlap_d2y(lam, r_sep)
    g = 2.0 + 2.0 * s * y
    c, dc = _prefactor(s, convention, y, dy)
    return dc * dc * g + 2.0 * c * dc * s * dy + c * c * (lam * lam / 6.0 + 0.5 * s * d2y)


def metric_term(r_sep, t, config: ModelConfig) -> float:
    """(1/2M) <d/dR psi|d/dR psi>."""
    if not r_sep > 0:
        raise DomainError(f"metric term needs R > 0, got {r_sep}")
    lam = thermal.resolve_lambda(r_sep, t, config).lam
    return float(metric_inner(lam, r_sep, config.parity, config.norm_convention)) / (2.0 * config.mass)


def effective_potential(r_sep, t, config: ModelConfig) -> EffectivePotentialSample:
    if not t > 0:
        raise DomainError(f"temperature must be positive, got {t}")
    lam = thermal.resolve_lambda(r_sep, t, config).lam
    eps = energy(config.parity, lam, r_sep)
    metric = metric_term(r_sep, t, config)
    gauge = gauge_potential(r_sep, t, config).gauge
    gauge_sq = gauge * gauge / (2.0 * config.mass)
    return EffectivePotentialSample(
        r_sep=r_sep,
        temperature=t,
        v_eff=eps + metric - gauge_sq,
        epsilon_r=eps,
        metric_term=metric,
        gauge_sq_term=gauge_sq,
    )


def veff_curve(r, t, config: ModelConfig):
    """Vectorized effective potential; returns (v_eff, eps, metric, gauge_sq) arrays."""
    r = np.asarray(r, dtype=float)
    if thermal.lambda_depends_on_r(config):
        samples = [effective_potential(float(x), t, config) for x in r]
        cols = [[getattr(smp, k) for smp in samples] for k in ("v_eff", "epsilon_r", "metric_term", "gauge_sq_term")]
        return tuple(np.array(c) for c in cols)
    if np.any(r <= 0):
        raise DomainError("effective potential needs R > 0")
    lam = thermal.resolve_lambda(1.0, t, config).lam
    eps = energy(config.parity, lam, r)
    metric = metric_inner(lam, r, config.parity, config.norm_convention) / (2.0 * config.mass)
    gauge = gauge_curve(r, t, config)
    gauge_sq = gauge * gauge / (2.0 * config.mass)
    return eps + metric - gauge_sq, eps, metric, gauge_sq


def minimize_bond(t, config: ModelConfig, bracket=BOND_BRACKET, scan_points=SCAN_POINTS, tol=BOND_TOL) -> BondMinimum:
    """Scan V_eff on ``bracket``, then refine the lowest interior point by golden section."""
    lo, hi = bracket
    grid = np.linspace(lo, hi, scan_points)
    values = veff_curve(grid, t, config)[0]
    i = int(np.argmin(values))
    if i == 0 or i == scan_points - 1:
        raise NoMinimumError(
            f"V_eff has no interior minimum on [{lo}, {hi}] at T={t} ({config.parity.value} parity)",
            bracket=(lo, hi),
        )
    r_min, v_min = golden_section(
        lambda x: effective_potential(x, t, config).v_eff, grid[i - 1], grid[i + 1], tol
    )
    return BondMinimum(r_min=float(r_min), v_min=float(v_min))
