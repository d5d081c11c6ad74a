"""Order-by-order semiclassical expansion on a 1-D grid.

The wavefunction is written phi = A exp(i S / hbar) with
S = S0 + (hbar/i) S1 + (hbar/i)^2 S2. Inserting this into the single
particle equation (kinetic prefactor 2m = 1 unless a mass is given) and
collecting powers of hbar gives

    |S0'|^2 = eps - V
    S1' = -(A S0'' + 2 A' S0') / (2 A S0')
    S2' = -(A'' + 2 A' S1' + A S1'^2 + A S1'') / (2 A S0')

Each gradient is known pointwise; the actions follow by cumulative
Simpson quadrature from the first node. Derivatives use second-order
centered differences with one-sided second-order stencils at the ends.
Turning points are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import DomainError, ForbiddenRegionError, TurningPointError

FORBIDDEN_MARGIN = 1e-12
TURNING_POINT_THRESHOLD = 1e-10


@dataclass(frozen=True)
class RadialGrid:
    nodes: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.nodes, dtype=float)
        if r.ndim != 1 or r.size < 3:
            raise DomainError("grid needs at least 3 nodes")
        if not np.all(np.isfinite(r)):
            raise DomainError("grid nodes must be finite")
        if not np.all(np.diff(r) > 0):
            raise DomainError("grid nodes must be strictly increasing")
        object.__setattr__(self, "nodes", r)

    @classmethod
    def uniform(cls, start, stop, n):
        return cls(np.linspace(start, stop, n))


@dataclass(frozen=True)
class WkbProblem:
    """Potential, energy and amplitude on a grid.

    ``mass`` switches |S0'|^2 = eps - V to |S0'|^2 = 2m (eps - V); the
    default ``None`` keeps the 2m = 1 convention.
    """

    grid: RadialGrid
    potential: np.ndarray
    epsilon: float
    amplitude: np.ndarray | None = None
    mass: float | None = None

    def __post_init__(self):
        n = self.grid.nodes.size
        v = np.broadcast_to(np.asarray(self.potential, dtype=float), (n,)).copy()
        object.__setattr__(self, "potential", v)
        a = np.ones(n) if self.amplitude is None else np.broadcast_to(
            np.asarray(self.amplitude, dtype=float), (n,)
        ).copy()
        if not np.all(a > 0):
            raise DomainError("amplitude must be positive at every node")
        object.__setattr__(self, "amplitude", a)
        if self.mass is not None and not self.mass > 0:
            raise DomainError("mass must be positive")

    @property
    def r(self):
        return self.grid.nodes

    @property
    def kinetic(self):
        """eps - V, scaled by 2m when a mass is set."""
        k = self.epsilon - self.potential
        return k if self.mass is None else 2.0 * self.mass * k


@dataclass(frozen=True)
class WkbSolution:
    """Action orders with their gradients.

    ``order`` is the highest order kept (0, 1 or 2); omitted orders are zero.
    """

    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    ds0: np.ndarray
    ds1: np.ndarray
    ds2: np.ndarray
    order: int = 2
    residual_norm: float | None = None


def _spacing(r):
    """Scalar step for uniform grids so constants differentiate to exactly zero."""
    d = np.diff(r)
    step = (r[-1] - r[0]) / (r.size - 1)
    return step if np.allclose(d, step, rtol=1e-9, atol=0.0) else r


def _grad(f, r):
    return np.gradient(f, _spacing(r), edge_order=2)


def _integrate(df, r):
    return cumulative_simpson(df, x=r, initial=0.0)


def action_gradient_s0(p: WkbProblem, strict: bool = True):
    """S0' = sqrt(eps - V); ``strict`` also rejects nodes within the margin of V."""
    kin = p.kinetic
    margin = 0.0
    if strict:
        margin = FORBIDDEN_MARGIN if p.mass is None else 2.0 * p.mass * FORBIDDEN_MARGIN
    bad = np.flatnonzero(kin < margin)
    if bad.size:
        i = int(bad[0])
        raise ForbiddenRegionError(
            f"classically forbidden node {i} (r={p.r[i]}): eps - V = {kin[i]:.3g}", node=i
        )
    return np.sqrt(kin)


def _check_turning_point(ds0, r):
    bad = np.flatnonzero(np.abs(ds0) <= TURNING_POINT_THRESHOLD)
    if bad.size:
        i = int(bad[0])
        raise TurningPointError(f"turning point at node {i} (r={r[i]}): S0' = {ds0[i]:.3g}", node=i)


def _ds1(p, ds0):
    a, r = p.amplitude, p.r
    return -(a * _grad(ds0, r) + 2.0 * _grad(a, r) * ds0) / (2.0 * a * ds0)


def _ds2(p, ds0, ds1):
    a, r = p.amplitude, p.r
    da = _grad(a, r)
    d2a = _grad(da, r)
    return -(d2a + 2.0 * da * ds1 + a * ds1 * ds1 + a * _grad(ds1, r)) / (2.0 * a * ds0)


def _regular_ds0(p):
    ds0 = action_gradient_s0(p, strict=False)
    _check_turning_point(ds0, p.r)
    return ds0


def solve_s0(p: WkbProblem):
    """Zeroth-order action, s0(first node) = 0. A turning point is allowed here."""
    return _integrate(action_gradient_s0(p, strict=False), p.r)


def solve_s1(p: WkbProblem):
    """First-order action (a real amplitude correction in this convention)."""
    ds0 = _regular_ds0(p)
    return _integrate(_ds1(p, ds0), p.r)


def solve_s2(p: WkbProblem):
    ds0 = _regular_ds0(p)
    return _integrate(_ds2(p, ds0, _ds1(p, ds0)), p.r)


def solve(p: WkbProblem, order: int = 2, hbar: float | None = None) -> WkbSolution:
    """All action orders up to ``order``; fills ``residual_norm`` when ``hbar`` is given."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    r = p.r
    ds0 = action_gradient_s0(p, strict=False)
    zeros = np.zeros_like(r)
    ds1 = ds2 = zeros
    if order >= 1:
        ds1 = _ds1(p, _regular_ds0(p))
    if order >= 2:
        ds2 = _ds2(p, ds0, ds1)
    sol = WkbSolution(
        s0=_integrate(ds0, r),
        s1=_integrate(ds1, r) if order >= 1 else zeros,
        s2=_integrate(ds2, r) if order >= 2 else zeros,
        ds0=ds0,
        ds1=ds1,
        ds2=ds2,
        order=order,
    )
    if hbar is not None:
        sol = WkbSolution(**{**sol.__dict__, "residual_norm": residual(p, sol, hbar)})
    return sol


def residual(p: WkbProblem, sol: WkbSolution, hbar: float) -> float:
    """Max-norm over interior nodes of the full equation evaluated with truncated S.

    The residual is
    -hbar^2 A'' - 2i hbar A' S' + A S'^2 - i hbar A S'' - (eps - V) A
    with S' = S0' - i hbar S1' - hbar^2 S2'.
    """
    r, a = p.r, p.amplitude
    ds = sol.ds0 - 1j * hbar * sol.ds1 - hbar**2 * sol.ds2
    d2s = _grad(sol.ds0, r) - 1j * hbar * _grad(sol.ds1, r) - hbar**2 * _grad(sol.ds2, r)
    da = _grad(a, r)
    d2a = _grad(da, r)
    res = -(hbar**2) * d2a - 2j * hbar * da * ds + a * ds * ds - 1j * hbar * a * d2s - p.kinetic * a
    return float(np.max(np.abs(res[1:-1])))


def assemble_wavefunction(p: WkbProblem, sol: WkbSolution, hbar: float):
    """phi = A exp(i s0 / hbar) exp(s1) exp(-i hbar s2)."""
    return p.amplitude * np.exp(1j * sol.s0 / hbar + sol.s1 - 1j * hbar * sol.s2)


def convergence_order(p: WkbProblem, order: int, hbars=(1e-1, 1e-2, 1e-3, 1e-4)) -> float:
    """Least-squares slope of log(residual) against log(hbar)."""
    sol = solve(p, order)
    res = [residual(p, sol, h) for h in hbars]
    slope, _ = np.polyfit(np.log(hbars), np.log(res), 1)
    return float(slope)
