"""Brute-force quadrature oracle for the two-center integrals.

Integrands are ordinary Cartesian functions f(x, y, z). They are integrated
in prolate spheroidal coordinates (mu, nu, phi) whose foci sit on the two
orbital centers, so the 1/r singularities and exponential cusps become
smooth. mu in [1, inf) is mapped onto s in [0, 1) by
mu = 1 + c s / (1 - s). Composite Gauss-Legendre panels in s and nu are
doubled until two successive estimates agree; phi uses the periodic
trapezoid rule.

Nothing here uses the closed forms of :mod:`thermophase.integrals`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import QuadratureSettings
from .errors import DomainError, NonConvergenceError

MIN_SEPARATION = 0.1
GOLDEN_PATH = Path(__file__).with_name("data") / "golden_oracle.csv"

_GL_ORDER = 16
_N_PHI = 4
_MAX_LEVEL = 6

_gl_x, _gl_w = np.polynomial.legendre.leggauss(_GL_ORDER)


def _composite_gauss(lo, hi, panels):
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _gl_x[None, :]).ravel()
    weights = (half[:, None] * _gl_w[None, :]).ravel()
    return nodes, weights


def _prolate_estimate(f, d, scale, panels):
    s, ws = _composite_gauss(0.0, 1.0, panels)
    nu, wn = _composite_gauss(-1.0, 1.0, panels)
    phi = 2.0 * np.pi * np.arange(_N_PHI) / _N_PHI
    wphi = 2.0 * np.pi / _N_PHI

    mu = 1.0 + scale * s / (1.0 - s)
    dmu = scale / (1.0 - s) ** 2

    M, N, P = np.meshgrid(mu, nu, phi, indexing="ij")
    half = 0.5 * d
    rho = half * np.sqrt(np.maximum((M * M - 1.0) * (1.0 - N * N), 0.0))
    x = rho * np.cos(P)
    y = rho * np.sin(P)
    z = half * M * N
    jac = half**3 * (M * M - N * N)
    vals = f(x, y, z) * jac
    w = (ws * dmu)[:, None, None] * wn[None, :, None] * wphi
    return float(np.sum(vals * w))


def prolate_integrate(f, d, decay, quad=None):
    """Integrate ``f(x, y, z)`` over space with foci at z = -d/2 and z = +d/2.

    ``decay`` is the exponential decay rate of the integrand along mu in units
    of the focal distance (for 1s products with exponent lam this is lam).
    Returns ``(value, error_estimate)``.
    """
    quad = quad or QuadratureSettings()
    if not d > 0:
        raise DomainError("prolate quadrature needs distinct foci")
    scale = 1.0 / max(decay * d, 1e-300)
    levels = min(quad.max_subdivisions, _MAX_LEVEL + 1)
    prev = None
    err = math.inf
    for level in range(levels):
        cur = _prolate_estimate(f, d, scale, 2**level)
        if prev is not None:
            err = abs(cur - prev)
            if err <= max(quad.abs_tol, quad.rel_tol * abs(cur)):
                return cur, err
        prev = cur
    raise NonConvergenceError(
        f"prolate quadrature did not converge within {levels} level(s)",
        best_estimate=prev,
        error_bound=err,
    )


def _orbital(lam, center_z):
    norm = lam**1.5 / math.sqrt(math.pi)

    def psi(x, y, z):
        return norm * np.exp(-lam * np.sqrt(x * x + y * y + (z - center_z) ** 2))

    return psi


def _dist(center_z):
    def r(x, y, z):
        return np.sqrt(x * x + y * y + (z - center_z) ** 2)

    return r


def _check(r_sep):
    if not r_sep >= MIN_SEPARATION:
        raise DomainError(
            f"oracle needs R >= {MIN_SEPARATION} bohr (foci coincide as R -> 0), got {r_sep}"
        )


def overlap_at(lam, d, quad=None):
    """Overlap of two lam-orbitals a distance ``d`` apart, any d > 0.

    Used internally by finite-difference checks that need tiny separations;
    the public oracles refuse R < 0.1.
    """
    psi_a, psi_b = _orbital(lam, -0.5 * d), _orbital(lam, 0.5 * d)
    return prolate_integrate(lambda x, y, z: psi_a(x, y, z) * psi_b(x, y, z), d, lam, quad)[0]


def oracle_overlap(lam, r_sep, quad=None):
    _check(r_sep)
    return overlap_at(lam, r_sep, quad)


def oracle_coulomb(lam, r_sep, quad=None):
    """<psi_a| 1/r_b |psi_a> by quadrature."""
    _check(r_sep)
    psi_a, r_b = _orbital(lam, -0.5 * r_sep), _dist(0.5 * r_sep)
    return prolate_integrate(
        lambda x, y, z: psi_a(x, y, z) ** 2 / r_b(x, y, z), r_sep, lam, quad
    )[0]


def oracle_exchange(lam, r_sep, quad=None):
    """<psi_a| 1/r_a |psi_b> by quadrature."""
    _check(r_sep)
    psi_a, psi_b = _orbital(lam, -0.5 * r_sep), _orbital(lam, 0.5 * r_sep)
    r_a = _dist(-0.5 * r_sep)
    return prolate_integrate(
        lambda x, y, z: psi_a(x, y, z) * psi_b(x, y, z) / r_a(x, y, z), r_sep, lam, quad
    )[0]


@dataclass(frozen=True)
class HamiltonianElements:
    h_aa: float
    h_ab: float


def oracle_hamiltonian_elements(lam, r_sep, quad=None) -> HamiltonianElements:
    """<psi_a|H_e|psi_a> and <psi_a|H_e|psi_b> for H_e = -lap/2 - 1/r_a - 1/r_b.

    The Laplacian acts analytically on the ket: -lap/2 psi = (-lam^2/2 + lam/r) psi.
    """
    _check(r_sep)
    half = 0.5 * r_sep
    psi_a, psi_b = _orbital(lam, -half), _orbital(lam, half)
    r_a, r_b = _dist(-half), _dist(half)

    def h_on(psi, r_c):
        def out(x, y, z):
            ra, rb, rc = r_a(x, y, z), r_b(x, y, z), r_c(x, y, z)
            return (-0.5 * lam * lam + lam / rc - 1.0 / ra - 1.0 / rb) * psi(x, y, z)

        return out

    h_psi_a, h_psi_b = h_on(psi_a, r_a), h_on(psi_b, r_b)
    h_aa = prolate_integrate(lambda x, y, z: psi_a(x, y, z) * h_psi_a(x, y, z), r_sep, lam, quad)[0]
    h_ab = prolate_integrate(lambda x, y, z: psi_a(x, y, z) * h_psi_b(x, y, z), r_sep, lam, quad)[0]
    return HamiltonianElements(h_aa, h_ab)


def golden_points():
    """(lambda, R) points whose oracle values are frozen in the golden file."""
    return [(1.0, 1.5), (1.0, 2.0), (1.0, 2.5), (1.0, 3.0), (1.2, 2.0)]


def read_golden(path=GOLDEN_PATH):
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            {
                "lambda": float(row["lambda"]),
                "R": float(row["R"]),
                "quantity": row["quantity"],
                "value": float(row["value"]),
                "tolerance": float(row["tolerance"]),
            }
            for row in csv.DictReader(fh)
        ]


def write_golden(rows, path=GOLDEN_PATH):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "R", "quantity", "value", "tolerance"])
        for r in rows:
            w.writerow([repr(r["lambda"]), repr(r["R"]), r["quantity"], f"{r['value']:.17g}", repr(r["tolerance"])])


def metric_kernel_oracle(lam, r_sep, parity_sign=1, normalized=False, h=1e-3, quad=None):
    """<d/dR psi|d/dR psi> as the mixed partial of <psi(R)|psi(R')> at R' = R.

    Every overlap in the kernel, including the one inside the prefactor, is
    taken from quadrature. The mixed partial uses central differences with
    one Richardson step in ``h``.
    """
    quad = quad or QuadratureSettings(rel_tol=1e-14, abs_tol=1e-15)
    cache = {}

    def s_q(d):
        d = abs(d)
        if d == 0:
            return 1.0  # a normalized orbital with itself
        if d not in cache:
            cache[d] = overlap_at(lam, d, quad)
        return cache[d]

    def prefactor(r):
        g = 2.0 + 2.0 * parity_sign * s_q(r)
        return g**-0.5 if normalized else g

    def kernel(r1, r2):
        return prefactor(r1) * prefactor(r2) * (
            2.0 * s_q(0.5 * (r1 - r2)) + 2.0 * parity_sign * s_q(0.5 * (r1 + r2))
        )

    def mixed(step):
        r = r_sep
        return (
            kernel(r + step, r + step)
            - kernel(r + step, r - step)
            - kernel(r - step, r + step)
            + kernel(r - step, r - step)
        ) / (4.0 * step * step)

    return (4.0 * mixed(0.5 * h) - mixed(h)) / 3.0
