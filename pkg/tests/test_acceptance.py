"""Acceptance criteria, one summary line each (split into sub-checks where a
criterion bundles independent claims)."""

import numpy as np
import pytest

from thermophase import LambdaMode, ModelConfig, NormConvention, Parity, h2plus, thermal, wkb
from thermophase import reports
from thermophase.cli import main
from thermophase.integrals import overlap_y

DEFAULT = ModelConfig()
FIXED1 = ModelConfig(mode=LambdaMode.fixed_lambda(1.0))
TEMPS = (100.0, 200.0, 300.0)

INTEGRAL_TOL = 1e-6
ENERGY_TOL = 1e-6
DISSOCIATION_TOL = 1e-3
VEFF_TAIL_TOL = 1e-6
GAUGE_FD_TOL = 1e-8
GAUGE_TAIL_FRACTION = 0.01
PHASE_TOL = 1e-8
NULL_TOL = 1e-12
BOND_RANGE = (1.9, 2.3)
REFERENCE_MINIMA = {100.0: 2.10, 200.0: 2.12, 300.0: 2.15}
REFERENCE_WINDOW = 0.1
DENSE_SCAN_TOL = 1e-4
ORDER_GAIN = 0.8
S0_ORDER = 3.8


@pytest.fixture(scope="module")
def report():
    return reports.verify(DEFAULT)


@pytest.fixture(scope="module")
def gauge_curves():
    r = np.array(reports.value_grid(0.0, 8.0, 0.01))
    return r, {t: h2plus.gauge_curve(r, t, DEFAULT) for t in TEMPS}


@pytest.fixture(scope="module")
def default_minima():
    return {t: h2plus.minimize_bond(t, DEFAULT).r_min for t in TEMPS}


@pytest.mark.parametrize("name", ["Y", "Pi", "Sigma"])
def test_c01_closed_forms_match_quadrature(report, criterion, name):
    c = report[f"integral {name} vs quadrature"]
    criterion(f"1 {name} vs quadrature (4x20 grid)", c.value <= INTEGRAL_TOL, f"max dev {c.value:.2e}, limit {INTEGRAL_TOL:g}")


def test_c01_printed_coulomb_exponent_fails(report, criterion):
    c = report["printed Pi exponent rejected"]
    criterion("1 printed Pi exponent fails the oracle", c.value > INTEGRAL_TOL, f"max dev {c.value:.2e}, must exceed {INTEGRAL_TOL:g}")


def test_c02_energy_matches_hamiltonian_elements(report, criterion):
    c = report["E+ vs Hamiltonian elements"]
    criterion("2 E+ vs oracle matrix elements", c.value <= ENERGY_TOL, f"max dev {c.value:.2e}, limit {ENERGY_TOL:g}")


def test_c03_energies_dissociate(criterion):
    dev = max(abs(h2plus.energy(p, 1.0, 1000.0) + 0.5) for p in Parity)
    criterion("3 E+/-(1, 1000) = -0.5", dev <= DISSOCIATION_TOL, f"max dev {dev:.2e}, limit {DISSOCIATION_TOL:g}")


def test_c03_effective_potential_tail(criterion):
    devs = []
    for t in TEMPS:
        lam = thermal.resolve_lambda(100.0, t, DEFAULT).lam
        devs.append(abs(h2plus.effective_potential(100.0, t, DEFAULT).v_eff - (0.5 * lam * lam - lam)))
    dev = max(devs)
    criterion("3 V_eff(100) vs lam^2/2 - lam", dev <= VEFF_TAIL_TOL, f"max dev {dev:.2e}, limit {VEFF_TAIL_TOL:g}")


def test_c04_gauge_matches_finite_differences(criterion):
    dev = reports.gauge_fd_deviation(DEFAULT, TEMPS, np.linspace(0.1, 8.0, 200))
    criterion("4 gauge vs finite differences", dev <= GAUGE_FD_TOL, f"max dev {dev:.2e}, limit {GAUGE_FD_TOL:g}")


def test_c04_gauge_zero_at_origin(gauge_curves, criterion):
    _, curves = gauge_curves
    g0 = max(c[0] for c in curves.values())
    criterion("4 gauge(0) = 0", g0 == 0.0, f"max gauge(0) = {g0:g}")


@pytest.mark.parametrize("t", TEMPS)
def test_c04_gauge_tail(gauge_curves, criterion, t):
    r, curves = gauge_curves
    ratio = curves[t][r == 8.0][0] / curves[t].max()
    criterion(f"4 gauge(8)/max at {t:g} K", ratio < GAUGE_TAIL_FRACTION, f"ratio {ratio:.4f}, limit {GAUGE_TAIL_FRACTION}")


def test_c05_gauge_maximum_falls_with_temperature(gauge_curves, criterion):
    _, curves = gauge_curves
    peaks = [curves[t].max() for t in TEMPS]
    ok = peaks[0] > peaks[1] > peaks[2]
    criterion("5 max gauge decreasing 100>200>300 K", ok, ", ".join(f"{p:.6f}" for p in peaks))


def test_c06_phase_endpoint_identity(report, criterion):
    c = report["phase endpoint identity"]
    criterion("6 theta vs endpoint identity (5 T)", c.value <= PHASE_TOL, f"max dev {c.value:.2e}, limit {PHASE_TOL:g}")


def test_c06_normalized_gauge_null(report, criterion):
    c = report["normalized gauge vanishes"]
    criterion("6 normalized gauge null", c.value <= NULL_TOL, f"max {c.value:.2e}, limit {NULL_TOL:g}")


def test_c07_phase_decreasing(report, criterion):
    thetas = reports.sweep_phase(150.0, 300.0, 5.0, DEFAULT.r_m, DEFAULT).column("theta")
    ok = all(b < a for a, b in zip(thetas, thetas[1:])) and len(thetas) == 31
    documented = reports.LOW_T_EXCLUSION_NOTE in report.notes and "note:" in report.table()
    criterion("7 theta(T) decreasing on [150,300] K, 100 K exclusion documented", ok and documented,
              f"{len(thetas)} samples, note in verify output: {documented}")


def test_c08_minima_ordering(default_minima, criterion):
    r = [default_minima[t] for t in TEMPS]
    criterion("8 r_min(100) < r_min(200) < r_min(300)", r[0] < r[1] < r[2], ", ".join(f"{x:.4f}" for x in r))


@pytest.mark.parametrize("t", TEMPS)
def test_c08_minimum_in_range(default_minima, criterion, t):
    lo, hi = BOND_RANGE
    r = default_minima[t]
    criterion(f"8 r_min({t:g} K) in [{lo}, {hi}]", lo <= r <= hi, f"r_min = {r:.4f}")


def test_c08_calibration_note(criterion):
    cfg = DEFAULT.replace(**reports.REFERENCE_CALIBRATION)
    devs = {t: h2plus.minimize_bond(t, cfg).r_min - REFERENCE_MINIMA[t] for t in TEMPS}
    worst = max(abs(d) for d in devs.values())
    criterion("8 calibration note within 0.1 bohr of 2.10/2.12/2.15", worst <= REFERENCE_WINDOW,
              f"{reports.REFERENCE_CALIBRATION}, max dev {worst:.4f}")


def test_c08_odd_parity_has_no_minimum(criterion):
    res, all_failed = reports.minimize_table(TEMPS, DEFAULT.replace(parity=Parity.ODD), bracket=(0.5, 20.0))
    statuses = res.column("status")
    criterion("8 odd parity: no minimum on [0.5, 20]", all_failed, f"statuses {statuses}")


@pytest.mark.parametrize("cfg,label", [(FIXED1, "fixed lambda=1"), (DEFAULT, "default 200 K")])
def test_c09_minimizer_matches_dense_scan(criterion, cfg, label):
    grid = np.linspace(1.0, 6.0, 100_001)
    dense = grid[int(np.argmin(h2plus.veff_curve(grid, 200.0, cfg)[0]))]
    dev = abs(h2plus.minimize_bond(200.0, cfg).r_min - dense)
    criterion(f"9 golden section vs 1e5 scan ({label})", dev <= DENSE_SCAN_TOL, f"dev {dev:.2e}, limit {DENSE_SCAN_TOL:g}")


def test_c10_first_order_raises_residual_order(report, criterion):
    c = report["WKB order gain with S1"]
    criterion("10 residual order gain from S1", c.value >= ORDER_GAIN, f"gain {c.value:.3f}, minimum {ORDER_GAIN}")


def test_c10_action_grid_convergence(criterion):
    ns = np.array([101, 201, 401, 801, 1601])
    errs = []
    for n in ns:
        grid = wkb.RadialGrid.uniform(0.0, 0.9, int(n))
        p = wkb.WkbProblem(grid, grid.nodes, 1.0)
        exact = (2.0 / 3.0) * (1.0 - (1.0 - grid.nodes) ** 1.5)
        errs.append(np.max(np.abs(wkb.solve_s0(p) - exact)))
    order = -np.polyfit(np.log(ns - 1), np.log(errs), 1)[0]
    criterion("10 s0 grid convergence order", order >= S0_ORDER, f"fitted order {order:.3f}, minimum {S0_ORDER}")


SWEEPS = {
    "gauge": ["sweep", "gauge"],
    "phase": ["sweep", "phase"],
    "veff": ["sweep", "veff"],
    "lambda": ["sweep", "lambda"],
    "minimize": ["minimize"],
}


@pytest.mark.parametrize("kind", list(SWEEPS))
def test_c11_sweeps_are_byte_identical(tmp_path, criterion, kind):
    outs = []
    for i, workers in enumerate(("1", "1", "2")):
        path = tmp_path / f"{i}.csv"
        extra = ["--workers", workers] if kind != "lambda" and kind != "minimize" else []
        assert main(SWEEPS[kind] + extra + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    same = outs[0] == outs[1] == outs[2]
    criterion(f"11 {kind} output deterministic", same, f"{len(outs[0])} bytes")


def test_default_config_verifies(report):
    assert report.exit_code == 0, report.table()
