import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermophase import (
    DomainError,
    LambdaMode,
    ModelConfig,
    NoMinimumError,
    NormConvention,
    Parity,
    h2plus,
    oracle,
    thermal,
)
from thermophase.integrals import overlap_y

FIXED1 = ModelConfig(mode=LambdaMode.fixed_lambda(1.0))
SC = ModelConfig(mode=LambdaMode("self_consistent"))


def test_even_energy_dissociates_to_hydrogen():
    assert h2plus.energy(Parity.EVEN, 1.0, 1000.0) == pytest.approx(-0.5, abs=1e-3)
    assert h2plus.energy(Parity.ODD, 1.0, 1000.0) == pytest.approx(-0.5, abs=1e-3)


def test_even_energy_matches_hamiltonian_elements():
    h = oracle.oracle_hamiltonian_elements(1.0, 2.5)
    y = oracle.oracle_overlap(1.0, 2.5)
    assert h2plus.energy(Parity.EVEN, 1.0, 2.5) == pytest.approx((h.h_aa + h.h_ab) / (1 + y) + 1 / 2.5, abs=1e-6)


def test_odd_energy_matches_hamiltonian_elements():
    h = oracle.oracle_hamiltonian_elements(1.0, 2.0)
    y = oracle.oracle_overlap(1.0, 2.0)
    assert h2plus.energy(Parity.ODD, 1.0, 2.0) == pytest.approx((h.h_aa - h.h_ab) / (1 - y) + 1 / 2.0, abs=1e-6)


def test_odd_energy_has_no_interior_minimum():
    e = h2plus.energy(Parity.ODD, 1.0, np.linspace(1.0, 20.0, 2000))
    assert np.all(np.diff(e) < 0)
    assert e[-1] > -0.5


def test_energy_domain():
    with pytest.raises(DomainError):
        h2plus.energy(Parity.EVEN, 1.0, 0.0)
    with pytest.raises(DomainError):
        h2plus.energy(Parity.ODD, 1.0, 1e-4)


def test_gauge_vanishes_at_coalescence(config):
    for t in (50.0, 200.0, 400.0):
        assert h2plus.gauge_potential(0.0, t, config).gauge == 0.0


def test_gauge_vanishes_at_large_separation(config):
    assert h2plus.gauge_potential(50.0, 200.0, config).gauge < 1e-15


def test_gauge_input_domain(config):
    with pytest.raises(DomainError):
        h2plus.gauge_potential(-1.0, 200.0, config)
    with pytest.raises(DomainError):
        h2plus.gauge_potential(1.0, 0.0, config)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 8.0), st.floats(80.0, 400.0), st.sampled_from(Parity))
def test_gauge_is_half_slope_of_squared_norm(r, t, parity):
    cfg = ModelConfig(parity=parity)
    lam = thermal.resolve_lambda(r, t, cfg).lam
    h = 1e-5

    def norm(x):
        return h2plus.parity_state(parity, lam, x).squared_norm

    fd = 0.5 * (norm(r + h) - norm(r - h)) / (2 * h)
    assert h2plus.gauge_potential(r, t, cfg).gauge == pytest.approx(abs(fd), abs=1e-8)


@pytest.mark.parametrize("r,t", [(1.0, 100.0), (2.5, 200.0), (4.0, 300.0)])
def test_self_consistent_gauge_includes_lambda_drift(r, t):
    h = 1e-4

    def norm(x):
        lam = thermal.lambda_self_consistent(x, t, SC).lam
        return h2plus.parity_state(Parity.EVEN, lam, x).squared_norm

    fd = 0.5 * (norm(r + h) - norm(r - h)) / (2 * h)
    assert h2plus.connection(r, t, SC) == pytest.approx(fd, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 10.0), st.floats(50.0, 400.0), st.sampled_from(Parity))
def test_normalized_gauge_is_null(r, t, parity):
    cfg = ModelConfig(parity=parity, norm_convention=NormConvention.NORMALIZED)
    assert h2plus.gauge_potential(r, t, cfg).gauge <= 1e-12


def test_gauge_curve_matches_pointwise(config):
    r = np.linspace(0.0, 8.0, 33)
    pointwise = [h2plus.gauge_potential(float(x), 150.0, config).gauge for x in r]
    assert np.allclose(h2plus.gauge_curve(r, 150.0, config), pointwise, rtol=1e-14, atol=0)


def test_phase_of_empty_path(config):
    assert h2plus.geometric_phase(200.0, 0.0, config).theta == 0.0


@pytest.mark.parametrize("t", [100.0, 200.0, 300.0])
def test_phase_endpoint_identity(config, t):
    lam = thermal.resolve_lambda(1.0, t, config).lam
    expected = 0.5 * (64.0 - (2.0 + 2.0 * float(overlap_y(lam, 5.0))) ** 3)
    assert h2plus.geometric_phase(t, 5.0, config).theta == pytest.approx(expected, abs=1e-8)
    assert h2plus.phase_endpoint_identity(lam, 5.0) == pytest.approx(expected, abs=1e-14)


def test_phase_is_additive_along_the_path(config):
    whole = h2plus.geometric_phase(200.0, 6.0, config).theta
    first = h2plus.geometric_phase(200.0, 2.0, config).theta
    rest = h2plus.geometric_phase(200.0, 6.0, config, r_start=2.0).theta
    assert first + rest == pytest.approx(whole, abs=1e-8)


def test_phase_decreases_with_temperature(config):
    thetas = [h2plus.geometric_phase(t, None, config).theta for t in np.arange(150.0, 301.0, 25.0)]
    assert all(b < a for a, b in zip(thetas, thetas[1:]))


def test_odd_phase_identity():
    cfg = ModelConfig(parity=Parity.ODD)
    lam = thermal.resolve_lambda(1.0, 200.0, cfg).lam
    got = h2plus.geometric_phase(200.0, 5.0, cfg, r_start=0.5).theta
    assert got == pytest.approx(h2plus.phase_endpoint_identity(lam, 5.0, 0.5, Parity.ODD), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.05, 20.0), st.sampled_from(Parity), st.sampled_from(NormConvention))
def test_metric_obeys_cauchy_schwarz(lam, r, parity, conv):
    if parity is Parity.ODD and r < 0.2:
        return
    cfg = ModelConfig(mode=LambdaMode.fixed_lambda(lam), parity=parity, norm_convention=conv)
    g = float(h2plus.metric_inner(lam, r, parity, conv))
    conn = h2plus.connection(r, 200.0, cfg)
    norm = h2plus.parity_state(parity, lam, r, conv).squared_norm
    assert g >= 0.0
    assert conn * conn <= norm * g * (1 + 1e-12)


def test_metric_matches_quadrature_kernel():
    q = oracle.metric_kernel_oracle(1.0, 2.0, parity_sign=1, normalized=False)
    assert float(h2plus.metric_inner(1.0, 2.0, Parity.EVEN, NormConvention.UNNORMALIZED)) == pytest.approx(q, abs=1e-5)


def test_metric_large_separation_limit():
    lam, mass = 1.0, 918.076
    cfg = FIXED1.replace(mass=mass)
    # C -> 2 and <d psi_a|d psi_a> = lam^2 / 3 per center under the symmetric stretch
    assert h2plus.metric_term(1000.0, 200.0, cfg) == pytest.approx(lam**2 / (3 * mass), rel=1e-12)


def test_effective_potential_components(config):
    s = h2plus.effective_potential(2.0, 150.0, config)
    assert s.v_eff == s.epsilon_r + s.metric_term - s.gauge_sq_term


def test_effective_potential_curve_matches_pointwise(config):
    r = np.linspace(0.5, 8.0, 16)
    v = h2plus.veff_curve(r, 250.0, config)[0]
    assert np.allclose(v, [h2plus.effective_potential(float(x), 250.0, config).v_eff for x in r], rtol=1e-14, atol=0)


def test_effective_potential_dissociation_terms():
    s = h2plus.effective_potential(1000.0, 200.0, FIXED1)
    assert s.epsilon_r == pytest.approx(-0.5, abs=1e-3)
    assert s.gauge_sq_term < 1e-12


def test_self_consistent_effective_potential_runs():
    s = h2plus.effective_potential(2.0, 100.0, SC)
    assert math.isfinite(s.v_eff)


def _dense_minimum(t, cfg):
    grid = np.linspace(1.0, 6.0, 100_001)
    v = h2plus.veff_curve(grid, t, cfg)[0]
    return grid[int(np.argmin(v))]


@pytest.mark.parametrize("cfg,t", [(FIXED1, 200.0), (ModelConfig(), 200.0)])
def test_minimizer_matches_dense_scan(cfg, t):
    assert h2plus.minimize_bond(t, cfg).r_min == pytest.approx(_dense_minimum(t, cfg), abs=1e-4)


def test_minima_lengthen_with_temperature(config):
    r = [h2plus.minimize_bond(t, config).r_min for t in (100.0, 200.0, 300.0)]
    assert r[0] < r[1] < r[2]


def test_deeper_minimum_when_colder(config):
    v = [h2plus.minimize_bond(t, config).v_min for t in (100.0, 200.0, 300.0)]
    assert v[0] < v[1] < v[2]


@pytest.mark.parametrize("t", [100.0, 200.0, 300.0])
def test_odd_parity_has_no_minimum(t):
    with pytest.raises(NoMinimumError):
        h2plus.minimize_bond(t, ModelConfig(parity=Parity.ODD), bracket=(0.5, 20.0))
