import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from vdwphase import eos
from vdwphase.errors import DomainError, OutOfBandError, SupercriticalError

THETAS = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95]


def test_pressure_reference_value(params):
    # (8/3 * 0.85) / (2/3) - 3
    assert eos.pressure(params, 1.0) == pytest.approx(0.4, abs=1e-14)


def test_pressure_vanishes_at_infinity(params):
    vals = [eos.pressure(params, v) for v in (1e3, 1e6, 1e9)]
    assert all(v > 0 for v in vals)
    assert vals[-1] < 1e-8
    assert vals[0] > vals[1] > vals[2]


def test_critical_point_reduced_units():
    p = eos.EosParams(theta=1.0)
    assert eos.pressure(p, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert eos.pressure_derivatives(p, 1.0, 1) == pytest.approx(0.0, abs=1e-13)
    assert eos.pressure_derivatives(p, 1.0, 2) == pytest.approx(0.0, abs=1e-13)


def test_domain_errors(params):
    with pytest.raises(DomainError):
        eos.pressure(params, params.b)
    with pytest.raises(DomainError):
        eos.pressure(params, np.array([1.0, 0.2]))
    with pytest.raises(DomainError):
        eos.pressure_derivatives(params, 1.0, 3)
    with pytest.raises(DomainError):
        eos.EosParams(a=-1.0)


def test_critical_temperature_formula():
    assert eos.critical_temperature(eos.EosParams()) == pytest.approx(1.0, rel=1e-15)
    base = eos.EosParams(a=2.0, b=0.5, R=1.5)
    assert eos.critical_temperature(eos.EosParams(a=4.0, b=0.5, R=1.5)) == pytest.approx(
        2 * eos.critical_temperature(base))
    assert eos.critical_temperature(eos.EosParams(a=2.0, b=1.0, R=1.5)) == pytest.approx(
        0.5 * eos.critical_temperature(base))


def test_derivative_negative_on_stable_branch():
    p = eos.EosParams(theta=0.3)
    assert eos.pressure_derivatives(p, 0.36, 1) < 0
    assert eos.pressure_derivatives(p, 50.0, 1) < 0


def test_derivatives_match_finite_differences(params):
    rng = np.random.default_rng(1)
    v = rng.uniform(params.b + 0.02, 100 * params.b, 1000)
    h = 1e-5 * v
    fd1 = (eos.pressure(params, v + h) - eos.pressure(params, v - h)) / (2 * h)
    d1 = eos.pressure_derivatives(params, v, 1)
    assert np.all(np.abs(fd1 - d1) <= 1e-6 * np.maximum(np.abs(d1), 1e-3))
    fd2 = (eos.pressure_derivatives(params, v + h, 1)
           - eos.pressure_derivatives(params, v - h, 1)) / (2 * h)
    d2 = eos.pressure_derivatives(params, v, 2)
    assert np.all(np.abs(fd2 - d2) <= 1e-6 * np.maximum(np.abs(d2), 1e-3))


def test_free_potential_is_minus_antiderivative(params):
    v = np.linspace(0.4, 8.0, 50)
    h = 1e-6
    fd = (eos.free_potential(params, v + h) - eos.free_potential(params, v - h)) / (2 * h)
    assert np.allclose(fd, -eos.pressure(params, v), rtol=1e-8, atol=1e-9)


def test_secant_slope_matches_difference_quotient(params):
    c = 0.9
    for r in (-0.3, -1e-3, 1e-3, 0.7):
        direct = (eos.pressure(params, c) - eos.pressure(params, c + r)) / r
        assert eos.secant_slope(params, c, r) == pytest.approx(direct, rel=1e-9)
    assert eos.secant_slope(params, c, 0.0) == pytest.approx(
        -eos.pressure_derivatives(params, c, 1), rel=1e-14)


def test_spinodal_reference(params):
    alpha, beta = eos.spinodal_points(params)
    assert params.b < alpha < 3 * params.b < beta
    assert abs(eos.pressure_derivatives(params, alpha, 1)) < 1e-12
    assert abs(eos.pressure_derivatives(params, beta, 1)) < 1e-12
    # bisection oracle
    f = lambda v: eos.pressure_derivatives(params, v, 1)
    assert alpha == pytest.approx(brentq(f, params.b + 1e-6, 1.0, xtol=1e-15), abs=1e-12)
    assert beta == pytest.approx(brentq(f, 1.0, 10.0, xtol=1e-15), abs=1e-12)


def test_spinodal_near_critical_pair():
    p = eos.EosParams(theta=1.0 - 1e-12)
    alpha, beta = eos.spinodal_points(p)
    assert alpha < 1.0 < beta
    assert beta - alpha < 1e-5
    # roots separate like sqrt(theta_c - theta)
    assert 1.0 - alpha == pytest.approx(1.15e-6, rel=0.05)


@pytest.mark.parametrize("theta", [1.0, 1.1])
def test_spinodal_supercritical(theta):
    with pytest.raises(SupercriticalError):
        eos.spinodal_points(eos.EosParams(theta=theta))


def test_branch_monotonicity(params, land):
    b = params.b
    for lo, hi, sign in ((b + 1e-3, land.alpha, -1), (land.alpha, land.beta, 1),
                         (land.beta, 200.0, -1)):
        v = np.linspace(lo, hi, 2001)[1:-1]
        assert np.all(sign * np.diff(eos.pressure(params, v)) > 0)


def test_isobar_at_maxwell_pressure(params, land):
    a_s, x_s, b_s = eos.solve_isobar(params, land, land.sigma0)
    assert a_s == pytest.approx(land.alpha0, abs=1e-12)
    assert b_s == pytest.approx(land.beta0, abs=1e-12)
    assert land.alpha < x_s < land.beta


def test_isobar_mid_band(params, land):
    s = 0.5 * (land.sigma_lo + land.sigma_hi)
    roots = eos.solve_isobar(params, land, s)
    assert land.alpha_bar < roots[0] < land.alpha < roots[1] < land.beta < roots[2] < land.beta_bar
    f = lambda v: eos.pressure(params, v) - s
    oracle = [brentq(f, params.b + 1e-9, land.alpha, xtol=1e-15),
              brentq(f, land.alpha, land.beta, xtol=1e-15),
              brentq(f, land.beta, 1e3, xtol=1e-15)]
    for r, o in zip(roots, oracle):
        assert abs(eos.pressure(params, r) - s) < 1e-12
        assert r == pytest.approx(o, abs=1e-12)


def test_isobar_merges_near_lower_band_edge(params, land):
    a_s, x_s, _ = eos.solve_isobar(params, land, land.sigma_lo + 1e-10)
    assert x_s - a_s < 1e-4
    assert abs(a_s - land.alpha) < 1e-4 and abs(x_s - land.alpha) < 1e-4


@given(st.floats(min_value=0.001, max_value=0.999))
@settings(max_examples=60, deadline=None)
def test_isobar_round_trip(frac):
    params = eos.EosParams()
    from vdwphase import maxwell
    land = maxwell.construct(params)
    s = land.sigma_lo + frac * (land.sigma_hi - land.sigma_lo)
    for r in eos.solve_isobar(params, land, s):
        assert abs(eos.pressure(params, r) - s) < 1e-10


def test_isobar_out_of_band(params, land):
    for s in (land.sigma_lo, land.sigma_hi, land.sigma_hi + 1.0):
        with pytest.raises(OutOfBandError):
            eos.solve_isobar(params, land, s)


def test_isobar_nonpositive_pressure_has_no_vapor_root():
    from vdwphase import maxwell
    p = eos.EosParams(theta=0.6)
    land = maxwell.construct(p)
    assert land.sigma_lo < 0 and land.band_lo == 0.0
    with pytest.raises(OutOfBandError):
        eos.solve_isobar(p, land, -0.1)


def test_companion_points(params, land):
    abar, bbar = eos.companion_points(params, land.alpha, land.beta)
    assert abs(eos.pressure(params, abar) - land.sigma_hi) < 1e-12
    assert abs(eos.pressure(params, bbar) - land.sigma_lo) < 1e-12
    assert params.b < abar < land.alpha0
    assert land.beta0 < bbar


def test_companion_points_collapse_near_critical():
    p = eos.EosParams(theta=1.0 - 1e-6)
    alpha, beta = eos.spinodal_points(p)
    abar, bbar = eos.companion_points(p, alpha, beta)
    assert abs(abar - 1.0) < 0.01 and abs(bbar - 1.0) < 0.01


def test_companion_beta_bar_infinite_at_low_temperature():
    p = eos.EosParams(theta=0.5)
    alpha, beta = eos.spinodal_points(p)
    assert eos.pressure(p, alpha) < 0
    _, bbar = eos.companion_points(p, alpha, beta)
    assert math.isinf(bbar)


@pytest.mark.parametrize("frac", THETAS)
def test_landscape_invariants_sweep(frac):
    from vdwphase import maxwell
    p = eos.EosParams(theta=frac)
    L = maxwell.construct(p)
    assert p.b < L.alpha_bar < L.alpha0 < L.alpha < L.beta < L.beta0 < L.beta_bar
    assert abs(eos.pressure_derivatives(p, L.alpha, 1)) < 1e-10
    assert abs(eos.pressure_derivatives(p, L.beta, 1)) < 1e-10
    assert abs(eos.pressure(p, L.alpha0) - L.sigma0) < 1e-12
    assert abs(eos.pressure(p, L.beta0) - L.sigma0) < 1e-12
    assert L.sigma_lo < L.sigma0 < L.sigma_hi
    phi = eos.free_potential
    assert abs(phi(p, L.beta0) + L.sigma0 * L.beta0 - L.lambda0) < 1e-10
