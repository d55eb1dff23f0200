import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.optimize import brentq

from vdwphase import eos, maxwell
from vdwphase.errors import DomainError, SupercriticalError
from vdwphase.maxwell import Region


def simpson_area(params, land, s, n=2001):
    f = lambda v: eos.pressure(params, v) - s
    a = brentq(f, params.b + 1e-9, land.alpha, xtol=1e-14)
    b = brentq(f, land.beta, 1e4, xtol=1e-14)
    v = np.linspace(a, b, n)
    return simpson(eos.pressure(params, v) - s, x=v)


def test_equal_area_residual(params, land):
    area, a0, b0 = maxwell.area_residual(params, land.alpha, land.beta, land.sigma0)
    assert abs(area) < 1e-10
    assert abs(eos.pressure(params, land.alpha0) - eos.pressure(params, land.beta0)) < 1e-10
    assert a0 == land.alpha0 and b0 == land.beta0


def test_lambda_consistency(params, land):
    phi = eos.free_potential
    left = phi(params, land.alpha0) + land.sigma0 * land.alpha0
    right = phi(params, land.beta0) + land.sigma0 * land.beta0
    assert abs(left - right) < 1e-10


def test_closed_form_area_matches_simpson(params, land):
    for s in (0.2, 0.4, 0.55):
        assert maxwell.area_residual(params, land.alpha, land.beta, s)[0] == pytest.approx(
            simpson_area(params, land, s, 20001), rel=1e-8)


def test_area_monotone_decreasing(params, land):
    s = np.linspace(land.sigma_lo + 1e-3, land.sigma_hi - 1e-3, 50)
    a = [maxwell.area_residual(params, land.alpha, land.beta, x)[0] for x in s]
    assert np.all(np.diff(a) < 0)


def test_reference_values(land):
    assert land.sigma0 == pytest.approx(0.5044916497874874, rel=1e-12)
    assert land.alpha0 == pytest.approx(0.5533604584398423, rel=1e-12)
    assert land.beta0 == pytest.approx(3.127639292441186, rel=1e-12)


def test_idempotent(params, land):
    again = maxwell.construct(params)
    assert abs(again.sigma0 - land.sigma0) < 1e-12
    assert again == land


def test_supercritical_and_near_critical():
    with pytest.raises(SupercriticalError):
        maxwell.construct(eos.EosParams(theta=1.2))
    with pytest.raises(SupercriticalError):
        maxwell.construct(eos.EosParams(theta=1.0 - 1e-10))


def test_coexistence_width_shrinks_with_temperature():
    widths = []
    for t in (0.5, 0.6, 0.7, 0.8, 0.9, 0.95):
        L = maxwell.construct(eos.EosParams(theta=t))
        widths.append(L.beta0 - L.alpha0)
    assert np.all(np.diff(widths) < 0)


def test_classify_examples(land):
    lab = maxwell.classify(land, 0.5 * (land.alpha + land.beta))
    assert lab.tag is Region.UNSTABLE and lab.in_maxwell
    lab = maxwell.classify(land, land.alpha0)
    assert lab.tag is Region.STABLE and not lab.in_maxwell
    assert maxwell.classify(land, land.beta).tag is Region.METASTABLE
    assert maxwell.classify(land, land.alpha).tag is Region.METASTABLE
    assert maxwell.classify(land, land.beta0).tag is Region.STABLE
    # snapping
    assert maxwell.classify(land, land.alpha0 + 5e-11).tag is Region.STABLE
    assert maxwell.classify(land, land.beta - 5e-11).tag is Region.METASTABLE


def test_classify_domain(land, params):
    with pytest.raises(DomainError):
        maxwell.classify(land, params.b, b=params.b)


def test_classify_partition(params, land):
    rng = np.random.default_rng(7)
    v = params.b + rng.exponential(2.0, 10_000)
    for x in v:
        lab = maxwell.classify(land, x, b=params.b)
        flags = [land.alpha < x < land.beta,
                 land.alpha0 < x <= land.alpha or land.beta <= x < land.beta0,
                 x <= land.alpha0 or x >= land.beta0]
        assert sum(flags) == 1
        assert lab.tag is [Region.UNSTABLE, Region.METASTABLE, Region.STABLE][flags.index(True)]
        assert lab.in_maxwell == (land.alpha0 < x < land.beta0)
        assert lab.in_maxwell == (lab.tag is not Region.STABLE)
