import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from msmimaging.asymptotics import (
    SeriesControl,
    aperture_integral,
    band_avg_orders,
    mdsm_center_value,
    predict_dsm,
    predict_mdsm,
    predict_mmsm,
    predict_msm,
    r_series,
    r_tilde_series,
    series_term,
)
from msmimaging.errors import ConvergenceError, DomainError
from msmimaging.sampling import Grid, indicator_msm
from msmimaging.scattering import VACUUM, ApertureConfig, Inhomogeneity, Scene, synthesize
from msmimaging.specfun import FrequencyBand, bessel_j, bessel_j_avg

GRID = Grid((0.05, 0.1), 0.6, 3, 3)
INC = np.array([math.cos(4.0), math.sin(4.0)])


def _scene():
    return Scene(VACUUM, [Inhomogeneity.disk((0.2, 0.1), 0.03, 3.0),
                          Inhomogeneity.disk((-0.1, 0.3), 0.02, 2.0)])


def _cquad(f, a, b):
    re = integrate.quad(lambda t: f(t).real, a, b, epsabs=1e-13, limit=400)[0]
    im = integrate.quad(lambda t: f(t).imag, a, b, epsabs=1e-13, limit=400)[0]
    return complex(re, im)


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(1, 40),
       st.floats(0, 3), st.floats(0.05, 2 * math.pi - 0.05))
def test_series_plus_j0_is_aperture_mean(x, y, k, t1, width):
    z = np.array([x, y])
    lhs = r_series(z, k, t1, t1 + width) + bessel_j(0, k * math.hypot(x, y))
    assert abs(lhs - aperture_integral(z, k, t1, t1 + width)) < 1e-9


def test_full_aperture_is_exactly_zero():
    band = FrequencyBand(10, 20)
    for z in ([0.3, 0.1], [-0.7, 0.2], [0.0, 0.0]):
        assert r_series(z, 17.0, 0.0, 2 * math.pi) == 0
        assert r_tilde_series(z, band, 0.0, 2 * math.pi) == 0


def test_null_directions():
    # cos factor vanishes for odd s along phi = 0 on [0, pi]; sinc for even s
    z = [0.3, 0.0]
    assert series_term(1, z, 20.0, 0.0, math.pi) == 0
    assert series_term(1, [-0.3, 0.0], 20.0, 0.0, math.pi) == 0  # phi = mid + pi/2
    assert series_term(1, [0.0, -0.4], 11.0, 0.0, math.pi / 2) != 0
    assert series_term(3, z, 20.0, 0.0, math.pi) == 0
    assert series_term(2, [0.2, 0.25], 20.0, 0.0, math.pi) == 0
    assert series_term(1, [0.2, 0.25], 20.0, 0.0, math.pi) != 0


def test_band_average_recurrence_matches_quadrature():
    band = FrequencyBand(29.3, 54.4)
    r = np.array([0.0, 0.05, 0.4, 1.3])
    table = band_avg_orders(40, r, band)
    for s in (0, 1, 2, 7, 25, 40):
        for i, ri in enumerate(r):
            assert table[s, i] == pytest.approx(bessel_j_avg(s, ri, band), abs=1e-11)


def test_r_tilde_is_band_mean_of_r():
    band = FrequencyBand(14.66, 27.22)
    z = np.array([0.3, 0.1])
    ref = _cquad(lambda k: r_series(z, k, 0.0, math.pi / 2), band.k_lo, band.k_hi) / band.width
    assert abs(r_tilde_series(z, band, 0.0, math.pi / 2) - ref) < 1e-10


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(tol=0)
    with pytest.raises(DomainError):
        SeriesControl(s_max=0)
    assert SeriesControl(s_max=50).order_cap(1000.0) == 50
    with pytest.raises(DomainError):
        r_series([0.1, 0.1], 10.0, 1.0, 0.5)


def _oracle(grid, per_target):
    out = np.zeros((grid.nx, grid.ny), dtype=complex)
    scene = _scene()
    for w, c in zip(scene.weights(), scene.centers):
        for i in range(grid.nx):
            for j in range(grid.ny):
                out[i, j] += w * per_target(grid.point(i, j) - c, c)
    return out


AP = (0.3, 2.4)


def test_predict_msm_matches_aperture_quadrature():
    k = 20.0
    terms = predict_msm(_scene(), k, *AP, GRID)
    ref = _oracle(GRID, lambda d, c: aperture_integral(d, 2 * k, *AP))
    np.testing.assert_allclose(terms.phi + terms.lam, ref, atol=1e-10 * np.abs(ref).max())


def test_predict_dsm_matches_aperture_quadrature():
    k = 20.0
    terms = predict_dsm(_scene(), INC, k, *AP, GRID)
    ref = _oracle(GRID, lambda d, c: np.exp(1j * k * INC @ c) * aperture_integral(d, k, *AP))
    np.testing.assert_allclose(terms.phi + terms.lam, ref, atol=1e-10 * np.abs(ref).max())


def _band_mean(f, band, n=80):
    x, w = np.polynomial.legendre.leggauss(n)
    ks = band.k_lo + 0.5 * band.width * (x + 1)
    return sum(0.5 * wi * f(k) for k, wi in zip(ks, w))


def test_predict_mmsm_matches_nested_quadrature():
    band = FrequencyBand(14.0, 20.0)
    grid = Grid((0.05, 0.1), 0.4, 2, 2)
    terms = predict_mmsm(_scene(), band, *AP, grid)
    ref = _oracle(grid, lambda d, c: _band_mean(lambda k: aperture_integral(d, k, *AP), band.scaled(2)))
    np.testing.assert_allclose(terms.phi + terms.lam, ref, atol=1e-9 * np.abs(ref).max())
    alt = predict_mmsm(_scene(), band, *AP, grid, closed_form=False)
    np.testing.assert_allclose(alt.phi, terms.phi, atol=1e-12)


def test_predict_mdsm_matches_nested_quadrature():
    band = FrequencyBand(14.0, 20.0)
    grid = Grid((0.05, 0.1), 0.4, 2, 2)
    terms = predict_mdsm(_scene(), INC, band, *AP, grid)
    ref = _oracle(grid, lambda d, c: _band_mean(
        lambda k: np.exp(1j * k * INC @ c) * aperture_integral(d, k, *AP), band))
    np.testing.assert_allclose(terms.phi + terms.lam, ref, atol=1e-9 * np.abs(ref).max())


def test_full_aperture_prediction_has_no_remainder():
    terms = predict_msm(_scene(), 20.0, 0.0, 2 * math.pi, GRID)
    assert np.all(terms.lam == 0)


def test_indicator_converges_to_prediction():
    scene = Scene(VACUUM, [Inhomogeneity.disk((0.2, 0.1), 0.03, 3.0)])
    grid = Grid(nx=21, ny=21)
    data = synthesize(scene, ApertureConfig(0.0, math.pi, 2048), [20.0])
    pred = predict_msm(scene, 20.0, 0.0, math.pi, grid).combined.values
    assert np.max(np.abs(indicator_msm(data, grid).values - pred)) < 2e-3


def test_prediction_needs_targets():
    with pytest.raises(DomainError):
        predict_msm(Scene(VACUUM, []), 20.0, *AP, GRID)


def test_mdsm_center_value_at_origin_is_one():
    assert mdsm_center_value([0.0, 0.0], 0.7, FrequencyBand(10, 20)) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), st.floats(0, 2 * math.pi),
       st.floats(5, 20), st.floats(1, 10))
def test_mdsm_center_value_matches_quadrature(x, y, psi, lo, width):
    band = FrequencyBand(lo, lo + width)
    r = math.hypot(x, y)
    ref = _cquad(lambda k: np.exp(1j * k * r * math.cos(psi)), band.k_lo, band.k_hi) / band.width
    assert abs(mdsm_center_value([x, y], psi, band, t_max=80) - ref) < 1e-9


def test_mdsm_center_value_riemann_sum():
    # P = 64 midpoint sum over the band: second-order accurate
    band = FrequencyBand(14.66, 27.22)
    c, psi = [0.4, -0.3], 1.1
    r = math.hypot(*c)
    ks = band.k_lo + (np.arange(64) + 0.5) * band.width / 64
    ref = np.mean(np.exp(1j * ks * r * math.cos(psi)))
    assert abs(mdsm_center_value(c, psi, band) - ref) < 1e-3


def test_mdsm_center_value_tail_guard():
    with pytest.raises(ConvergenceError):
        mdsm_center_value([3.0, 0.0], 0.0, FrequencyBand(20, 40), t_max=10)
    with pytest.raises(DomainError):
        mdsm_center_value([0.1, 0.0], 0.0, FrequencyBand(20, 40), t_max=0)
