import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from msmimaging.errors import DomainError
from msmimaging.specfun import (
    FrequencyBand,
    bessel_j,
    bessel_j0_avg_closed,
    bessel_j_avg,
    bessel_j_avg_orders,
    bessel_j_orders,
    gauss_legendre_band,
    hyp1f2,
    sinc,
    struve_h,
)


@pytest.mark.parametrize("order", [0, 1, 2, 5, 17, 40, 90])
@pytest.mark.parametrize("x", [0.0, 0.3, 5.9, 6.0, 11.7, 37.2, 120.0, 199.5])
def test_bessel_matches_mpmath(order, x):
    ref = float(mpmath.besselj(order, x))
    assert bessel_j(order, x) == pytest.approx(ref, abs=2e-14)


def test_bessel_at_zero():
    vals = bessel_j_orders(5, 0.0)
    assert vals[0] == 1.0
    assert np.all(vals[1:] == 0.0)


def test_bessel_negative_argument_parity():
    x = np.array([3.1, 17.0])
    pos, neg = bessel_j_orders(6, x), bessel_j_orders(6, -x)
    sign = (-1.0) ** np.arange(7)
    np.testing.assert_array_equal(neg, sign[:, None] * pos)


def test_bessel_rejects_bad_input():
    with pytest.raises(DomainError):
        bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, math.nan)


@given(st.floats(0.01, 150.0))
def test_bessel_neumann_sum(x):
    # J_0 + 2 sum J_2k = 1
    js = bessel_j_orders(int(x) + 60, x)
    assert js[0] + 2 * js[2::2].sum() == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.5, 150.0), st.integers(1, 50))
def test_bessel_three_term_recurrence(x, s):
    js = bessel_j_orders(s + 1, x)
    assert js[s - 1] + js[s + 1] == pytest.approx(2 * s / x * js[s], abs=1e-12)


@pytest.mark.parametrize("order", [0, 1])
@pytest.mark.parametrize("x", [0.0, 0.5, 7.9, 8.1, 25.0, 110.0, 480.0])
def test_struve_matches_mpmath(order, x):
    ref = float(mpmath.struveh(order, x))
    assert struve_h(order, x) == pytest.approx(ref, abs=5e-12)


def test_struve_domain():
    with pytest.raises(DomainError):
        struve_h(2, 1.0)
    with pytest.raises(DomainError):
        struve_h(0, -1.0)


def test_sinc_exact_zeros():
    assert sinc(0.0) == 1.0
    for m in (1, 2, -3, 7):
        assert sinc(m * math.pi) == 0.0
    assert sinc(0.5) == pytest.approx(math.sin(0.5) / 0.5)


def _hyp1f2_exact(a, b1, b2, x, terms=200):
    a, b1, b2, x = (Fraction(v) for v in (a, b1, b2, x))
    term, acc = Fraction(1), Fraction(1)
    for n in range(terms):
        term = term * (a + n) / ((b1 + n) * (b2 + n)) * x / (n + 1)
        acc += term
    return float(acc)


@pytest.mark.parametrize("x", [-4.0, -0.25, -20.0, 3.0])
def test_hyp1f2_matches_exact_rational_series(x):
    assert hyp1f2(0.5, 1.0, 1.5, x) == pytest.approx(_hyp1f2_exact(0.5, 1, 1.5, x), rel=1e-13)


def test_hyp1f2_frozen_value():
    assert hyp1f2(0.5, 1.0, 1.5, -4.0) == pytest.approx(0.2561835398651517, rel=1e-14)


@pytest.mark.parametrize("x", [-225.0, -900.0])
def test_hyp1f2_large_negative_argument(x):
    ref = float(mpmath.hyp1f2(1.5, 2, 2.5, x))
    assert hyp1f2(1.5, 2.0, 2.5, x) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_frequency_band_validation():
    with pytest.raises(DomainError):
        FrequencyBand(2.0, 1.0)
    with pytest.raises(DomainError):
        FrequencyBand(0.0, 1.0)
    band = FrequencyBand(1.0, 3.0)
    assert band.width == 2.0
    assert band.scaled(2.0) == FrequencyBand(2.0, 6.0)


def test_gauss_legendre_band_averages_polynomials():
    band = FrequencyBand(2.0, 5.0)
    k, w = gauss_legendre_band(band, 1.0)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)
    assert np.sum(w * k**3) == pytest.approx((5**4 - 2**4) / 4 / 3, rel=1e-14)


def test_closed_form_band_average_frozen():
    band = FrequencyBand(14.66, 27.22)
    assert bessel_j0_avg_closed(0.3, band) == pytest.approx(0.09559355546000968, abs=1e-12)
    assert bessel_j0_avg_closed(0.0, band) == 1.0


@given(st.floats(0.0, 3.0), st.floats(1.0, 40.0), st.floats(0.5, 30.0))
def test_closed_form_equals_quadrature(r, lo, width):
    band = FrequencyBand(lo, lo + width)
    assert bessel_j0_avg_closed(r, band) == pytest.approx(bessel_j_avg(0, r, band), abs=1e-10)


def test_vectorized_band_average_matches_scalar():
    band = FrequencyBand(10.0, 30.0)
    r = np.array([0.0, 0.2, 1.3])
    table = bessel_j_avg_orders(4, r, band)
    for s in range(5):
        for i, ri in enumerate(r):
            assert table[s, i] == pytest.approx(bessel_j_avg(s, ri, band), abs=1e-12)


@given(st.floats(0.0, 100.0))
def test_bessel_bounded_by_one(x):
    assert np.all(np.abs(bessel_j_orders(60, x)) <= 1.0)


@given(st.floats(0.0, 10.0), st.integers(10, 60))
def test_small_order_envelope(x, s):
    bound = 2 * math.exp(s * math.log(x / 2) - math.lgamma(s + 1)) if x > 0 else 0.0
    assert abs(bessel_j(s, x)) <= bound


@given(st.floats(20.0, 2000.0))
def test_j0_decay_envelope(x):
    assert abs(bessel_j(0, x)) <= 1.1 * math.sqrt(2 / (math.pi * x))


@given(st.floats(-5, 5), st.floats(0.5, 10), st.floats(0.5, 10))
def test_hyp1f2_at_zero_is_one(a, b1, b2):
    assert hyp1f2(a, b1, b2, 0.0) == 1.0
