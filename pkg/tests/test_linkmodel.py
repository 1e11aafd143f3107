import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from greencell.linkmodel import (
    BOLTZMANN,
    SPEED_OF_LIGHT,
    LinkParams,
    NoiseModel,
    RadioBand,
    db_to_linear,
    noise_power,
    path_gain,
    received_power,
    sample_fading,
    watt_to_dbm,
)

CELL = RadioBand(2100e6, 5e6)
TV = RadioBand(55.25e6, 6e6)
BS_LINK = LinkParams(1000.0, db_to_linear(5.0), 1.0, 1.0)
UNITY = LinkParams(1000.0)


def friis(c, f, d, g=1.0):
    # independent hand evaluation
    return (c / (4 * math.pi * f * d)) ** 2 * g


def test_path_gain_reference_values():
    # exact speed of light
    assert path_gain(CELL, BS_LINK) == pytest.approx(4.081154990547654e-10, rel=1e-12)
    assert path_gain(CELL, UNITY) == pytest.approx(1.290574525429354e-10, rel=1e-12)


def test_path_gain_with_rounded_speed_of_light():
    # c = 3e8 reproduces the commonly quoted figures to the last digit
    assert path_gain(CELL, BS_LINK, speed_of_light=3e8) == pytest.approx(4.0868e-10, abs=1e-14)
    assert path_gain(CELL, UNITY, speed_of_light=3e8) == pytest.approx(1.2924e-10, abs=1e-14)


def test_wavelength_circumference_identity():
    band = RadioBand(1e9, 1e6)
    d = SPEED_OF_LIGHT / band.carrier_hz / (4 * math.pi)
    assert path_gain(band, LinkParams(d)) == pytest.approx(1.0, rel=1e-14)


@given(st.floats(1.0, 1e5), st.floats(1e6, 1e10))
def test_inverse_square_law(d, f):
    band = RadioBand(f, 1e6)
    g1 = path_gain(band, LinkParams(d)) * d * d
    g2 = path_gain(band, LinkParams(2 * d)) * (2 * d) ** 2
    assert g1 == pytest.approx(g2, rel=1e-12)
    assert g1 == pytest.approx(friis(SPEED_OF_LIGHT, f, 1.0), rel=1e-12)


def test_tv_band_advantage_is_frequency_ratio_squared():
    ratio = path_gain(TV, BS_LINK) / path_gain(CELL, BS_LINK)
    assert ratio == pytest.approx((2100 / 55.25) ** 2, rel=1e-13)


def test_path_gain_decreasing():
    assert path_gain(RadioBand(3e9, 1), UNITY) < path_gain(CELL, UNITY)
    assert path_gain(CELL, LinkParams(1001.0)) < path_gain(CELL, UNITY)


def test_received_power_examples():
    pg = path_gain(CELL, BS_LINK)
    assert received_power(1.0, CELL, BS_LINK, 1.0) == pytest.approx(pg)
    assert received_power(1.0, CELL, BS_LINK, 1.0, speed_of_light=3e8) == pytest.approx(4.0868e-10, abs=1e-14)
    assert received_power(0.0, CELL, BS_LINK, 1.0) == 0.0
    assert received_power(1.0, CELL, BS_LINK, 0.0) == 0.0


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 50), st.floats(0, 50))
def test_received_power_bilinear(p1, p2, h1, h2):
    f = lambda p, h: received_power(p, CELL, BS_LINK, h)
    assert f(p1 + p2, h1) == pytest.approx(f(p1, h1) + f(p2, h1), rel=1e-12, abs=1e-300)
    assert f(p1, h1 + h2) == pytest.approx(f(p1, h1) + f(p1, h2), rel=1e-12, abs=1e-300)


def test_noise_power_examples():
    noise = NoiseModel(290.0)
    assert noise_power(noise, 5e6) == pytest.approx(2.0010e-14, rel=1e-12)
    assert noise_power(noise, 6e6) == pytest.approx(2.4012e-14, rel=1e-12)
    assert noise_power(noise, 2 * 5e6) == 2 * noise_power(noise, 5e6)
    assert noise.boltzmann == BOLTZMANN == 1.38e-23


def test_noise_psd_near_minus_174_dbm():
    dbm = watt_to_dbm(noise_power(NoiseModel(290.0), 1.0))
    assert abs(dbm - (-173.98)) <= 0.05
    assert abs(dbm - (-174.0)) <= 0.05


@pytest.mark.parametrize("bad", [
    lambda: RadioBand(0.0, 1.0),
    lambda: RadioBand(1.0, -1.0),
    lambda: LinkParams(0.0),
    lambda: LinkParams(1.0, tx_gain_linear=0.0),
    lambda: LinkParams(1.0, fading_mean_sq=-1.0),
    lambda: NoiseModel(0.0),
    lambda: noise_power(NoiseModel(), 0.0),
])
def test_invariants_reject_nonpositive(bad):
    with pytest.raises(ValueError):
        bad()


def test_fading_sample_mean():
    draws = sample_fading(LinkParams(1.0, fading_mean_sq=1.0), np.random.default_rng(7), 10**6)
    assert draws.min() >= 0
    # 99% CLT band is +-2.58e-3; the stated window is wider
    assert 0.995 <= draws.mean() <= 1.005


def test_fading_ks_against_exponential():
    draws = sample_fading(LinkParams(1.0), np.random.default_rng(8), 10**5)
    assert stats.kstest(draws, "expon").pvalue > 0.01
    scaled = sample_fading(LinkParams(1.0, fading_mean_sq=3.0), np.random.default_rng(9), 10**5)
    assert stats.kstest(scaled, "expon", args=(0, 3.0)).pvalue > 0.01


def test_fading_scaling_and_determinism():
    a = sample_fading(LinkParams(1.0, fading_mean_sq=1.0), np.random.default_rng(3), 1000)
    b = sample_fading(LinkParams(1.0, fading_mean_sq=2.0), np.random.default_rng(3), 1000)
    c = sample_fading(LinkParams(1.0, fading_mean_sq=1.0), np.random.default_rng(3), 1000)
    np.testing.assert_array_equal(b, 2 * a)
    np.testing.assert_array_equal(a, c)
