import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greencell.linkmodel import NoiseModel, noise_power
from greencell.scenario import default_scenario
from greencell.schemes import (
    Plane,
    SchemeKind,
    Transmitter,
    TrialRealization,
    UndecodableError,
    alamouti_decode,
    alamouti_effective_snr,
    alamouti_encode,
    alamouti_transmit,
    allocate_power,
    branch_capacity,
    branch_sinr,
    sample_trials,
    trial_outage,
)
from greencell.sensing import ChannelState, SensingRealization

IDLE, BUSY = ChannelState.IDLE, ChannelState.BUSY
BS, TVS = Transmitter.BS, Transmitter.TVS
CELL, TV = Plane.CELLULAR, Plane.TV
N_CELL = 1.38e-23 * 290 * 5e6


def trial(actual=BUSY, detected=BUSY, **gains):
    return TrialRealization.single(SensingRealization(actual, detected), **gains)


def complex_pairs(rng, n):
    return rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))


# -- allocation ---------------------------------------------------------------

def test_allocation_examples():
    coop = allocate_power(SchemeKind.PURE_COOPERATION, 1.0, IDLE)
    assert coop.shares == {(BS, CELL): 0.5, (TVS, CELL): 0.5}
    assert allocate_power(SchemeKind.PURE_COOPERATION, 1.0, BUSY).shares == coop.shares
    assert allocate_power(SchemeKind.DIRECT, 2.0, BUSY).shares == {(BS, CELL): 2.0}
    joint = allocate_power(SchemeKind.JOINT, 1.0, IDLE)
    assert sorted(joint.shares.values()) == [0.25] * 4
    assert allocate_power(SchemeKind.JOINT, 1.0, BUSY).shares == coop.shares
    assert allocate_power(SchemeKind.PURE_COGNITION, 1.0, BUSY).shares == {(BS, CELL): 1.0}
    assert allocate_power(SchemeKind.PURE_COGNITION, 1.0, IDLE).shares == {(BS, CELL): 0.5, (BS, TV): 0.5}


@given(st.sampled_from(list(SchemeKind)), st.sampled_from([IDLE, BUSY]), st.floats(1e-6, 1e6))
def test_power_conservation(scheme, detected, p):
    alloc = allocate_power(scheme, p, detected)
    assert math.fsum(alloc.shares.values()) == p
    assert all(v > 0 for v in alloc.shares.values())


def test_allocation_rejects_nonpositive_power():
    with pytest.raises(ValueError):
        allocate_power(SchemeKind.DIRECT, 0.0, BUSY)


def test_custom_joint_shares(scenario):
    sc = scenario.with_params(joint_idle_shares="0.4,0.4,0.1,0.1")
    alloc = allocate_power(SchemeKind.JOINT, 2.0, IDLE, sc)
    assert alloc.power(BS, CELL) == 0.8 and alloc.power(TVS, TV) == 0.2


# -- SINR ---------------------------------------------------------------------

def test_direct_branch_sinr(scenario):
    alloc = allocate_power(SchemeKind.DIRECT, 1.0, BUSY)
    sinr = branch_sinr(alloc, CELL, trial(), scenario)
    pg = (299792458 / (4 * math.pi * 2.1e9 * 1000)) ** 2 * 10 ** 0.5
    assert sinr == pytest.approx(pg / N_CELL, rel=1e-12)
    rounded = default_scenario(speed_of_light_m_s=3e8)
    assert branch_sinr(alloc, CELL, trial(), rounded) == pytest.approx(20424, abs=1)


def test_missed_detection_interference():
    sc = default_scenario(speed_of_light_m_s=3e8, gain_tvs_interference_db=0.0)
    alloc = allocate_power(SchemeKind.JOINT, 1.0, IDLE, sc)
    t_missed = trial(actual=BUSY, detected=IDLE)
    t_clean = trial(actual=IDLE, detected=IDLE)
    sinr_missed = branch_sinr(alloc, TV, t_missed, sc)
    sinr_clean = branch_sinr(alloc, TV, t_clean, sc)
    noise_tv = noise_power(NoiseModel(290.0), 6e6)
    signal = sinr_clean * noise_tv
    interference = signal / sinr_missed - noise_tv
    assert interference == pytest.approx(45000 * 1.8670e-7, rel=1e-4)
    assert interference == pytest.approx(8.40e-3, abs=5e-5)
    assert interference / noise_tv > 1e11


def test_interference_only_on_tv_plane(scenario):
    alloc = allocate_power(SchemeKind.JOINT, 1.0, IDLE, scenario)
    a = branch_sinr(alloc, CELL, trial(BUSY, IDLE), scenario)
    b = branch_sinr(alloc, CELL, trial(IDLE, IDLE), scenario)
    assert a == b


def test_zero_fading_gives_zero_sinr(scenario):
    alloc = allocate_power(SchemeKind.JOINT, 1.0, IDLE, scenario)
    t = trial(IDLE, IDLE, bs_cellular=0.0, tvs_cellular=0.0, bs_tv=0.0, tvs_tv=0.0)
    assert branch_sinr(alloc, CELL, t, scenario) == 0.0
    assert branch_sinr(alloc, TV, t, scenario) == 0.0


def test_tv_plane_rejected_when_sensed_busy(scenario):
    alloc = allocate_power(SchemeKind.JOINT, 1.0, IDLE, scenario)
    with pytest.raises(ValueError):
        branch_sinr(alloc, TV, trial(IDLE, BUSY), scenario)
    with pytest.raises(ValueError):
        branch_sinr(allocate_power(SchemeKind.DIRECT, 1.0, BUSY), TV, trial(IDLE, IDLE), scenario)


# -- Alamouti -----------------------------------------------------------------

def test_effective_snr_examples():
    assert alamouti_effective_snr(3.0, 3.0, 2.0) == 3.0
    assert alamouti_effective_snr(5.0, 0.0, 2.0) == 2.5


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 1e3))
def test_effective_snr_monotone(a, b, extra):
    assert alamouti_effective_snr(a + extra, b, 1.0) >= alamouti_effective_snr(a, b, 1.0)
    assert alamouti_effective_snr(a, b + extra, 1.0) >= alamouti_effective_snr(a, b, 1.0)


def test_encode_examples():
    np.testing.assert_array_equal(alamouti_encode(1, 0), [[1, 0], [0, 1]])
    np.testing.assert_array_equal(alamouti_encode(0, 1), [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(alamouti_encode(1 + 1j, 2 - 1j), [[1 + 1j, 2 - 1j], [-2 - 1j, 1 - 1j]])


cplx = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@given(cplx, cplx)
def test_encode_columns_orthogonal(x1, x2):
    block = alamouti_encode(x1, x2)
    # plain complex arithmetic; BLAS dot products may fuse and round differently
    inner = sum(complex(block[t, 0]) * complex(block[t, 1]).conjugate() for t in range(2))
    assert inner == 0


def test_decode_examples():
    x = (1 + 0.5j, -2 + 1j)
    r = alamouti_transmit(alamouti_encode(*x), 1.0, 0.0)
    assert alamouti_decode(r, (1.0, 0.0)) == pytest.approx(x, abs=0)
    r = alamouti_transmit(alamouti_encode(1, 1j), 1.0, 1.0)
    assert alamouti_decode(r, (1.0, 1.0)) == (2 + 0j, 2j)
    with pytest.raises(UndecodableError):
        alamouti_decode(r, (0.0, 0.0))


def test_decode_round_trip():
    rng = np.random.default_rng(11)
    xs, hs = complex_pairs(rng, 1000), complex_pairs(rng, 1000)
    for x, h in zip(xs, hs):
        r = alamouti_transmit(alamouti_encode(*x), *h)
        est = np.array(alamouti_decode(r, h, normalize=True))
        assert np.max(np.abs(est - x)) / np.max(np.abs(x)) < 1e-12


def test_capacity():
    assert branch_capacity(5e6, 63.0) == pytest.approx(30e6, rel=1e-15)
    assert branch_capacity(5e6, 0.0) == 0.0


# -- outage -------------------------------------------------------------------

def test_direct_outage_example(scenario):
    t = trial()
    assert trial_outage(SchemeKind.DIRECT, 1.0, t, scenario) is False
    alloc = allocate_power(SchemeKind.DIRECT, 1.0, BUSY)
    cap = branch_capacity(5e6, branch_sinr(alloc, CELL, t, scenario))
    assert cap == pytest.approx(5e6 * math.log2(1 + 20395.577164), rel=1e-9)
    assert 71.5e6 < cap < 71.7e6


@pytest.mark.parametrize("scheme", list(SchemeKind))
@pytest.mark.parametrize("detected", [IDLE, BUSY])
def test_all_zero_fading_is_outage(scenario, scheme, detected):
    t = trial(IDLE, detected, bs_cellular=0.0, tvs_cellular=0.0, bs_tv=0.0, tvs_tv=0.0)
    assert trial_outage(scheme, 10.0, t, scenario) is True


def test_selection_across_planes(scenario):
    t = trial(IDLE, IDLE, bs_cellular=0.0, tvs_cellular=0.0, bs_tv=1.0, tvs_tv=1.0)
    assert trial_outage(SchemeKind.JOINT, 1.0, t, scenario) is False
    assert trial_outage(SchemeKind.PURE_COGNITION, 1.0, t, scenario) is False
    assert trial_outage(SchemeKind.PURE_COOPERATION, 1.0, t, scenario) is True
    # the same TV-band strength is unusable when the channel is sensed busy
    busy = trial(IDLE, BUSY, bs_cellular=0.0, tvs_cellular=0.0, bs_tv=1.0, tvs_tv=1.0)
    assert trial_outage(SchemeKind.JOINT, 1.0, busy, scenario) is True


def test_missed_detection_kills_tv_plane(scenario):
    t = trial(BUSY, IDLE, bs_cellular=0.0, tvs_cellular=0.0, bs_tv=1.0, tvs_tv=1.0)
    assert trial_outage(SchemeKind.JOINT, 1.0, t, scenario) is True


def test_batch_matches_scalar(scenario):
    batch = sample_trials(scenario, np.random.default_rng(4), 200)
    for scheme in SchemeKind:
        vec = trial_outage(scheme, 0.02, batch, scenario)
        for i in range(0, 200, 7):
            t = TrialRealization(*(np.asarray(getattr(batch, f))[i].item() for f in batch.__dataclass_fields__))
            assert trial_outage(scheme, 0.02, t, scenario) == vec[i]


def test_scheme_collapse_per_trial():
    sc = default_scenario(p_available=0.0, p_detect=1.0)
    batch = sample_trials(sc, np.random.default_rng(21), 50_000)
    assert not np.any(batch.detected_idle)
    for p in (0.01, 0.1, 1.0):
        np.testing.assert_array_equal(trial_outage(SchemeKind.JOINT, p, batch, sc),
                                      trial_outage(SchemeKind.PURE_COOPERATION, p, batch, sc))
        np.testing.assert_array_equal(trial_outage(SchemeKind.PURE_COGNITION, p, batch, sc),
                                      trial_outage(SchemeKind.DIRECT, p, batch, sc))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(list(SchemeKind)), st.floats(1e-3, 10.0), st.floats(1.01, 10.0))
def test_outage_monotone_in_power_and_rate(scheme, p, factor):
    sc = default_scenario()
    batch = sample_trials(sc, np.random.default_rng(99), 5000)
    low = trial_outage(scheme, p, batch, sc)
    high = trial_outage(scheme, p * factor, batch, sc)
    assert not np.any(high & ~low)
    faster = sc.with_params(rate_bps=30e6 * factor)
    assert not np.any(low & ~trial_outage(scheme, p, batch, faster))
