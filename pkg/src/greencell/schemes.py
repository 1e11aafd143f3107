"""The four downlink transmission schemes, evaluated one trial at a time.

A trial fixes five independent fading gains and one sensing outcome. Given
the scheme and total power, power is split across (transmitter, plane)
branches, each active plane gets a Shannon capacity, and the trial is in
outage when no active plane supports the target rate.

All trial-level functions accept scalars or equal-length numpy arrays in
the :class:`TrialRealization` fields, so a whole batch of Monte Carlo
trials is evaluated in one call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .linkmodel import noise_power, path_gain
from .sensing import ChannelState, SensingRealization, outcomes_from_uniforms

if TYPE_CHECKING:
    from .scenario import ScenarioConfig


class SchemeKind(enum.Enum):
    DIRECT = "direct"
    PURE_COGNITION = "pure_cognition"
    PURE_COOPERATION = "pure_cooperation"
    JOINT = "joint"


class Transmitter(enum.Enum):
    BS = "bs"
    TVS = "tvs"


class Plane(enum.Enum):
    CELLULAR = "cellular"
    TV = "tv"


class UndecodableError(ValueError):
    pass


@dataclass(frozen=True)
class PowerAllocation:
    total_power_w: float
    shares: dict  # (Transmitter, Plane) -> W, active branches only

    def power(self, tx: Transmitter, plane: Plane) -> float:
        return self.shares.get((tx, plane), 0.0)

    @property
    def active_planes(self) -> tuple:
        return tuple(p for p in Plane if any(pl is p for _, pl in self.shares))

    def transmitters(self, plane: Plane) -> tuple:
        return tuple(tx for tx, pl in self.shares if pl is plane)


_BS_CELL = (Transmitter.BS, Plane.CELLULAR)
_TVS_CELL = (Transmitter.TVS, Plane.CELLULAR)
_BS_TV = (Transmitter.BS, Plane.TV)
_TVS_TV = (Transmitter.TVS, Plane.TV)


def allocate_power(scheme: SchemeKind, total_power_w: float, detected: ChannelState,
                   scenario: ScenarioConfig | None = None) -> PowerAllocation:
    """Split the total transmit power across the scheme's active branches.

    Share vectors come from ``scenario`` when given; otherwise the equal
    splits are used (P/2 per cooperating transmitter, P/4 per branch for
    the joint scheme on an idle TV channel).
    """
    if not total_power_w > 0:
        raise ValueError(f"total_power_w must be > 0, got {total_power_w}")
    coop = scenario.cooperation_shares if scenario else (0.5, 0.5)
    cog = scenario.cognition_idle_shares if scenario else (0.5, 0.5)
    joint = scenario.joint_idle_shares if scenario else (0.25, 0.25, 0.25, 0.25)
    idle = detected is ChannelState.IDLE
    p = total_power_w

    if scheme is SchemeKind.DIRECT:
        fractions = {_BS_CELL: 1.0}
    elif scheme is SchemeKind.PURE_COOPERATION:
        fractions = {_BS_CELL: coop[0], _TVS_CELL: coop[1]}
    elif scheme is SchemeKind.PURE_COGNITION:
        # busy: BS keeps the full power on the cellular band
        fractions = {_BS_CELL: cog[0], _BS_TV: cog[1]} if idle else {_BS_CELL: 1.0}
    elif scheme is SchemeKind.JOINT:
        if idle:
            fractions = dict(zip((_BS_CELL, _TVS_CELL, _BS_TV, _TVS_TV), joint))
        else:
            fractions = {_BS_CELL: coop[0], _TVS_CELL: coop[1]}
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    shares = {k: p * f for k, f in fractions.items() if f > 0}
    return PowerAllocation(p, shares)


@dataclass(frozen=True)
class TrialRealization:
    """Fading gains |h|^2 on the five links plus the sensing outcome.

    Fields are floats for a single trial or equal-length arrays for a batch.
    """

    bs_cellular: float
    tvs_cellular: float
    bs_tv: float
    tvs_tv: float
    interference: float
    actual_idle: bool
    detected_idle: bool

    @classmethod
    def single(cls, sensing: SensingRealization, bs_cellular=1.0, tvs_cellular=1.0,
               bs_tv=1.0, tvs_tv=1.0, interference=1.0) -> "TrialRealization":
        return cls(bs_cellular, tvs_cellular, bs_tv, tvs_tv, interference,
                   sensing.actual is ChannelState.IDLE,
                   sensing.detected is ChannelState.IDLE)

    @property
    def missed_detection(self):
        return np.logical_and(np.logical_not(self.actual_idle), self.detected_idle)

    def gain(self, tx: Transmitter, plane: Plane):
        return getattr(self, f"{tx.value}_{plane.value}")

    def __len__(self):
        return int(np.size(self.bs_cellular))


def sample_trials(scenario: ScenarioConfig, rng: np.random.Generator, size: int) -> TrialRealization:
    """Draw ``size`` independent trials from ``rng``.

    The draw order is fixed: five unit-exponential rows, then two uniform rows
    for sensing. Mean fading levels scale the unit draws afterwards.
    """
    unit = rng.standard_exponential((5, size))
    u = rng.random((2, size))
    return trials_from_draws(scenario, unit, u[0], u[1])


def trials_from_draws(scenario: ScenarioConfig, unit_exp, u_actual, u_detect) -> TrialRealization:
    actual_idle, detected_idle = outcomes_from_uniforms(scenario.sensing, u_actual, u_detect)
    s = scenario
    return TrialRealization(
        bs_cellular=s.bs_cellular.fading_mean_sq * unit_exp[0],
        tvs_cellular=s.tvs_cellular.fading_mean_sq * unit_exp[1],
        bs_tv=s.bs_tv.fading_mean_sq * unit_exp[2],
        tvs_tv=s.tvs_tv.fading_mean_sq * unit_exp[3],
        interference=s.interference.fading_mean_sq * unit_exp[4],
        actual_idle=actual_idle,
        detected_idle=detected_idle,
    )


def plane_band(scenario: ScenarioConfig, plane: Plane):
    return scenario.cellular if plane is Plane.CELLULAR else scenario.tv


def link_for(scenario: ScenarioConfig, tx: Transmitter, plane: Plane):
    return getattr(scenario, f"{tx.value}_{plane.value}")


def branch_path_gain(scenario: ScenarioConfig, tx: Transmitter, plane: Plane) -> float:
    return path_gain(plane_band(scenario, plane), link_for(scenario, tx, plane), scenario.speed_of_light)


def interference_path_gain(scenario: ScenarioConfig) -> float:
    # TV broadcast is always at the TV carrier
    return path_gain(scenario.tv, scenario.interference, scenario.speed_of_light)


def alamouti_effective_snr(rx_power_bs, rx_power_tvs, denominator):
    """Post-combining SNR of a two-transmitter Alamouti branch.

    Coherent Alamouti combining adds the two per-link received powers, so the
    SNR is ``(rx_bs + rx_tvs) / denominator``. With one power at zero this is
    the single-link SNR.
    """
    return (rx_power_bs + rx_power_tvs) / denominator


def branch_sinr(alloc: PowerAllocation, plane: Plane, trial: TrialRealization,
                scenario: ScenarioConfig):
    """SINR of one frequency plane for the given allocation and trial.

    TV-plane branches see the TV broadcast as Gaussian interference on a
    missed detection (channel busy, sensed idle).
    """
    if plane not in alloc.active_planes:
        raise ValueError(f"{plane.value} plane is inactive in this allocation")
    if plane is Plane.TV and np.ndim(trial.detected_idle) == 0 and not trial.detected_idle:
        raise ValueError("TV plane is inactive when the channel is sensed busy")

    band = plane_band(scenario, plane)
    rx = {tx: alloc.power(tx, plane) * branch_path_gain(scenario, tx, plane) * trial.gain(tx, plane)
          for tx in Transmitter}
    denominator = noise_power(scenario.noise, band.bandwidth_hz)
    if plane is Plane.TV:
        interference = scenario.tvs_power_w * interference_path_gain(scenario) * trial.interference
        denominator = denominator + np.where(trial.missed_detection, interference, 0.0)
    return alamouti_effective_snr(rx[Transmitter.BS], rx[Transmitter.TVS], denominator)


def branch_capacity(bandwidth_hz: float, sinr):
    """Shannon capacity in bit/s."""
    return bandwidth_hz * np.log2(1.0 + sinr)


def trial_outage(scheme: SchemeKind, total_power_w: float, trial: TrialRealization,
                 scenario: ScenarioConfig):
    """True where no active plane's capacity reaches ``scenario.rate_bps``.

    Planes combine by selection: on an idle-sensed channel the schemes that
    use the TV band fail only if both planes fall short.
    """
    rate = scenario.rate_bps
    detected_idle = np.asarray(trial.detected_idle, dtype=bool)
    result = np.ones(detected_idle.shape, dtype=bool)
    for state, mask in ((ChannelState.IDLE, detected_idle), (ChannelState.BUSY, ~detected_idle)):
        if not mask.any():
            continue
        alloc = allocate_power(scheme, total_power_w, state, scenario)
        failed = np.ones(detected_idle.shape, dtype=bool)
        for plane in alloc.active_planes:
            sinr = branch_sinr(alloc, plane, _as_detected(trial, state), scenario)
            capacity = branch_capacity(plane_band(scenario, plane).bandwidth_hz, sinr)
            failed &= capacity < rate
        result = np.where(mask, failed, result)
    return bool(result) if result.ndim == 0 else result


def _as_detected(trial: TrialRealization, state: ChannelState) -> TrialRealization:
    # Evaluate the whole batch under one sensed state; rows of the other
    # state are masked out by the caller. Missed detection keeps its meaning.
    if np.ndim(trial.detected_idle) == 0:
        return trial
    idle = state is ChannelState.IDLE
    return TrialRealization(trial.bs_cellular, trial.tvs_cellular, trial.bs_tv, trial.tvs_tv,
                            trial.interference, trial.actual_idle,
                            np.full(np.shape(trial.detected_idle), idle))


# -- symbol-level Alamouti ----------------------------------------------------

def alamouti_encode(x1: complex, x2: complex) -> np.ndarray:
    """2x2 Alamouti block: rows are time slots, columns are (BS, TVS).

    Slot 1 sends (x1, x2); slot 2 sends (-conj(x2), conj(x1)).
    """
    x1, x2 = complex(x1), complex(x2)
    return np.array([[x1, x2], [-x2.conjugate(), x1.conjugate()]], dtype=complex)


def alamouti_transmit(block: np.ndarray, h1: complex, h2: complex, noise=(0j, 0j)) -> np.ndarray:
    """Received samples ``r_t = h1 * s_t,BS + h2 * s_t,TVS + n_t`` over the two slots."""
    return block @ np.array([h1, h2], dtype=complex) + np.asarray(noise, dtype=complex)


def alamouti_decode(received, channel, normalize: bool = False) -> tuple[complex, complex]:
    """Linear Alamouti combining with known channel ``(h1, h2)``.

    Without ``normalize`` the estimates carry the combining gain
    ``|h1|^2 + |h2|^2``; with it they are divided by that gain, so decoding a
    noise-free block returns the transmitted symbols.
    """
    r1, r2 = (complex(v) for v in received)
    h1, h2 = (complex(v) for v in channel)
    gain = abs(h1) ** 2 + abs(h2) ** 2
    if gain == 0:
        raise UndecodableError("channel h1 = h2 = 0 carries no signal")
    x1 = h1.conjugate() * r1 + h2 * r2.conjugate()
    x2 = h2.conjugate() * r1 - h1 * r2.conjugate()
    if normalize:
        return x1 / gain, x2 / gain
    return x1, x2

