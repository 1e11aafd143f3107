"""Link-budget arithmetic and Rayleigh fading primitives.

Everything here works in the linear domain. Convert dB inputs once with
:func:`db_to_linear` before building a :class:`LinkParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299792458.0  # m/s
BOLTZMANN = 1.38e-23  # J/K, value used throughout the model


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def watt_to_dbm(value_w: float) -> float:
    return linear_to_db(value_w) + 30.0


@dataclass(frozen=True)
class RadioBand:
    """A carrier frequency and bandwidth, both in Hz."""

    carrier_hz: float
    bandwidth_hz: float

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise ValueError(f"carrier_hz must be > 0, got {self.carrier_hz}")
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")


@dataclass(frozen=True)
class LinkParams:
    """One transmitter to receiver link.

    Gains are linear power ratios; ``fading_mean_sq`` is E|h|^2.
    """

    distance_m: float
    tx_gain_linear: float = 1.0
    rx_gain_linear: float = 1.0
    fading_mean_sq: float = 1.0

    def __post_init__(self):
        for name in ("distance_m", "tx_gain_linear", "rx_gain_linear", "fading_mean_sq"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class NoiseModel:
    """Thermal noise at a system temperature; the Boltzmann constant is fixed."""

    temperature_k: float = 290.0

    def __post_init__(self):
        if not self.temperature_k > 0:
            raise ValueError(f"temperature_k must be > 0, got {self.temperature_k}")

    @property
    def boltzmann(self) -> float:
        return BOLTZMANN

    @property
    def psd_w_per_hz(self) -> float:
        return BOLTZMANN * self.temperature_k


def path_gain(band: RadioBand, link: LinkParams, speed_of_light: float = SPEED_OF_LIGHT) -> float:
    """Free-space power ratio ``(c / (4 pi f d))**2 * G_tx * G_rx``.

    The small-scale fading term |h|^2 is not included.
    """
    ratio = speed_of_light / (4.0 * math.pi * band.carrier_hz * link.distance_m)
    return ratio * ratio * link.tx_gain_linear * link.rx_gain_linear


def received_power(tx_power_w, band: RadioBand, link: LinkParams, gain_sq,
                   speed_of_light: float = SPEED_OF_LIGHT):
    """Received power in W for transmit power ``tx_power_w`` and fading draw ``gain_sq``.

    Both ``tx_power_w`` and ``gain_sq`` may be arrays; they broadcast.
    """
    return tx_power_w * path_gain(band, link, speed_of_light) * gain_sq


def noise_power(noise: NoiseModel, bandwidth_hz: float) -> float:
    """Thermal noise power kappa * T * B in W."""
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth_hz must be > 0, got {bandwidth_hz}")
    return BOLTZMANN * noise.temperature_k * bandwidth_hz


def sample_fading(link: LinkParams, rng: np.random.Generator, size=None):
    """Draw |h|^2 for a Rayleigh link: exponential with mean ``link.fading_mean_sq``.

    Draws are unit exponentials scaled by the mean, so the same stream gives
    draws that scale exactly with ``fading_mean_sq``.
    """
    return link.fading_mean_sq * rng.standard_exponential(size)
