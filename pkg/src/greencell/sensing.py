"""Spectrum-sensing statistics and an empirical energy detector.

The outage pipeline consumes sensing quality as three scalars
(detection, false-alarm and availability probabilities). The energy
detector here is a standalone tool for producing ROC curves; it is not
wired into the outage computation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import stats


class ChannelState(enum.Enum):
    IDLE = "idle"
    BUSY = "busy"


@dataclass(frozen=True)
class SensingProfile:
    p_detect: float = 0.99
    p_false_alarm: float = 0.01
    p_available: float = 0.8

    def __post_init__(self):
        for name in ("p_detect", "p_false_alarm", "p_available"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0,1], got {value}")

    @property
    def p_missed_detection(self) -> float:
        """Probability the channel is busy but sensed idle."""
        return (1.0 - self.p_available) * (1.0 - self.p_detect)

    @property
    def p_detected_idle(self) -> float:
        return (self.p_available * (1.0 - self.p_false_alarm)
                + (1.0 - self.p_available) * (1.0 - self.p_detect))


@dataclass(frozen=True)
class SensingRealization:
    actual: ChannelState
    detected: ChannelState

    @property
    def missed_detection(self) -> bool:
        return self.actual is ChannelState.BUSY and self.detected is ChannelState.IDLE


def joint_outcome_probabilities(profile: SensingProfile) -> dict[tuple[ChannelState, ChannelState], float]:
    """Joint distribution of (actual, detected) channel states.

    Keys are ``(actual, detected)`` pairs.
    """
    idle, busy = ChannelState.IDLE, ChannelState.BUSY
    pa, pd, pf = profile.p_available, profile.p_detect, profile.p_false_alarm
    return {
        (idle, idle): pa * (1.0 - pf),
        (idle, busy): pa * pf,
        (busy, idle): (1.0 - pa) * (1.0 - pd),
        (busy, busy): (1.0 - pa) * pd,
    }


def sample_outcomes(profile: SensingProfile, rng: np.random.Generator, size: int):
    """Vectorised sampling. Returns boolean arrays ``(actual_idle, detected_idle)``."""
    u_actual = rng.random(size)
    u_detect = rng.random(size)
    return outcomes_from_uniforms(profile, u_actual, u_detect)


def outcomes_from_uniforms(profile: SensingProfile, u_actual, u_detect):
    actual_idle = u_actual < profile.p_available
    # sensed idle: no false alarm on an idle channel, or a miss on a busy one
    p_idle_given = np.where(actual_idle, 1.0 - profile.p_false_alarm, 1.0 - profile.p_detect)
    detected_idle = u_detect < p_idle_given
    return actual_idle, detected_idle


def sample_outcome(profile: SensingProfile, rng: np.random.Generator) -> SensingRealization:
    actual_idle, detected_idle = sample_outcomes(profile, rng, 1)
    return SensingRealization(
        actual=ChannelState.IDLE if actual_idle[0] else ChannelState.BUSY,
        detected=ChannelState.IDLE if detected_idle[0] else ChannelState.BUSY,
    )


def _energy_statistics(snr, num_samples, trials, rng, chunk=1 << 16):
    """Accumulated energy of ``num_samples`` real observations, noise-only and signal-present."""
    amplitude = np.sqrt(snr)
    noise_only = np.empty(trials)
    with_signal = np.empty(trials)
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        w0 = rng.standard_normal((n, num_samples))
        w1 = rng.standard_normal((n, num_samples))
        noise_only[start:start + n] = np.einsum("ij,ij->i", w0, w0)
        y = amplitude + w1
        with_signal[start:start + n] = np.einsum("ij,ij->i", y, y)
    return noise_only, with_signal


def _validate_detector_args(snr, num_samples, trials):
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")


def energy_detect(snr: float, num_samples: int, threshold: float, trials: int,
                  rng: np.random.Generator) -> tuple[float, float]:
    """Empirical ``(P_d, P_f)`` of an energy detector at one threshold.

    Each trial sums ``num_samples`` squared unit-variance Gaussian
    observations; under the signal hypothesis every observation carries a
    constant amplitude ``sqrt(snr)``. The channel is declared busy when the
    accumulated energy reaches the threshold.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    (point,) = roc_curve(snr, num_samples, [threshold], trials, rng)
    p_f, p_d = point
    return p_d, p_f


def roc_curve(snr: float, num_samples: int, thresholds, trials: int,
              rng: np.random.Generator) -> list[tuple[float, float]]:
    """Empirical ROC as a list of ``(P_f, P_d)``, one per threshold.

    All thresholds are applied to the same simulated statistics, so both
    columns are exactly non-increasing along an increasing grid.
    """
    _validate_detector_args(snr, num_samples, trials)
    grid = np.asarray(thresholds, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("threshold grid must be a non-empty 1-d sequence")
    if np.any(grid < 0):
        raise ValueError("thresholds must be >= 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("threshold grid must be strictly increasing")

    noise_only, with_signal = _energy_statistics(snr, num_samples, trials, rng)
    noise_only.sort()
    with_signal.sort()
    # fraction of statistics >= threshold
    p_f = 1.0 - np.searchsorted(noise_only, grid, side="left") / trials
    p_d = 1.0 - np.searchsorted(with_signal, grid, side="left") / trials
    return list(zip(p_f.tolist(), p_d.tolist()))


def threshold_for_false_alarm(p_false_alarm: float, num_samples: int) -> float:
    """Analytic threshold giving false-alarm rate ``p_false_alarm``.

    Under noise only the statistic is chi-square with ``num_samples`` degrees
    of freedom.
    """
    return float(stats.chi2.isf(p_false_alarm, num_samples))


def analytic_detection_probability(snr: float, num_samples: int, threshold: float) -> float:
    """Exact P_d: noncentral chi-square survival with noncentrality ``num_samples * snr``."""
    if snr == 0:
        return float(stats.chi2.sf(threshold, num_samples))
    return float(stats.ncx2.sf(threshold, num_samples, num_samples * snr))
