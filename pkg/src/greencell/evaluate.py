"""Outage estimation (Monte Carlo and analytic), energy efficiency and sweeps."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .linkmodel import noise_power
from .scenario import ScenarioConfig
from .schemes import (
    Plane,
    SchemeKind,
    Transmitter,
    allocate_power,
    branch_path_gain,
    interference_path_gain,
    plane_band,
    sample_trials,
    trial_outage,
)
from .sensing import ChannelState, joint_outcome_probabilities

BLOCK_SIZE = 1 << 16
QUAD_RTOL = 1e-8
MONTE_CARLO = "monte_carlo"
ANALYTIC = "analytic"


class QuadratureError(RuntimeError):
    def __init__(self, value, error_bound):
        super().__init__(f"quadrature did not converge: value {value!r}, error bound {error_bound!r}")
        self.value = value
        self.error_bound = error_bound


class OutageTargetError(ValueError):
    pass


@dataclass(frozen=True)
class OutageEstimate:
    mean: float
    stderr: float
    trials: int
    method: str
    ci_low: float
    ci_high: float
    error_bound: float = 0.0

    @classmethod
    def monte_carlo(cls, failures: int, trials: int, z: float = 1.96) -> "OutageEstimate":
        if trials < 1:
            raise ValueError("trials must be >= 1")
        mean = failures / trials
        stderr = math.sqrt(mean * (1.0 - mean) / trials)
        if failures < 10:
            low, high = wilson_interval(failures, trials, z)
        else:
            low, high = max(0.0, mean - z * stderr), min(1.0, mean + z * stderr)
        return cls(mean, stderr, trials, MONTE_CARLO, low, high)

    @classmethod
    def analytic(cls, value: float, error_bound: float = 0.0) -> "OutageEstimate":
        value = min(1.0, max(0.0, value))
        return cls(value, 0.0, 0, ANALYTIC, value, value, error_bound)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def energy_efficiency(rate_bps: float, total_power_w: float) -> float:
    """Bits delivered per Joule of transmit energy."""
    if not total_power_w > 0:
        raise ValueError(f"total_power_w must be > 0, got {total_power_w}")
    return rate_bps / total_power_w


# -- Monte Carlo ----------------------------------------------------------------

def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent stream for one block of trials, keyed by (seed, block index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def trial_block(scenario: ScenarioConfig, seed: int, block: int):
    """All ``BLOCK_SIZE`` trials of one block.

    The full block is always drawn, so trial ``i`` depends only on the seed
    and ``i``, never on the total trial count or the worker layout.
    """
    return sample_trials(scenario, block_rng(seed, block), BLOCK_SIZE)


def _slice_trials(trial, n):
    if n == BLOCK_SIZE:
        return trial
    return type(trial)(*(getattr(trial, f)[:n] for f in trial.__dataclass_fields__))


def outage_counts(scenario: ScenarioConfig, cells, trials: int, seed: int, workers: int = 1) -> list[int]:
    """Count outage trials for every ``(scheme, power)`` cell on shared trials."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cells = list(cells)
    n_blocks = -(-trials // BLOCK_SIZE)

    def run(block):
        n = min(BLOCK_SIZE, trials - block * BLOCK_SIZE)
        batch = _slice_trials(trial_block(scenario, seed, block), n)
        return [int(np.count_nonzero(trial_outage(s, p, batch, scenario))) for s, p in cells]

    if workers <= 1:
        per_block = map(run, range(n_blocks))
        return [sum(col) for col in zip(*per_block)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_block = list(pool.map(run, range(n_blocks)))
    return [sum(col) for col in zip(*per_block)]


def outage_mc(scheme: SchemeKind, total_power_w: float, scenario: ScenarioConfig,
              trials: int, seed: int, workers: int = 1) -> OutageEstimate:
    (failures,) = outage_counts(scenario, [(scheme, total_power_w)], trials, seed, workers)
    return OutageEstimate.monte_carlo(failures, trials)


# -- analytic -------------------------------------------------------------------

def rate_threshold(rate_bps: float, bandwidth_hz: float) -> float:
    """SINR below which ``bandwidth * log2(1 + SINR)`` falls short of the rate."""
    return math.expm1(rate_bps / bandwidth_hz * math.log(2.0))


def sum_exponential_cdf(means, x: float) -> float:
    """Pr(sum of independent exponentials < x) for one or two branch means.

    Two means use the hypoexponential form written with ``expm1`` (it turns
    into the Erlang-2 form as the means meet). When ``x`` is small against
    both means that form cancels, so a power series is used instead.
    """
    means = [m for m in means if m > 0]
    if x <= 0:
        return 0.0
    if not means:
        return 1.0
    if len(means) == 1:
        return -math.expm1(-x / means[0])
    if len(means) != 2:
        raise ValueError("at most two branches per plane")
    s1, s2 = max(means), min(means)
    a, b = x / s1, x / s2
    if b <= 0.1:
        return _hypoexp_cdf_series(a, b)
    u = b - a
    ratio = -1.0 if u == 0 else math.expm1(-u) / u
    return -math.expm1(-a) + a * math.exp(-a) * ratio


def _hypoexp_cdf_series(a: float, b: float, terms: int = 24) -> float:
    # F = a*b * sum_{n>=2} (-1)^n / n! * h_{n-2}(a, b), with h_m the complete
    # homogeneous polynomial sum_j a^j b^(m-j)
    total = 0.0
    h = 1.0  # h_0
    a_pow = 1.0
    fact = 2.0
    for n in range(2, terms + 2):
        total += (-1) ** n * h / fact
        a_pow *= a
        h = h * b + a_pow  # h_{m+1} = b*h_m + a^(m+1)
        fact *= n + 1
    return a * b * total


def sum_exponential_sf(means, x: float) -> float:
    """Complement of :func:`sum_exponential_cdf`, accurate when it is tiny."""
    means = [m for m in means if m > 0]
    if x <= 0:
        return 1.0
    if not means:
        return 0.0
    if len(means) == 1:
        return math.exp(-x / means[0])
    s1, s2 = max(means), min(means)
    a, b = x / s1, x / s2
    if a < 1.0:
        return 1.0 - sum_exponential_cdf(means, x)
    u = b - a
    ratio = -1.0 if u == 0 else math.expm1(-u) / u
    return math.exp(-a) * (1.0 - a * ratio)


def _expect_over_exponential(func, scales) -> tuple[float, float]:
    """``E[func(X)]`` for ``X ~ Exp(1)``, as ``(value, error bound)``.

    The integrand may vary on scales far shorter than the exponential weight,
    so the range is cut at multiples of each ``scales`` entry.
    """
    cuts = {c * sc for sc in list(scales) + [1.0] for c in (0.25, 1.0, 4.0, 16.0, 64.0)}
    edges = [0.0] + sorted(c for c in cuts if 0.0 < c < 700.0)
    value = error = 0.0
    for lo, hi in zip(edges, edges[1:] + [np.inf]):
        v, e = integrate.quad(lambda x: func(x) * math.exp(-x), lo, hi,
                              epsabs=0.0, epsrel=1e-12, limit=200)
        value += v
        error += e
    return value, error


def _plane_means(scenario, alloc, plane):
    return [alloc.power(tx, plane) * branch_path_gain(scenario, tx, plane)
            * _link_mean(scenario, tx, plane) for tx in Transmitter]


def _link_mean(scenario, tx, plane):
    return getattr(scenario, f"{tx.value}_{plane.value}").fading_mean_sq


def plane_outage(scenario: ScenarioConfig, alloc, plane: Plane, interfered: bool) -> tuple[float, float]:
    """Outage of one plane as ``(probability, error bound)``.

    With ``interfered`` the TV broadcast adds exponentially faded interference
    to the noise floor and the outage is averaged over it numerically.
    """
    band = plane_band(scenario, plane)
    theta = rate_threshold(scenario.rate_bps, band.bandwidth_hz)
    noise = noise_power(scenario.noise, band.bandwidth_hz)
    means = _plane_means(scenario, alloc, plane)
    mean_interference = (scenario.tvs_power_w * interference_path_gain(scenario)
                         * scenario.interference.fading_mean_sq)
    if not interfered or mean_interference == 0:
        return sum_exponential_cdf(means, theta * noise), 0.0

    def threshold(x):
        return theta * (noise + mean_interference * x)

    scales = [m / (theta * mean_interference) for m in means if m > 0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        survival, s_err = _expect_over_exponential(lambda x: sum_exponential_sf(means, threshold(x)), scales)
        if survival < 0.5:
            value, abserr = 1.0 - survival, s_err
        else:
            value, abserr = _expect_over_exponential(lambda x: sum_exponential_cdf(means, threshold(x)), scales)
    if abserr > QUAD_RTOL * abs(value) and value > 0:
        raise QuadratureError(value, abserr)
    return value, abserr


def outage_analytic(scheme: SchemeKind, total_power_w: float, scenario: ScenarioConfig) -> OutageEstimate:
    """Exact outage probability via the total-probability expansion over sensing outcomes.

    Per outcome the active planes fail independently, so their outage
    probabilities multiply.
    """
    total = 0.0
    error = 0.0
    for (actual, detected), prob in joint_outcome_probabilities(scenario.sensing).items():
        alloc = allocate_power(scheme, total_power_w, detected, scenario)
        missed = actual is ChannelState.BUSY and detected is ChannelState.IDLE
        conditional = 1.0
        cond_error = 0.0
        for plane in alloc.active_planes:
            p, e = plane_outage(scenario, alloc, plane, interfered=missed and plane is Plane.TV)
            conditional *= p
            cond_error += e
        total += prob * conditional
        error += prob * cond_error
    return OutageEstimate.analytic(total, error)


# -- sweeps ---------------------------------------------------------------------

@dataclass(frozen=True)
class TradeoffPoint:
    scheme: SchemeKind
    total_power_w: float
    outage: OutageEstimate  # analytic
    energy_efficiency_bits_per_joule: float
    outage_mc: OutageEstimate | None = None

    @property
    def mc_reliable(self) -> bool:
        """Enough expected outage events (at least 10) for the MC value to mean something."""
        if self.outage_mc is None:
            return False
        return self.outage.mean >= 10.0 / self.outage_mc.trials


def log_power_grid(pmin: float = 0.01, pmax: float = 10.0, points: int = 21) -> np.ndarray:
    if not 0 < pmin < pmax or points < 2:
        raise ValueError("need 0 < pmin < pmax and at least 2 points")
    grid = np.logspace(math.log10(pmin), math.log10(pmax), points)
    # trim logspace noise (0.049999999999999996 -> 0.05) so CSVs stay readable
    return np.array([float(f"{p:.15g}") for p in grid])


def tradeoff_sweep(scenario: ScenarioConfig, power_grid, trials: int, seed: int,
                   workers: int = 1, schemes=None) -> dict:
    """One curve of :class:`TradeoffPoint` per scheme, powers ascending.

    ``trials=0`` skips the Monte Carlo column. All MC cells share the same
    trial realisations, so each MC curve is monotone in power.
    """
    grid = [float(p) for p in power_grid]
    if not grid or any(p <= 0 for p in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("power grid must be positive and strictly increasing")
    schemes = tuple(schemes or scenario.schemes)
    cells = [(s, p) for s in schemes for p in grid]
    mc = None
    if trials > 0:
        counts = outage_counts(scenario, cells, trials, seed, workers)
        mc = {cell: OutageEstimate.monte_carlo(c, trials) for cell, c in zip(cells, counts)}
    curves = {}
    for s in schemes:
        curves[s] = [
            TradeoffPoint(
                scheme=s,
                total_power_w=p,
                outage=outage_analytic(s, p, scenario),
                energy_efficiency_bits_per_joule=energy_efficiency(scenario.rate_bps, p),
                outage_mc=None if mc is None else mc[(s, p)],
            )
            for p in grid
        ]
    return curves


def efficiency_at_outage(curve, target_outage: float) -> float:
    """Energy efficiency reached at ``target_outage`` along an analytic curve.

    Interpolates log(efficiency) linearly in log(outage) between the two
    bracketing points. Targets outside the curve's outage range raise
    :class:`OutageTargetError`.
    """
    pts = sorted((pt.outage.mean, pt.energy_efficiency_bits_per_joule)
                 for pt in curve if pt.outage.mean > 0)
    if not 0 < target_outage < 1:
        raise OutageTargetError(f"target outage must lie in (0,1), got {target_outage}")
    for outage, eff in pts:
        if outage == target_outage:
            return eff
    if not pts or not pts[0][0] <= target_outage <= pts[-1][0]:
        lo = pts[0][0] if pts else float("nan")
        hi = pts[-1][0] if pts else float("nan")
        raise OutageTargetError(f"target {target_outage} outside achievable range [{lo}, {hi}]")
    log_out = np.log([o for o, _ in pts])
    log_eff = np.log([e for _, e in pts])
    return float(np.exp(np.interp(math.log(target_outage), log_out, log_eff)))
