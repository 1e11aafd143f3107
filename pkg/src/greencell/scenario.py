"""Scenario configuration: the flat parameter table and the resolved object.

A scenario is described by a flat mapping of named parameters (gains in
dB, everything else SI). :func:`scenario_from_params` validates and
converts it once into a :class:`ScenarioConfig` whose fields are all in
the linear domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .linkmodel import SPEED_OF_LIGHT, LinkParams, NoiseModel, RadioBand, db_to_linear
from .schemes import SchemeKind
from .sensing import SensingProfile


class ConfigError(ValueError):
    """A parameter failed to parse or violates its constraint."""


def _positive(key, value):
    if not value > 0 or not math.isfinite(value):
        raise ConfigError(f"{key} must be > 0 (got {value!r})")


def _probability(key, value):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{key} must lie in [0,1] (got {value!r})")


def _nonnegative(key, value):
    if not value >= 0 or not math.isfinite(value):
        raise ConfigError(f"{key} must be >= 0 (got {value!r})")


def _finite(key, value):
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite (got {value!r})")


def _float(key, raw):
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    try:
        return float(str(raw).strip())
    except ValueError:
        raise ConfigError(f"{key} must be a number (got {raw!r})") from None


def _float_list(key, raw):
    if isinstance(raw, str):
        parts = [p for p in raw.replace(" ", "").split(",") if p]
    else:
        parts = list(raw)
    return tuple(_float(key, p) for p in parts)


def _shares(n):
    def check(key, value):
        if len(value) != n:
            raise ConfigError(f"{key} must have {n} comma-separated entries (got {len(value)})")
        if any(v < 0 for v in value):
            raise ConfigError(f"{key} entries must be >= 0")
        if abs(math.fsum(value) - 1.0) > 1e-12:
            raise ConfigError(f"{key} must sum to 1 (got {math.fsum(value)!r})")
    return check


def _scheme_list(key, raw):
    names = [p.strip() for p in raw.split(",")] if isinstance(raw, str) else list(raw)
    out = []
    for name in names:
        if isinstance(name, SchemeKind):
            out.append(name)
            continue
        try:
            out.append(SchemeKind(name))
        except ValueError:
            valid = ", ".join(s.value for s in SchemeKind)
            raise ConfigError(f"{key}: unknown scheme {name!r} (valid: {valid})") from None
    if not out:
        raise ConfigError(f"{key} must name at least one scheme")
    return tuple(out)


def _nonempty(key, value):
    if not value:
        raise ConfigError(f"{key} must not be empty")


# key -> (default, parser, check). Order here is the manifest order.
PARAMETERS = {
    "carrier_cellular_hz": (2100e6, _float, _positive),
    "bandwidth_cellular_hz": (5e6, _float, _positive),
    "carrier_tv_hz": (55.25e6, _float, _positive),
    "bandwidth_tv_hz": (6e6, _float, _positive),
    "rate_bps": (30e6, _float, _positive),
    "gain_ut_db": (0.0, _float, _finite),
    "gain_bs_db": (5.0, _float, _finite),
    "gain_tvs_db": (5.0, _float, _finite),
    "gain_tvs_interference_db": (5.0, _float, _finite),
    "distance_bu_m": (1000.0, _float, _positive),
    "distance_tu_m": (1000.0, _float, _positive),
    "fading_bu_cellular": (1.0, _float, _positive),
    "fading_bu_tv": (1.0, _float, _positive),
    "fading_tu_cellular": (1.0, _float, _positive),
    "fading_tu_tv": (1.0, _float, _positive),
    "fading_tu_interference": (1.0, _float, _positive),
    "p_detect": (0.99, _float, _probability),
    "p_false_alarm": (0.01, _float, _probability),
    "p_available": (0.8, _float, _probability),
    "tvs_power_w": (45e3, _float, _nonnegative),
    "temperature_k": (290.0, _float, _positive),
    "speed_of_light_m_s": (SPEED_OF_LIGHT, _float, _positive),
    "schemes": (tuple(SchemeKind), _scheme_list, _nonempty),
    "cooperation_shares": ((0.5, 0.5), _float_list, _shares(2)),
    "cognition_idle_shares": ((0.5, 0.5), _float_list, _shares(2)),
    "joint_idle_shares": ((0.25, 0.25, 0.25, 0.25), _float_list, _shares(4)),
}


def resolve_params(params: dict | None = None) -> dict:
    """Fill defaults, parse and validate. Unknown keys are rejected."""
    params = dict(params or {})
    unknown = sorted(set(params) - set(PARAMETERS))
    if unknown:
        raise ConfigError(f"unknown parameter {unknown[0]!r}")
    resolved = {}
    for key, (default, parse, check) in PARAMETERS.items():
        value = parse(key, params[key]) if key in params else default
        check(key, value)
        resolved[key] = value
    return resolved


def format_param(value) -> str:
    """Serialise a resolved parameter so that parsing it back is exact."""
    if isinstance(value, tuple):
        return ",".join(format_param(v) for v in value)
    if isinstance(value, SchemeKind):
        return value.value
    return repr(float(value))


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved, linear-domain scenario.

    Link naming: ``bs_*`` is BS to UT, ``tvs_*`` is the cooperative TVS to UT
    link, ``interference`` is the TV broadcast reaching the UT on a missed
    detection. The ``*_tv`` links are evaluated at the TV carrier.
    """

    cellular: RadioBand
    tv: RadioBand
    bs_cellular: LinkParams
    bs_tv: LinkParams
    tvs_cellular: LinkParams
    tvs_tv: LinkParams
    interference: LinkParams
    tvs_power_w: float
    noise: NoiseModel
    sensing: SensingProfile
    rate_bps: float
    schemes: tuple = tuple(SchemeKind)
    cooperation_shares: tuple = (0.5, 0.5)
    cognition_idle_shares: tuple = (0.5, 0.5)
    joint_idle_shares: tuple = (0.25, 0.25, 0.25, 0.25)
    speed_of_light: float = SPEED_OF_LIGHT
    params: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.rate_bps > 0:
            raise ConfigError(f"rate_bps must be > 0 (got {self.rate_bps!r})")
        if self.tvs_power_w < 0:
            raise ConfigError(f"tvs_power_w must be >= 0 (got {self.tvs_power_w!r})")

    def with_params(self, **overrides) -> "ScenarioConfig":
        """A new scenario with some flat parameters replaced."""
        merged = dict(self.params)
        merged.update(overrides)
        return scenario_from_params(merged)


def scenario_from_params(params: dict | None = None) -> ScenarioConfig:
    p = resolve_params(params)
    g_ut = db_to_linear(p["gain_ut_db"])
    g_bs = db_to_linear(p["gain_bs_db"])
    g_tvs = db_to_linear(p["gain_tvs_db"])
    g_int = db_to_linear(p["gain_tvs_interference_db"])
    d_bu, d_tu = p["distance_bu_m"], p["distance_tu_m"]
    return ScenarioConfig(
        cellular=RadioBand(p["carrier_cellular_hz"], p["bandwidth_cellular_hz"]),
        tv=RadioBand(p["carrier_tv_hz"], p["bandwidth_tv_hz"]),
        bs_cellular=LinkParams(d_bu, g_bs, g_ut, p["fading_bu_cellular"]),
        bs_tv=LinkParams(d_bu, g_bs, g_ut, p["fading_bu_tv"]),
        tvs_cellular=LinkParams(d_tu, g_tvs, g_ut, p["fading_tu_cellular"]),
        tvs_tv=LinkParams(d_tu, g_tvs, g_ut, p["fading_tu_tv"]),
        interference=LinkParams(d_tu, g_int, g_ut, p["fading_tu_interference"]),
        tvs_power_w=p["tvs_power_w"],
        noise=NoiseModel(p["temperature_k"]),
        sensing=SensingProfile(p["p_detect"], p["p_false_alarm"], p["p_available"]),
        rate_bps=p["rate_bps"],
        schemes=p["schemes"],
        cooperation_shares=p["cooperation_shares"],
        cognition_idle_shares=p["cognition_idle_shares"],
        joint_idle_shares=p["joint_idle_shares"],
        speed_of_light=p["speed_of_light_m_s"],
        params=p,
    )


def default_scenario(**overrides) -> ScenarioConfig:
    """The reference scenario (LTE 2100 MHz cell, TV channel 2), optionally overridden."""
    return scenario_from_params(overrides)
