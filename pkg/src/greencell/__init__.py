"""Energy efficiency versus outage for cognitive and cooperative cellular downlinks."""

__version__ = "0.1.0"

from .evaluate import (
    OutageEstimate,
    TradeoffPoint,
    efficiency_at_outage,
    energy_efficiency,
    log_power_grid,
    outage_analytic,
    outage_mc,
    tradeoff_sweep,
)
from .linkmodel import LinkParams, NoiseModel, RadioBand, noise_power, path_gain, received_power
from .scenario import ConfigError, ScenarioConfig, default_scenario, scenario_from_params
from .schemes import SchemeKind, alamouti_decode, alamouti_encode, allocate_power, trial_outage
from .sensing import ChannelState, SensingProfile, joint_outcome_probabilities, roc_curve

__all__ = [
    "ChannelState",
    "ConfigError",
    "LinkParams",
    "NoiseModel",
    "OutageEstimate",
    "RadioBand",
    "ScenarioConfig",
    "SchemeKind",
    "SensingProfile",
    "TradeoffPoint",
    "alamouti_decode",
    "alamouti_encode",
    "allocate_power",
    "default_scenario",
    "efficiency_at_outage",
    "energy_efficiency",
    "joint_outcome_probabilities",
    "log_power_grid",
    "noise_power",
    "outage_analytic",
    "outage_mc",
    "path_gain",
    "received_power",
    "roc_curve",
    "scenario_from_params",
    "trial_outage",
    "tradeoff_sweep",
]
