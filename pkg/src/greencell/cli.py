"""Command-line entry point: ``greencell {sweep,point,compare,roc}``.

Configuration files are ``key = value`` lines with ``#`` comments. Every run
writes a manifest in the same format next to its output (``<out>.manifest``,
or to stderr when writing to stdout). Passing a manifest back as
``--config`` reruns the same command with the same settings.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .evaluate import (
    OutageTargetError,
    efficiency_at_outage,
    energy_efficiency,
    log_power_grid,
    outage_analytic,
    outage_mc,
    tradeoff_sweep,
)
from .scenario import PARAMETERS, ConfigError, ScenarioConfig, format_param, scenario_from_params
from .schemes import SchemeKind
from .sensing import roc_curve

SWEEP_HEADER = "scheme,power_w,outage_mc,outage_stderr,outage_analytic,efficiency_bits_per_joule,mc_reliable"
COMPARE_HEADER = "target_outage,scheme,efficiency_bits_per_joule,gain_vs_direct"
ROC_HEADER = "threshold,p_false_alarm,p_detect"

DEFAULT_SEED = 1
DEFAULT_TRIALS = 100_000
SEED_ENV = "GREENCELL_SEED"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_config_text(text: str, source: str = "<config>") -> tuple[dict, dict]:
    """Split config text into scenario parameters and ``run.*`` manifest entries."""
    params, run = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: missing key")
        if key.startswith("run."):
            run[key[4:]] = value
        elif key in PARAMETERS:
            params[key] = value
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
    return params, run


def read_config(path) -> tuple[ScenarioConfig, dict]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    params, run = parse_config_text(text, str(path))
    return scenario_from_params(params), run


def load_config(path) -> ScenarioConfig:
    """Scenario from a config file; missing keys take the reference defaults."""
    return read_config(path)[0]


def manifest_text(scenario: ScenarioConfig, run: dict) -> str:
    lines = ["# greencell run manifest", f"run.version = {__version__}"]
    lines += [f"run.{k} = {v}" for k, v in run.items()]
    lines += [f"{k} = {format_param(v)}" for k, v in scenario.params.items()]
    return "\n".join(lines) + "\n"


# -- subcommands ----------------------------------------------------------------

def cmd_sweep(scenario: ScenarioConfig, grid, trials: int, seed: int, workers: int = 1) -> str:
    if trials < 1:
        raise ConfigError("--trials must be >= 1 for sweep")
    curves = tradeoff_sweep(scenario, grid, trials, seed, workers)
    buf = io.StringIO()
    buf.write(SWEEP_HEADER + "\n")
    for scheme, curve in curves.items():
        for pt in curve:
            buf.write(",".join([
                scheme.value, fmt(pt.total_power_w), fmt(pt.outage_mc.mean), fmt(pt.outage_mc.stderr),
                fmt(pt.outage.mean), fmt(pt.energy_efficiency_bits_per_joule),
                "true" if pt.mc_reliable else "false",
            ]) + "\n")
    return buf.getvalue()


def cmd_point(scenario: ScenarioConfig, scheme: SchemeKind, power_w: float, trials: int,
              seed: int, workers: int = 1) -> tuple[str, str]:
    """Returns ``(human-readable report, CSV text)``."""
    if trials < 1:
        raise ConfigError("--trials must be >= 1 for point")
    curves = tradeoff_sweep(scenario, [power_w], trials, seed, workers, schemes=[scheme])
    (pt,) = curves[scheme]
    mc = pt.outage_mc
    report = "\n".join([
        f"scheme: {scheme.value}",
        f"total power: {power_w:g} W",
        f"energy efficiency: {pt.energy_efficiency_bits_per_joule:.6g} bit/J",
        f"outage (analytic): {pt.outage.mean:.6g}",
        f"outage (monte carlo): {mc.mean:.6g} +/- {mc.stderr:.2g} ({mc.trials} trials, "
        f"95% CI [{mc.ci_low:.3g}, {mc.ci_high:.3g}]"
        + ("" if pt.mc_reliable else ", MC-unreliable") + ")",
        f"missed-detection probability: {scenario.sensing.p_missed_detection:.6g}",
    ]) + "\n"
    row = ",".join([scheme.value, fmt(power_w), fmt(mc.mean), fmt(mc.stderr), fmt(pt.outage.mean),
                    fmt(pt.energy_efficiency_bits_per_joule), "true" if pt.mc_reliable else "false"])
    return report, f"{SWEEP_HEADER}\n{row}\n"


def cmd_compare(scenario: ScenarioConfig, targets, grid) -> str:
    """Efficiency of each scheme at each outage target, and its gain over direct transmission."""
    for t in targets:
        if not 0 < t < 1:
            raise ConfigError(f"outage target {t!r} must lie in (0,1)")
    schemes = list(scenario.schemes)
    if SchemeKind.DIRECT not in schemes:
        schemes.insert(0, SchemeKind.DIRECT)
    curves = tradeoff_sweep(scenario, grid, 0, 0, schemes=schemes)
    buf = io.StringIO()
    buf.write(COMPARE_HEADER + "\n")
    for target in targets:
        effs = {}
        for s in schemes:
            try:
                effs[s] = efficiency_at_outage(curves[s], target)
            except OutageTargetError:
                effs[s] = None
        ref = effs[SchemeKind.DIRECT]
        for s in scenario.schemes:
            eff = effs[s]
            if eff is None:
                buf.write(f"{fmt(target)},{s.value},unreachable,unreachable\n")
                continue
            gain = "unreachable" if ref is None else fmt(1.0 if s is SchemeKind.DIRECT else eff / ref)
            buf.write(f"{fmt(target)},{s.value},{fmt(eff)},{gain}\n")
    return buf.getvalue()


def cmd_roc(snr: float, num_samples: int, thresholds, trials: int, seed: int) -> str:
    if len(thresholds) == 0:
        raise ConfigError("threshold grid must not be empty")
    rng = np.random.default_rng(seed)
    points = roc_curve(snr, num_samples, thresholds, trials, rng)
    buf = io.StringIO()
    buf.write(ROC_HEADER + "\n")
    for thr, (p_f, p_d) in zip(thresholds, points):
        buf.write(f"{fmt(thr)},{fmt(p_f)},{fmt(p_d)}\n")
    return buf.getvalue()


# -- argument handling ----------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greencell",
                                     description="Energy efficiency vs outage for cognitive/cooperative downlinks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value scenario file (or a run manifest)")
    common.add_argument("--seed", type=int, help=f"64-bit seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--trials", type=int, help=f"Monte Carlo trials (default {DEFAULT_TRIALS})")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--workers", type=int, default=1, help="parallel workers; results do not depend on it")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", parents=[common], help="tradeoff curves over a power grid")
    sweep.add_argument("--pmin", type=float)
    sweep.add_argument("--pmax", type=float)
    sweep.add_argument("--points", type=int)

    point = sub.add_parser("point", parents=[common], help="one scheme at one power")
    point.add_argument("--scheme", choices=[s.value for s in SchemeKind])
    point.add_argument("--power", type=float, help="total transmit power in W")

    compare = sub.add_parser("compare", parents=[common], help="efficiency at outage targets")
    compare.add_argument("--targets", type=_float_list)
    compare.add_argument("--pmin", type=float)
    compare.add_argument("--pmax", type=float)
    compare.add_argument("--points", type=int)

    roc = sub.add_parser("roc", parents=[common], help="energy-detector ROC")
    roc.add_argument("--snr", type=float, help="per-sample SNR, linear")
    roc.add_argument("--samples", type=int)
    roc.add_argument("--thresholds", type=_float_list)
    return parser


# per-subcommand settings: name -> (default, parser for manifest text)
_RUN_SETTINGS = {
    "sweep": {"pmin": (0.01, float), "pmax": (10.0, float), "points": (21, int)},
    "point": {"scheme": ("joint", str), "power": (1.0, float)},
    "compare": {"targets": ([0.001, 0.01, 0.1], _float_list), "pmin": (1e-4, float),
                "pmax": (100.0, float), "points": (121, int)},
    "roc": {"snr": (1.0, float), "samples": (20, int),
            "thresholds": (np.linspace(0.0, 80.0, 41).tolist(), _float_list)},
}


def _resolve(args, run: dict) -> dict:
    """Flag > manifest entry > environment (seed only) > default."""
    if "subcommand" in run and run["subcommand"] != args.command:
        raise ConfigError(f"manifest was written by '{run['subcommand']}', not '{args.command}'")
    settings = {}
    env_seed = os.environ.get(SEED_ENV)
    if args.seed is not None:
        settings["seed"] = args.seed
    elif "seed" in run:
        settings["seed"] = int(run["seed"])
    elif env_seed is not None:
        try:
            settings["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer (got {env_seed!r})") from None
    else:
        settings["seed"] = DEFAULT_SEED
    if not 0 <= settings["seed"] < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    settings["trials"] = args.trials if args.trials is not None else int(run.get("trials", DEFAULT_TRIALS))
    if settings["trials"] < 1:
        raise ConfigError("--trials must be >= 1")
    for name, (default, parse) in _RUN_SETTINGS[args.command].items():
        flag = getattr(args, name)
        settings[name] = flag if flag is not None else (parse(run[name]) if name in run else default)
    return settings


def _run_entries(command: str, s: dict) -> dict:
    entries = {"subcommand": command, "seed": s["seed"], "trials": s["trials"]}
    for name in _RUN_SETTINGS[command]:
        value = s[name]
        if isinstance(value, list):
            value = ",".join(fmt(v) for v in value)
        elif isinstance(value, float):
            value = fmt(value)
        entries[name] = value
    return entries


def _emit(text: str, out: str | None, manifest: str):
    if out is None:
        sys.stdout.write(text)
        sys.stderr.write("".join(f"# {line}\n" for line in manifest.splitlines() if not line.startswith("#")))
        return
    try:
        Path(out).write_text(text)
        Path(out + ".manifest").write_text(manifest)
    except OSError as exc:
        raise ConfigError(f"cannot write {out!r}: {exc.strerror}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            scenario, run = read_config(args.config)
        else:
            scenario, run = scenario_from_params({}), {}
        s = _resolve(args, run)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        manifest = manifest_text(scenario, _run_entries(args.command, s))

        if args.command == "sweep":
            grid = log_power_grid(s["pmin"], s["pmax"], s["points"])
            _emit(cmd_sweep(scenario, grid, s["trials"], s["seed"], args.workers), args.out, manifest)
        elif args.command == "point":
            report, csv_text = cmd_point(scenario, SchemeKind(s["scheme"]), s["power"], s["trials"],
                                         s["seed"], args.workers)
            sys.stdout.write(report)
            if args.out is None:
                sys.stdout.write("\n")
            _emit(csv_text, args.out, manifest)
        elif args.command == "compare":
            grid = log_power_grid(s["pmin"], s["pmax"], s["points"])
            _emit(cmd_compare(scenario, s["targets"], grid), args.out, manifest)
        elif args.command == "roc":
            _emit(cmd_roc(s["snr"], s["samples"], s["thresholds"], s["trials"], s["seed"]),
                  args.out, manifest)
    except ValueError as exc:
        print(f"greencell: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
