"""Command line front end.

Five subcommands map onto the library layers: ``evaluate`` (one working
point), ``optimize`` (best signal intensity plus the matching
reference-pulse floor), ``sweep`` (CSV grids for plotting), ``mc-validate``
(Monte Carlo against the analytic model) and ``budget`` (optical chain
intensities).

Outputs are deterministic: numbers are printed at 9 significant digits
(scientific below 1e-3), JSON key order is fixed, and Monte Carlo runs
are seeded, so identical invocations produce byte-identical files.

Exit codes: 0 success (and, for evaluate, secure), 2 usage or parameter
error, 3 point evaluated insecure, 4 Monte Carlo disagrees with the
analytic model.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .linkbudget import OpticalChain, afterpulse_error, crosstalk_false_click, propagate
from .montecarlo import EvePolicy, McConfig, compare_with_model, simulate, simulate_attack
from .optimize import (
    IDEAL_SOURCE,
    SweepGrid,
    brp_intensity_bound,
    disturbance_tradeoff,
    optimal_signal_intensity,
    sweep,
)
from .params import ChannelParams, DetectorParams, SourceParams
from .security import SecurityReport, evaluate_point

__all__ = ["main", "run", "format_number"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INSECURE = 3
EXIT_MC_MISMATCH = 4

_MC_Z_LIMIT = 4.0
_MC_MIN_PULSES = 10_000


class UsageError(Exception):
    """Bad flags, config keys or parameter values; maps to exit code 2."""


@dataclass
class ExperimentConfig:
    """Merged view of preset, config file and command line flags."""

    preset: str = "gys2004"
    mu_s_values: tuple[float, ...] = (0.5,)
    mu_s_set: bool = False
    mu_b: float = 2.0e5
    length_km: float = 146.0
    loss_db_km: float = 0.21
    eta_d: float = 0.045
    y0: float = 1.7e-6
    e_detector: float = 0.033
    e_0: float = 0.5
    eve_mode: str = "none"
    suppress_fraction: float = 0.0
    forward_multiphoton_lossless: bool = True
    n_pulses: int = 1_000_000
    seed: int = 12345
    source_intensity: float = 8.0e5
    alice_split_long: float = 0.5
    bob_split_long: float = 0.5
    alice_attenuation_db: float = 56.0
    bob_attenuation_db: float = 56.0
    switch_crosstalk_db: float = 20.0
    p_afterpulse: float = 0.008


# detector presets: the long-haul benchmark detector and a noiseless one
_PRESETS: dict[str, dict[str, object]] = {
    "gys2004": {},
    "ideal": {"preset": "ideal", "eta_d": 1.0, "y0": 0.0, "e_detector": 0.0},
}

# config file keys and how to parse their values
_FILE_KEY_TYPES: dict[str, type] = {
    "mu_b": float,
    "length_km": float,
    "loss_db_km": float,
    "eta_d": float,
    "y0": float,
    "e_detector": float,
    "e_0": float,
    "eve_mode": str,
    "suppress_fraction": float,
    "forward_multiphoton_lossless": bool,
    "n_pulses": int,
    "seed": int,
    "source_intensity": float,
    "alice_split_long": float,
    "bob_split_long": float,
    "alice_attenuation_db": float,
    "bob_attenuation_db": float,
    "switch_crosstalk_db": float,
    "p_afterpulse": float,
}


def format_number(value: float) -> str:
    """Format a float at 9 significant digits, scientific below 1e-3."""
    if value != value:
        return "nan"
    if value == 0:
        return "0"
    if abs(value) < 1e-3:
        return f"{value:.8e}"
    return f"{value:.9g}"


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def _json_value(value: object) -> object:
    if isinstance(value, float):
        return float(format_number(value))
    return value


def _render(records: list[dict[str, object]], fmt: str) -> str:
    if fmt == "json":
        payload = [
            {key: _json_value(value) for key, value in record.items()}
            for record in records
        ]
        body = payload[0] if len(payload) == 1 else payload
        return json.dumps(body, indent=2) + "\n"
    columns = list(records[0].keys())
    lines = [",".join(columns)]
    lines.extend(
        ",".join(_cell(record[name]) for name in columns) for record in records
    )
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        # bytes, not text mode: identical output on every platform
        Path(out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise UsageError(f"expected a boolean, got {raw!r}")


def _parse_mu_list(raw: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in raw.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --mu-s value {raw!r}: {exc}") from None
    if not values:
        raise UsageError("--mu-s needs at least one value")
    return values


def _read_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    pairs: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        pairs[key.strip().replace("-", "_")] = value.strip()
    return pairs


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    file_pairs = _read_config_file(args.config) if args.config else {}

    preset = args.preset or file_pairs.pop("preset", None) or "gys2004"
    if preset not in _PRESETS:
        raise UsageError(f"unknown preset {preset!r} (choices: {', '.join(sorted(_PRESETS))})")
    config = ExperimentConfig(**_PRESETS[preset])

    for key, raw in file_pairs.items():
        if key == "mu_s":
            config.mu_s_values = _parse_mu_list(raw)
            config.mu_s_set = True
            continue
        if key not in _FILE_KEY_TYPES:
            raise UsageError(f"unknown config key {key!r} in {args.config}")
        kind = _FILE_KEY_TYPES[key]
        try:
            if kind is bool:
                value: object = _parse_bool(raw)
            else:
                value = kind(raw)
        except ValueError:
            raise UsageError(
                f"bad value for config key {key!r}: {raw!r} (expected {kind.__name__})"
            ) from None
        setattr(config, key, value)

    if config.eve_mode not in ("none", "pns"):
        raise UsageError(f"eve_mode must be 'none' or 'pns', got {config.eve_mode!r}")

    # command line flags win over everything
    if args.mu_s is not None:
        config.mu_s_values = _parse_mu_list(args.mu_s)
        config.mu_s_set = True
    for name in (
        "mu_b",
        "length_km",
        "loss_db_km",
        "eta_d",
        "y0",
        "e_detector",
        "eve_mode",
        "suppress_fraction",
        "n_pulses",
        "seed",
    ):
        value = getattr(args, name)
        if value is not None:
            setattr(config, name, value)
    return config


def _detector(config: ExperimentConfig) -> DetectorParams:
    return DetectorParams(
        eta_d=config.eta_d,
        y0=config.y0,
        e_detector=config.e_detector,
        e_0=config.e_0,
    )


def _single_mu(config: ExperimentConfig, command: str) -> float:
    if len(config.mu_s_values) != 1:
        raise UsageError(f"{command} takes a single --mu-s value, got {len(config.mu_s_values)}")
    return config.mu_s_values[0]


_OPTIMIZE_GRID = tuple(i / 20 for i in range(2, 21))  # 0.10, 0.15, ..., 1.00
_SWEEP_MU_GRID = tuple(i / 10 for i in range(1, 11))  # 0.1, 0.2, ..., 1.0
_SWEEP_LENGTHS = tuple(float(length) for length in range(0, 201))
_DISTURBANCE_GRID = tuple(i / 400 for i in range(0, 101))  # 0 .. 0.25


def _cmd_evaluate(config: ExperimentConfig, args: argparse.Namespace) -> int:
    mu_s = _single_mu(config, "evaluate")
    source = SourceParams(mu_s=mu_s, mu_b=config.mu_b)
    channel = ChannelParams(length_km=config.length_km, loss_db_per_km=config.loss_db_km)
    report = evaluate_point(source, channel, _detector(config))
    record: dict[str, object] = {
        "mu_s": mu_s,
        "mu_b": config.mu_b,
        "length_km": config.length_km,
        "loss_db_km": config.loss_db_km,
    }
    record.update((f.name, getattr(report, f.name)) for f in fields(SecurityReport))
    _emit(_render([record], args.fmt or "json"), args.out)
    return EXIT_OK if report.secure else EXIT_INSECURE


def _cmd_optimize(config: ExperimentConfig, args: argparse.Namespace) -> int:
    grid = config.mu_s_values if config.mu_s_set else _OPTIMIZE_GRID
    det = _detector(config)
    best = optimal_signal_intensity(det, config.loss_db_km, grid)
    channel = ChannelParams(length_km=best.distance_km, loss_db_per_km=config.loss_db_km)
    bound = brp_intensity_bound(best.mu_s_star, channel, det)
    record = {
        "mu_s_star": best.mu_s_star,
        "distance_km": best.distance_km,
        "plateau": best.plateau,
        "unbounded": best.unbounded,
        "mu_b_min": bound.mu_b_min,
        "g_b0_at_bound": bound.g_b0_at_bound,
        "suppression_budget": bound.suppression_budget,
    }
    _emit(_render([record], args.fmt or "json"), args.out)
    return EXIT_OK


def _cmd_sweep(config: ExperimentConfig, args: argparse.Namespace) -> int:
    det = _detector(config)
    mu_values = config.mu_s_values if config.mu_s_set else _SWEEP_MU_GRID
    records: list[dict[str, object]]
    if args.axis == "distance":
        grid = SweepGrid(
            mu_s_values=mu_values,
            length_values_km=_SWEEP_LENGTHS,
            det=det,
            loss_db_per_km=config.loss_db_km,
        )
        records = [
            {
                "mu_s": row.mu_s,
                "length_km": row.length_km,
                "r_bob": row.r_bob,
                "r_eve": row.r_eve,
                "r_s": row.r_s,
            }
            for row in sweep(grid)
        ]
    else:  # disturbance
        records = []
        for label in (IDEAL_SOURCE, *mu_values):
            for d in _DISTURBANCE_GRID:
                i_ab, i_ae = disturbance_tradeoff(label, d)
                records.append({"mu_s": label, "d": d, "i_ab": i_ab, "i_ae": i_ae})
    _emit(_render(records, args.fmt or "csv"), args.out)
    return EXIT_OK


def _cmd_mc_validate(config: ExperimentConfig, args: argparse.Namespace) -> int:
    if config.n_pulses < _MC_MIN_PULSES:
        raise UsageError(
            f"mc-validate needs n_pulses >= {_MC_MIN_PULSES}, got {config.n_pulses}"
        )
    mu_s = _single_mu(config, "mc-validate")
    base = McConfig(
        n_pulses=config.n_pulses,
        source=SourceParams(mu_s=mu_s, mu_b=config.mu_b),
        channel=ChannelParams(length_km=config.length_km, loss_db_per_km=config.loss_db_km),
        det=_detector(config),
        seed=config.seed,
    )
    comparisons = compare_with_model(base, simulate(base))
    if config.eve_mode == "pns":
        attacked = replace(
            base,
            eve=EvePolicy(
                mode="pns",
                suppress_fraction=config.suppress_fraction,
                forward_multiphoton_lossless=config.forward_multiphoton_lossless,
            ),
        )
        comparisons.extend(
            row._replace(name=f"attack_{row.name}")
            for row in compare_with_model(attacked, simulate_attack(attacked))
        )
    records = [
        {
            "quantity": row.name,
            "estimate": row.estimate,
            "target": row.target,
            "se": row.se,
            "z": row.z,
            "ok": abs(row.z) <= _MC_Z_LIMIT,
        }
        for row in comparisons
    ]
    _emit(_render(records, args.fmt or "json"), args.out)
    all_ok = all(record["ok"] for record in records)
    return EXIT_OK if all_ok else EXIT_MC_MISMATCH


def _cmd_budget(config: ExperimentConfig, args: argparse.Namespace) -> int:
    chain = OpticalChain(
        source_intensity=config.source_intensity,
        channel=ChannelParams(length_km=config.length_km, loss_db_per_km=config.loss_db_km),
        alice_split_ratio=(config.alice_split_long, 1.0 - config.alice_split_long),
        bob_split_ratio=(config.bob_split_long, 1.0 - config.bob_split_long),
        alice_attenuation_db=config.alice_attenuation_db,
        bob_attenuation_db=config.bob_attenuation_db,
        switch_crosstalk_db=config.switch_crosstalk_db,
    )
    report = propagate(chain)
    record = {
        "source_intensity": chain.source_intensity,
        "length_km": config.length_km,
        "brp_at_alice": report.brp_at_alice,
        "signal_at_alice": report.signal_at_alice,
        "brp_at_bob": report.brp_at_bob,
        "signal_at_bob": report.signal_at_bob,
        "dim_at_bob": report.dim_at_bob,
        "switch_leak_at_signal_detector": report.switch_leak_at_signal_detector,
        "afterpulse_probability": config.p_afterpulse,
        "afterpulse_error": afterpulse_error(config.p_afterpulse),
        "crosstalk_false_click": crosstalk_false_click(
            report.switch_leak_at_signal_detector, config.eta_d
        ),
    }
    _emit(_render([record], args.fmt or "json"), args.out)
    return EXIT_OK


def _add_shared_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("shared options")
    group.add_argument("--preset", choices=sorted(_PRESETS), help="parameter preset")
    group.add_argument("--config", metavar="PATH", help="flat key = value config file")
    group.add_argument("--mu-s", dest="mu_s", metavar="MU[,MU...]",
                       help="signal intensity; a comma list sets the grid for optimize/sweep")
    group.add_argument("--mu-b", dest="mu_b", type=float, help="reference pulse intensity")
    group.add_argument("--length-km", dest="length_km", type=float, help="fiber length")
    group.add_argument("--loss-db-km", dest="loss_db_km", type=float, help="fiber loss per km")
    group.add_argument("--eta-d", dest="eta_d", type=float, help="detector efficiency")
    group.add_argument("--y0", type=float, help="dark click probability per gate")
    group.add_argument("--e-detector", dest="e_detector", type=float,
                       help="misalignment error rate")
    group.add_argument("--eve-mode", dest="eve_mode", choices=["none", "pns"],
                       help="eavesdropper policy for mc-validate")
    group.add_argument("--suppress-fraction", dest="suppress_fraction", type=float,
                       help="single-photon blocking probability under pns")
    group.add_argument("--n-pulses", dest="n_pulses", type=int, help="Monte Carlo pulses")
    group.add_argument("--seed", type=int, help="Monte Carlo seed")
    group.add_argument("--format", dest="fmt", choices=["csv", "json"], help="output format")
    group.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brp-qkd",
        description="Security analysis of weak-pulse QKD protected by bright reference pulses.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    commands = [
        ("evaluate", _cmd_evaluate, "evaluate the security of one working point"),
        ("optimize", _cmd_optimize, "find the signal intensity maximizing secure reach"),
        ("sweep", _cmd_sweep, "tabulate rates over a distance or disturbance grid"),
        ("mc-validate", _cmd_mc_validate, "check the analytic model against Monte Carlo"),
        ("budget", _cmd_budget, "propagate intensities through the optical chain"),
    ]
    for name, handler, help_text in commands:
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        _add_shared_options(sub)
        if name == "sweep":
            sub.add_argument("axis", choices=["distance", "disturbance"],
                             help="sweep variable")
        sub.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        return args.handler(config, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
